"""The English-fragment APSG from grammar file to minimal DFA.

Instantiates the feature grammar, compiles it with decomposition and prints
the per-stage report next to the published reference figures.  Then it runs
the sentence lists through the automaton and the exact recognizer.

Run with:  python demos/appendix_pipeline.py
"""

from fsapprox import data_path, fsa, load_grammar
from fsapprox.oracle import member
from fsapprox.pipeline import CompileReport, compile_grammar

SENTENCES = [
    "i give a cake to tom",
    "tom sleeps",
    "i eat every nice cake",
    "i sleeps",
    "i eats a cake",
    "i give",
    "tom eat",
]


def main():
    report = CompileReport()
    g = load_grammar(data_path("appendix.apsg"), report=report)
    dfa = compile_grammar(g, report=report)
    print(report.format(timing=True, reference=True))
    print(f"{'sentence':28} dfa    grammar")
    for s in SENTENCES:
        print(f"{s:28} {str(fsa.accepts(dfa, s)):6} {member(g, s.split())}")


if __name__ == "__main__":
    main()
