"""Why stack unfolding matters: the two contexts of x in G2.

G2 has s => a x a | b x b and x => c.  In the LR(0) machine both contexts
reach the same x-state, so flattening without unfolding forgets which
bracket was opened and lets "a c b" through.  Unfolding splits that state
by stack class and the approximation becomes exact.

Run with:  python demos/g2_unfolding.py
"""

from fsapprox import data_path, fsa, load_grammar
from fsapprox.lr0 import build_machine
from fsapprox.pipeline import CompileOptions, compile_grammar
from fsapprox.unfold import enumerate_stacks


def show(title, dfa):
    accepted = [" ".join(w) for w in fsa.enumerate_accepted(dfa, 5)]
    print(f"{title}: {fsa.size(dfa)[0]} states, accepts {accepted}")


def main():
    g = load_grammar(data_path("g2.cfg"))
    m = build_machine(g)
    print(f"LR(0) machine: {len(m.states)} states")
    for state, classes in sorted(enumerate_stacks(m).items()):
        if len(classes) > 1:
            print(f"  state {state} has {len(classes)} stack classes:")
            for sigma in classes:
                print("    " + " ".join(f"<{s},{sym}>" for s, sym in sigma))
    show("with unfolding", compile_grammar(g))
    show("without unfolding", compile_grammar(g, CompileOptions(decompose=False, unfold=False)))


if __name__ == "__main__":
    main()
