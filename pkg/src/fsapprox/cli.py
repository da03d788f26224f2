"""Command-line driver.

Exit codes: 0 success, 1 I/O failure, 2 grammar syntax error, 3 semantic
error, 4 resource cap exceeded, 5 unsound approximation found by ``check``.
"""

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import fsa
from .errors import GrammarSemanticError, GrammarSyntaxError, ResourceLimitError
from .grammar import format_cfg, prune
from .lr0 import build_machine
from .oracle import enumerate_language, member
from .pipeline import CompileOptions, CompileReport, compile_grammar, load_grammar

EXIT_IO = 1
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3
EXIT_RESOURCE = 4
EXIT_UNSOUND = 5


def _write(path, text):
    """Write ``text`` to ``path`` via a temporary file so failures leave nothing behind."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _show(tokens):
    return " ".join(tokens) if tokens else "ε"


def _options(args):
    # Without unfolding, the command reproduces the basic whole-grammar
    # construction; decomposition alone would already separate contexts.
    return CompileOptions(
        decompose=not (args.no_decompose or args.no_unfold),
        unfold=not args.no_unfold,
        minimize=not args.no_minimize,
        max_unfolded_states=args.max_unfolded_states,
    )


def cmd_compile(args):
    report = CompileReport()
    g = load_grammar(args.grammar, report=report)
    dfa = compile_grammar(g, _options(args), report)
    text = fsa.to_dot(dfa) if args.format == "dot" else fsa.to_text(dfa)
    _write(args.output, text)
    if args.dump_lr0:
        _write(args.dump_lr0, build_machine(prune(g)).dump())
    if args.stats:
        sys.stderr.write(report.format(reference=report.instantiated_nonterminals is not None))
    return 0


def cmd_check(args):
    g = load_grammar(args.grammar)
    dfa = compile_grammar(g, _options(args))
    n = args.max_len
    expected = set(enumerate_language(g, n))
    got = set(fsa.enumerate_accepted(dfa, n))

    def first(words):
        return min(words, key=lambda w: (len(w), w))

    missing = expected - got
    if missing:
        print(f"UNSOUND; witness: {_show(first(missing))}")
        return EXIT_UNSOUND
    extra = got - expected
    if extra:
        print(f"sound, overaccepts; witness: {_show(first(extra))}")
    else:
        print(f"exact ≤ {n}")
    return 0


def cmd_instantiate(args):
    g = load_grammar(args.grammar)
    _write(args.output, format_cfg(g))
    return 0


def cmd_member(args):
    g = load_grammar(args.grammar)
    print("true" if member(g, args.tokens.split()) else "false")
    return 0


def cmd_enumerate(args):
    g = load_grammar(args.grammar)
    lines = [" ".join(w) for w in enumerate_language(g, args.max_len)]
    _write(args.output, "".join(line + "\n" for line in lines))
    return 0


def cmd_accepts(args):
    try:
        automaton = fsa.from_text(Path(args.fsa).read_text())
    except ValueError as exc:
        raise GrammarSyntaxError(f"{args.fsa}: {exc}") from None
    print("true" if fsa.accepts(automaton, args.tokens.split()) else "false")
    return 0


def _compile_flags(p):
    p.add_argument("--no-decompose", action="store_true", help="approximate the whole grammar at once")
    p.add_argument("--no-unfold", action="store_true", help="flatten the whole-grammar characteristic machine directly (implies --no-decompose)")
    p.add_argument("--no-minimize", action="store_true", help="determinize only")
    p.add_argument("--max-unfolded-states", type=int, default=100_000, metavar="N")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fsapprox",
        description="Finite-state approximation of context-free grammars.",
        epilog="FSAPPROX_SEED is reserved and currently ignored; the CLI is deterministic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a .cfg/.apsg grammar into a DFA")
    p.add_argument("grammar")
    p.add_argument("-o", "--output", metavar="PATH")
    p.add_argument("--format", choices=("fsa", "dot"), default="fsa")
    p.add_argument("--stats", action="store_true", help="print compilation statistics to stderr")
    p.add_argument("--dump-lr0", metavar="PATH", help="write the whole-grammar LR(0) machine listing")
    _compile_flags(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("check", help="verify soundness and exactness against the grammar")
    p.add_argument("grammar")
    p.add_argument("--max-len", type=int, default=6, metavar="N")
    _compile_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("instantiate", help="expand an .apsg grammar into CFG text")
    p.add_argument("grammar")
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_instantiate)

    p = sub.add_parser("member", help="test grammar membership of a token string")
    p.add_argument("grammar")
    p.add_argument("tokens")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("enumerate", help="list grammar sentences up to a length")
    p.add_argument("grammar")
    p.add_argument("--max-len", type=int, default=6, metavar="N")
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("accepts", help="test a token string against an FSA file")
    p.add_argument("fsa")
    p.add_argument("tokens")
    p.set_defaults(func=cmd_accepts)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GrammarSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except GrammarSemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
