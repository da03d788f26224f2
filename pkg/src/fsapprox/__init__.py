"""Finite-state approximation of context-free grammars.

The pipeline builds the LR(0) characteristic machine of a grammar, unfolds
its states by stack equivalence class, flattens the result into an NFA and
determinizes and minimizes it.  The resulting automaton accepts every
sentence of the grammar and is exact for left- and right-linear grammars.
Grammars may be written as plain CFGs (``.cfg``) or as finite-feature
phrase-structure grammars (``.apsg``) that are expanded first.
"""

from pathlib import Path

from .apsg import instantiate, parse_apsg
from .decompose import (
    Linearity,
    approximate_component,
    classify_linearity,
    components,
    defining_subgrammar,
    recombine,
)
from .errors import (
    FsApproxError,
    GrammarError,
    GrammarSemanticError,
    GrammarSyntaxError,
    ResourceLimitError,
)
from .flatten import flatten, pop_table
from .fsa import (
    Dfa,
    Nfa,
    accepts,
    bounded_equivalent,
    determinize,
    enumerate_accepted,
    equivalent,
    from_text,
    minimize,
    shortest_difference,
    to_dot,
    to_text,
)
from .grammar import N, Grammar, Rule, Symbol, T, format_cfg, parse_cfg, prune
from .lr0 import build_machine, shift_reduce_accepts
from .oracle import enumerate_language, member
from .pipeline import CompileOptions, CompileReport, compile_grammar, load_grammar
from .unfold import collapse, enumerate_stacks, is_canonical, trivial_unfold, unfold

DATA_DIR = Path(__file__).parent / "data"

__version__ = "0.1.0"


def data_path(name):
    """Path of a bundled grammar, e.g. ``data_path("g2.cfg")``."""
    return DATA_DIR / name
