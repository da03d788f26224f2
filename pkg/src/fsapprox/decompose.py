"""Grammar decomposition into strongly connected components and recombination.

Each nonterminal ``X`` belongs to one component of the graph with an arc
``A -> B`` whenever ``B`` occurs on the right of an ``A`` rule.  Its
defining subgrammar has start ``X``, the component's rules, and treats
nonterminals of other components as terminals ("pseudoterminals").  Each
subgrammar is approximated on its own; the resulting automata are spliced
back together by replacing pseudoterminal arcs with fresh copies of the
pseudoterminal's automaton.
"""

import enum
import time
from dataclasses import dataclass, field

from . import fsa
from .errors import FsApproxError
from .flatten import flatten
from .grammar import Grammar
from .graphs import strongly_connected_components
from .lr0 import build_machine
from .unfold import DEFAULT_MAX_UNFOLDED_STATES, trivial_unfold, unfold


class Linearity(enum.Enum):
    LEFT = "left_linear"
    RIGHT = "right_linear"
    NEITHER = "neither"


@dataclass(frozen=True)
class Component:
    id: int
    members: frozenset
    rules: tuple
    pseudoterminals: frozenset

    @property
    def representative(self):
        return min(self.members)


def conn_graph(g):
    """Adjacency lists ``A -> [B, ...]`` in order of first occurrence in the rules."""
    graph = {a: [] for a in sorted(g.nonterminals)}
    for rule in g.rules:
        succ = graph[rule.lhs]
        for s in rule.rhs:
            if s in g.nonterminals and s not in succ:
                succ.append(s)
    return graph


def components(g):
    """Strongly connected components of the nonterminal graph, dependencies first."""
    result = []
    for i, members in enumerate(strongly_connected_components(conn_graph(g))):
        members = frozenset(members)
        rules = tuple(r for r in g.rules if r.lhs in members)
        pseudo = frozenset(s for r in rules for s in r.rhs if s in g.nonterminals and s not in members)
        result.append(Component(i, members, rules, pseudo))
    return result


def defining_subgrammar(g, comp, x):
    if x not in comp.members:
        raise ValueError(f"{x} is not a member of component {comp.id}")
    return Grammar(g.terminals | comp.pseudoterminals, comp.members, x, comp.rules)


def classify_linearity(sub):
    """Left-linear, right-linear or neither; right wins when both hold."""
    left = right = True
    for rule in sub.rules:
        positions = [i for i, s in enumerate(rule.rhs) if s in sub.nonterminals]
        if len(positions) > 1:
            return Linearity.NEITHER
        if positions:
            left = left and positions[0] == 0
            right = right and positions[0] == len(rule.rhs) - 1
    if right:
        return Linearity.RIGHT
    if left:
        return Linearity.LEFT
    return Linearity.NEITHER


@dataclass
class SubAutomaton:
    owner: object  # Symbol
    dfa: fsa.Dfa
    linearity: Linearity = Linearity.NEITHER
    lr0_states: int = 0
    unfolded_states: int = 0
    unfolded: bool = False
    nfa_states: int = 0
    nfa_transitions: int = 0
    seconds: dict = field(default_factory=dict)


def approximate_component(
    sub,
    unfold_stacks=True,
    minimize=True,
    max_unfolded_states=DEFAULT_MAX_UNFOLDED_STATES,
    right_linear_exemption=True,
    max_dfa_states=fsa.DEFAULT_MAX_DFA_STATES,
):
    """Approximate one (sub)grammar: LR(0) machine, unfold, flatten, determinize, minimize.

    Unfolding is skipped for right-linear grammars when
    ``right_linear_exemption`` is set, since it cannot change their language.
    """
    timings = {}
    t0 = time.perf_counter()
    linearity = classify_linearity(sub)
    m = build_machine(sub)
    t1 = time.perf_counter()
    timings["lr0"] = t1 - t0
    do_unfold = unfold_stacks and not (right_linear_exemption and linearity is Linearity.RIGHT)
    u = unfold(m, max_unfolded_states) if do_unfold else trivial_unfold(m)
    t2 = time.perf_counter()
    timings["unfold"] = t2 - t1
    nfa = flatten(u)
    t3 = time.perf_counter()
    timings["flatten"] = t3 - t2
    dfa = fsa.determinize(nfa, max_dfa_states)
    if minimize:
        dfa = fsa.minimize(dfa)
    timings["determinize"] = time.perf_counter() - t3
    return SubAutomaton(
        owner=sub.start,
        dfa=dfa,
        linearity=linearity,
        lr0_states=len(m.states),
        unfolded_states=len(u.states) if do_unfold else 0,
        unfolded=do_unfold,
        nfa_states=nfa.n_states,
        nfa_transitions=len(nfa.transitions),
        seconds=timings,
    )


class RecombinationError(FsApproxError):
    pass


def recombine(subs, root, splices=None, alphabet=()):
    """Splice subautomata into one NFA over true terminals.

    ``subs`` maps each needed nonterminal to its :class:`SubAutomaton` (or a
    bare automaton).  Starting from ``subs[root]``, every arc labeled with a
    nonterminal ``X`` becomes an epsilon arc into a fresh copy of ``subs[X]``
    plus epsilon arcs from the copy's finals back to the arc's target.
    The result's alphabet is ``alphabet`` plus every terminal label seen.
    When ``splices`` is a list, ``(owner, first state id, state count)`` is
    appended for every copy made.
    """
    transitions = []
    alphabet = set(alphabet)
    counter = [0]

    def copy(x):
        sub = subs.get(x)
        if sub is None:
            raise RecombinationError(f"no subautomaton for {x}")
        aut = sub.dfa if isinstance(sub, SubAutomaton) else sub
        offset = counter[0]
        counter[0] += aut.n_states
        if splices is not None:
            splices.append((x, offset, aut.n_states))
        for src, label, dst in aut.sorted_transitions():
            if label is not fsa.EPS and getattr(label, "nonterminal", False):
                inner_start, inner_finals = copy(label)
                transitions.append((offset + src, fsa.EPS, inner_start))
                for f in inner_finals:
                    transitions.append((f, fsa.EPS, offset + dst))
            else:
                if label is not fsa.EPS:
                    alphabet.add(label)
                transitions.append((offset + src, label, offset + dst))
        return offset + aut.start, sorted(offset + f for f in aut.finals)

    start, finals = copy(root)
    return fsa.Nfa(alphabet, counter[0], start, finals, transitions)
