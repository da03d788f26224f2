"""LR(0) characteristic machine.

The machine is built over the grammar augmented with a fresh start symbol
``S'`` and the rule ``S' -> S`` (always rule 0 of the augmented grammar).
States are closed item sets; transitions are discovered breadth-first from
the initial state, trying terminals before nonterminals, each in name order.
"""

from collections import deque
from dataclasses import dataclass

from .grammar import Grammar, N, Rule, T


class DottedRule(tuple):
    """``(rule index, dot position)`` into ``CharacteristicMachine.grammar.rules``."""

    __slots__ = ()

    def __new__(cls, rule, dot):
        return tuple.__new__(cls, (rule, dot))

    rule = property(lambda self: self[0])
    dot = property(lambda self: self[1])


def augment(g):
    """Return ``g`` with a fresh start ``S'`` and ``S' -> S`` as rule 0."""
    names = {s.name for s in g.nonterminals}
    fresh = g.start.name + "'"
    while fresh in names:
        fresh += "'"
    start = N(fresh)
    rules = (Rule(start, (g.start,)),) + g.rules
    return Grammar(g.terminals, g.nonterminals | {start}, start, rules)


def closure(items, g):
    """Smallest superset of ``items`` closed under prediction.

    ``items`` are ``(rule index, dot)`` pairs into ``g.rules``.
    """
    index = {}
    for i, rule in enumerate(g.rules):
        index.setdefault(rule.lhs, []).append(i)
    return _closure(items, g, index)


def _closure(items, g, index):
    result = set(items)
    todo = list(result)
    predicted = set()
    while todo:
        r, dot = todo.pop()
        rhs = g.rules[r].rhs
        if dot < len(rhs):
            sym = rhs[dot]
            if sym in g.nonterminals and sym not in predicted:
                predicted.add(sym)
                for j in index.get(sym, ()):
                    item = DottedRule(j, 0)
                    if item not in result:
                        result.add(item)
                        todo.append(item)
    return frozenset(DottedRule(*it) for it in result)


@dataclass(frozen=True)
class CharacteristicMachine:
    grammar: Grammar  # augmented
    states: tuple  # frozensets of DottedRule; state id = index
    delta: dict  # (state id, Symbol) -> state id
    finals: frozenset
    start: int = 0

    def transitions_from(self, state):
        return self._out[state]

    def __post_init__(self):
        out = [[] for _ in self.states]
        for (s, sym), t in self.delta.items():
            out[s].append((sym, t))
        for lst in out:
            lst.sort(key=lambda st: self.grammar.symbol_order(st[0]))
        object.__setattr__(self, "_out", tuple(tuple(x) for x in out))
        completed = []
        for items in self.states:
            completed.append(tuple(sorted(
                r for r, dot in items if r != 0 and dot == len(self.grammar.rules[r].rhs)
            )))
        object.__setattr__(self, "completed", tuple(completed))

    @property
    def original_start(self):
        return self.grammar.rules[0].rhs[0]

    def format_state(self, state):
        lines = []
        for r, dot in sorted(self.states[state]):
            rule = self.grammar.rules[r]
            syms = [str(s) for s in rule.rhs]
            syms.insert(dot, ".")
            lines.append(f"{rule.lhs.name} -> {' '.join(syms)}")
        return lines

    def dump(self):
        """Stable text listing of states, items and transitions."""
        out = []
        for s in range(len(self.states)):
            mark = " final" if s in self.finals else ""
            out.append(f"state {s}{mark}")
            out.extend("  " + line for line in self.format_state(s))
            for sym, t in self._out[s]:
                out.append(f"  {sym} -> {t}")
        return "\n".join(out) + "\n"


def build_machine(g):
    """Build the LR(0) characteristic machine of ``g`` (augmented internally)."""
    ag = augment(g)
    index = {}
    for i, rule in enumerate(ag.rules):
        index.setdefault(rule.lhs, []).append(i)
    start = _closure({DottedRule(0, 0)}, ag, index)
    states = [start]
    ids = {start: 0}
    delta = {}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        cores = {}
        for r, dot in states[s]:
            rhs = ag.rules[r].rhs
            if dot < len(rhs):
                cores.setdefault(rhs[dot], set()).add(DottedRule(r, dot + 1))
        for sym in sorted(cores, key=ag.symbol_order):
            target = _closure(cores[sym], ag, index)
            t = ids.get(target)
            if t is None:
                t = ids[target] = len(states)
                states.append(target)
                queue.append(t)
            delta[s, sym] = t
    finals = frozenset(i for i, items in enumerate(states) if DottedRule(0, 1) in items)
    return CharacteristicMachine(ag, tuple(states), delta, finals)


def shift_reduce_accepts(m, tokens):
    """Run the nondeterministic LR(0) shift-reduce recognizer driven by ``m``.

    A stack is determined by its symbols, each entry's state following from
    the previous one through ``delta``, so the search is tabulated: for a
    state ``p``, symbol ``X`` and position ``i`` it records every position
    ``j`` such that pushing ``X`` from ``p`` can consume ``tokens[i:j]``.
    A terminal is pushed by a shift; a nonterminal ``A`` by reducing
    ``A -> alpha`` after pushing ``alpha`` from the same ``p``.  The input
    is accepted when ``S`` can be pushed from the initial state over all of
    it, which is exactly when the stack-based recognizer accepts.
    """
    g = m.grammar
    syms = []
    for tok in tokens:
        sym = T(tok) if isinstance(tok, str) else tok
        if sym not in g.terminals:
            return False
        syms.append(sym)
    n = len(syms)
    span = {}  # (state, nonterminal, i) -> set of end positions

    def ends(p, rhs, i):
        frontier = {(p, i)}
        for x in rhs:
            nxt = set()
            for q, k in frontier:
                t = m.delta.get((q, x))
                if t is None:
                    continue
                if x in g.terminals:
                    if k < n and syms[k] == x:
                        nxt.add((t, k + 1))
                else:
                    nxt.update((t, j) for j in span.get((q, x, k), ()))
            frontier = nxt
            if not frontier:
                break
        return {k for _, k in frontier}

    # (state, rule) pairs with A -> . alpha in the state and a transition on A
    predicted = [
        (p, r)
        for p, items in enumerate(m.states)
        for r, dot in sorted(items)
        if dot == 0 and r != 0 and (p, g.rules[r].lhs) in m.delta
    ]
    changed = True
    while changed:
        changed = False
        for p, r in predicted:
            rule = g.rules[r]
            for i in range(n + 1):
                new = ends(p, rule.rhs, i)
                have = span.setdefault((p, rule.lhs, i), set())
                if not new <= have:
                    have |= new
                    changed = True
    return n in span.get((m.start, m.original_start, 0), ())
