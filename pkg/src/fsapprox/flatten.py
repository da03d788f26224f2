"""Flattening: drop the stack, keep terminal shifts, turn reductions into epsilon moves."""

from .fsa import EPS, Nfa


def pop_table(u):
    """Map each unfolded state to the states reachable from it by one reduction.

    ``q in Pop(p)`` iff ``p`` holds a completed item ``A -> alpha.`` and some
    state ``r`` holding ``A -> .alpha`` has ``delta(r, alpha) = p`` and
    ``delta(r, A) = q``.  Computed by walking ``alpha`` forward from every
    ``r``.  The augmented rule ``S' -> S`` is acceptance, not a reduction.
    """
    g = u.machine.grammar
    pops = {p: set() for p in range(len(u.states))}
    for r in range(len(u.states)):
        for rule_idx, dot in u.items(r):
            if dot != 0 or rule_idx == 0:
                continue
            rule = g.rules[rule_idx]
            target = u.delta.get((r, rule.lhs))
            if target is None:
                continue
            p = r
            for sym in rule.rhs:
                p = u.delta.get((p, sym))
                if p is None:
                    break
            else:
                pops[p].add(target)
    return pops


def flatten(u):
    """NFA with the states of ``u``: terminal shifts plus one epsilon edge per Pop entry."""
    g = u.machine.grammar
    transitions = set()
    for (p, sym), q in u.delta.items():
        if sym in g.terminals:
            transitions.add((p, sym, q))
    for p, targets in pop_table(u).items():
        for q in targets:
            transitions.add((p, EPS, q))
    alphabet = sorted(g.terminals)
    return Nfa(alphabet, len(u.states), u.start, u.finals, transitions)
