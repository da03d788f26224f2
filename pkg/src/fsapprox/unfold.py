"""Stack-congruence unfolding of a characteristic machine.

A stack is a sequence of ``(state, symbol)`` entries chained through the
machine from the initial state.  A segment whose entries lead back to the
state of its first entry is a loop; collapsing removes loops (leftmost
first, shortest first) until none remain.  Stacks that collapse to the same
loop-free stack are equivalent, and the unfolded machine has one state per
``(machine state, equivalence class)`` pair.
"""

from collections import deque
from dataclasses import dataclass

from .errors import ResourceLimitError

DEFAULT_MAX_UNFOLDED_STATES = 100_000


class UnfoldLimitError(ResourceLimitError):
    pass


def _arrival_states(m, stack):
    """States ``q_0 .. q_k`` of the entries plus the arrival state ``q_{k+1}``."""
    states = []
    expected = m.start
    for i, (state, sym) in enumerate(stack):
        if state != expected:
            raise ValueError(f"stack is not chained at entry {i}: expected state {expected}, got {state}")
        states.append(state)
        expected = m.delta.get((state, sym))
        if expected is None:
            raise ValueError(f"no transition from state {state} on {sym}")
    states.append(expected)
    return states


def collapse(m, stack):
    """Collapse ``stack`` (a sequence of ``(state, symbol)`` pairs) to its loop-free form."""
    stack = tuple(stack)
    states = _arrival_states(m, stack)
    while True:
        cut = _leftmost_loop(states)
        if cut is None:
            return stack
        i, end = cut
        stack = stack[:i] + stack[end:]
        states = states[:i] + states[end:]


def _leftmost_loop(states):
    """Return ``(i, end)`` so that entries ``i..end-1`` form the leftmost minimal loop."""
    for i, q in enumerate(states[:-1]):
        for end in range(i + 1, len(states)):
            if states[end] == q:
                return i, end
    return None


def is_canonical(m, stack):
    states = _arrival_states(m, stack)
    return len(set(states)) == len(states)


def enumerate_stacks(m):
    """Map each reachable state to the set of loop-free stacks associated with it."""
    stacks = {m.start: {()}}
    todo = deque([(m.start, ())])
    while todo:
        s, sigma = todo.popleft()
        on_stack = {q for q, _ in sigma}
        on_stack.add(s)
        for sym, t in m.transitions_from(s):
            if t in on_stack:
                continue
            extended = sigma + ((s, sym),)
            bucket = stacks.setdefault(t, set())
            if extended not in bucket:
                bucket.add(extended)
                todo.append((t, extended))
    return stacks


@dataclass(frozen=True)
class UnfoldedMachine:
    """States are ``(base state, canonical stack)``; ``stack`` is None for the trivial congruence."""

    machine: object  # CharacteristicMachine
    states: tuple
    delta: dict  # (unfolded id, Symbol) -> unfolded id
    finals: frozenset
    start: int = 0

    def base(self, p):
        return self.states[p][0]

    def items(self, p):
        return self.machine.states[self.states[p][0]]

    def per_base_counts(self):
        counts = {}
        for base, _ in self.states:
            counts[base] = counts.get(base, 0) + 1
        return counts


def _push(m, sigma, state, sym, target):
    """Canonical form of ``sigma + (state, sym)`` given that ``sigma`` is canonical."""
    if target == state:
        return sigma
    for i, (q, _) in enumerate(sigma):
        if q == target:
            return sigma[:i]
    return sigma + ((state, sym),)


def unfold(m, max_states=DEFAULT_MAX_UNFOLDED_STATES):
    """Unfold ``m`` by the loop-collapsing stack congruence."""
    start = (m.start, ())
    ids = {start: 0}
    states = [start]
    delta = {}
    queue = deque([0])
    while queue:
        p = queue.popleft()
        s, sigma = states[p]
        for sym, t in m.transitions_from(s):
            target = (t, _push(m, sigma, s, sym, t))
            q = ids.get(target)
            if q is None:
                if len(states) >= max_states:
                    _raise_limit(m, states, max_states)
                q = ids[target] = len(states)
                states.append(target)
                queue.append(q)
            delta[p, sym] = q
    finals = frozenset(p for p, (s, _) in enumerate(states) if s in m.finals)
    return UnfoldedMachine(m, tuple(states), delta, finals)


def _raise_limit(m, states, limit):
    counts = {}
    for s, _ in states:
        counts[s] = counts.get(s, 0) + 1
    worst = max(sorted(counts), key=counts.get)
    items = "; ".join(m.format_state(worst))
    raise UnfoldLimitError(
        f"unfolding exceeded {limit} states; LR(0) state {worst} already has "
        f"{counts[worst]} stack classes ({items})",
        limit,
        site=worst,
    )


def trivial_unfold(m):
    """View ``m`` itself as an unfolded machine (one class per state)."""
    states = tuple((s, None) for s in range(len(m.states)))
    return UnfoldedMachine(m, states, dict(m.delta), frozenset(m.finals), m.start)
