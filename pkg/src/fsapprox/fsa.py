"""Finite automata: epsilon-NFAs, DFAs and the usual algebra on them.

States are dense integers.  Labels are any sortable hashable values (plain
token strings for finished automata, grammar symbols inside the compiler);
``EPS`` (``None``) marks epsilon transitions.  Every automaton carries its
alphabet explicitly.
"""

from collections import deque
from dataclasses import dataclass, field

from .errors import ResourceLimitError
from .graphs import strongly_connected_components

EPS = None
EPS_TEXT = "eps"
DEFAULT_MAX_DFA_STATES = 1_000_000


class DeterminizeLimitError(ResourceLimitError):
    pass


def _label_key(label):
    return (0, "") if label is EPS else (1, label)


def _tokens(w):
    return w.split() if isinstance(w, str) else list(w)


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple
    n_states: int
    start: int
    finals: frozenset
    transitions: frozenset  # (src, label or EPS, dst)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        if not 0 <= self.start < max(self.n_states, 1) or self.n_states < 1:
            raise ValueError("start state out of range")
        sigma = set(self.alphabet)
        out = {}
        for src, label, dst in self.transitions:
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError(f"transition {src} -{label}-> {dst} out of range")
            if label is not EPS and label not in sigma:
                raise ValueError(f"label {label!r} not in alphabet")
            out.setdefault(src, {}).setdefault(label, set()).add(dst)
        if any(not 0 <= f < self.n_states for f in self.finals):
            raise ValueError("final state out of range")
        object.__setattr__(self, "_out", out)

    def successors(self, state, label):
        return self._out.get(state, {}).get(label, ())

    def labels_from(self, state):
        return self._out.get(state, {}).keys()

    def epsilon_closure(self, states):
        result = set(states)
        stack = list(result)
        while stack:
            for t in self.successors(stack.pop(), EPS):
                if t not in result:
                    result.add(t)
                    stack.append(t)
        return frozenset(result)

    def sorted_transitions(self):
        return sorted(self.transitions, key=lambda t: (t[0], _label_key(t[1]), t[2]))


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple
    n_states: int
    start: int
    finals: frozenset
    delta: dict  # (state, label) -> state
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "delta", dict(self.delta))
        if self.n_states < 1 or not 0 <= self.start < self.n_states:
            raise ValueError("start state out of range")
        sigma = set(self.alphabet)
        out = {}
        for (src, label), dst in self.delta.items():
            if label is EPS:
                raise ValueError("a DFA cannot have epsilon transitions")
            if label not in sigma:
                raise ValueError(f"label {label!r} not in alphabet")
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError(f"transition {src} -{label}-> {dst} out of range")
            out.setdefault(src, []).append((label, dst))
        for lst in out.values():
            lst.sort(key=lambda x: x[0])
        if any(not 0 <= f < self.n_states for f in self.finals):
            raise ValueError("final state out of range")
        object.__setattr__(self, "_out", out)

    @property
    def transitions(self):
        return frozenset((s, a, t) for (s, a), t in self.delta.items())

    def arcs(self, state):
        """Outgoing ``(label, target)`` pairs of ``state`` in label order."""
        return self._out.get(state, ())

    def step(self, state, label):
        return self.delta.get((state, label))

    def sorted_transitions(self):
        return sorted(self.transitions, key=lambda t: (t[0], _label_key(t[1]), t[2]))

    def to_nfa(self):
        return Nfa(self.alphabet, self.n_states, self.start, self.finals, self.transitions)


def size(a):
    """``(states, transitions)`` of an automaton."""
    return a.n_states, len(a.transitions)


def condense_epsilon(a):
    """Merge the states of each epsilon-cycle; the language is unchanged.

    States on a common epsilon-cycle have equal closures, so determinization
    of the (often much smaller) quotient does the same work once.
    """
    graph = {s: [] for s in range(a.n_states)}
    for s, label, t in a.transitions:
        if label is EPS:
            graph[s].append(t)
    sccs = strongly_connected_components(graph)
    if len(sccs) == a.n_states:
        return a
    # number the classes by their smallest member to stay deterministic
    sccs.sort(key=min)
    cls = {s: i for i, scc in enumerate(sccs) for s in scc}
    transitions = {
        (cls[s], label, cls[t])
        for s, label, t in a.transitions
        if not (label is EPS and cls[s] == cls[t])
    }
    finals = {cls[f] for f in a.finals}
    return Nfa(a.alphabet, len(sccs), cls[a.start], finals, transitions)


def determinize(a, max_states=DEFAULT_MAX_DFA_STATES):
    """Subset construction, discovering subsets breadth-first from the closed start set."""
    if isinstance(a, Dfa):
        return a
    a = condense_epsilon(a)
    start = a.epsilon_closure({a.start})
    ids = {start: 0}
    subsets = [start]
    delta = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        moves = {}
        for s in subsets[i]:
            for label in a.labels_from(s):
                if label is not EPS:
                    moves.setdefault(label, set()).update(a.successors(s, label))
        for label in sorted(moves):
            target = a.epsilon_closure(moves[label])
            j = ids.get(target)
            if j is None:
                if len(subsets) >= max_states:
                    raise DeterminizeLimitError(
                        f"determinization exceeded {max_states} subset states", max_states
                    )
                j = ids[target] = len(subsets)
                subsets.append(target)
                queue.append(j)
            delta[i, label] = j
    finals = {i for i, sub in enumerate(subsets) if sub & a.finals}
    return Dfa(a.alphabet, len(subsets), 0, finals, delta)


def _live_states(d):
    forward = {d.start}
    queue = deque([d.start])
    while queue:
        for _, t in d.arcs(queue.popleft()):
            if t not in forward:
                forward.add(t)
                queue.append(t)
    backward_edges = {}
    for (s, _), t in d.delta.items():
        backward_edges.setdefault(t, []).append(s)
    live = set(d.finals & forward)
    queue = deque(live)
    while queue:
        for s in backward_edges.get(queue.popleft(), ()):
            if s in forward and s not in live:
                live.add(s)
                queue.append(s)
    return live


def empty_dfa(alphabet=()):
    return Dfa(alphabet, 1, 0, frozenset(), {})


def canonical(d, keep=None):
    """Renumber the states of ``d`` reachable from the start, breadth-first in label order.

    ``keep`` restricts the states that may be visited (default: all).
    """
    order = {d.start: 0}
    queue = deque([d.start])
    delta = {}
    while queue:
        s = queue.popleft()
        for label, t in d.arcs(s):
            if keep is not None and t not in keep:
                continue
            if t not in order:
                order[t] = len(order)
                queue.append(t)
            delta[order[s], label] = order[t]
    finals = {order[s] for s in d.finals if s in order}
    return Dfa(d.alphabet, len(order), 0, finals, delta)


def trim(d):
    """Drop unreachable and dead states (the empty language keeps one start state)."""
    live = _live_states(d)
    if d.start not in live:
        return empty_dfa(d.alphabet)
    return canonical(d, keep=live)


def minimize(d):
    """Minimal DFA for ``L(d)``, without dead or unreachable states, canonically numbered.

    Partition refinement: start from final/non-final, split blocks by the
    signature of successor blocks (a missing transition counts as going to
    the implicit dead state) until stable.
    """
    if isinstance(d, Nfa):
        d = determinize(d)
    d = trim(d)
    if not d.finals:
        return d
    block = [1 if s in d.finals else 0 for s in range(d.n_states)]
    n_blocks = len(set(block))
    while True:
        signatures = {}
        new_block = []
        for s in range(d.n_states):
            sig = (block[s],) + tuple((label, block[t]) for label, t in d.arcs(s))
            new_block.append(signatures.setdefault(sig, len(signatures)))
        stable = len(signatures) == n_blocks
        block, n_blocks = new_block, len(signatures)
        if stable:
            break
    delta = {(block[s], label): block[t] for (s, label), t in d.delta.items()}
    finals = {block[s] for s in d.finals}
    quotient = Dfa(d.alphabet, n_blocks, block[d.start], finals, delta)
    return canonical(quotient)


def accepts(a, w):
    """True iff the token sequence ``w`` is in ``L(a)``.  Strings are split on whitespace."""
    w = _tokens(w)
    if isinstance(a, Dfa):
        state = a.start
        for tok in w:
            state = a.delta.get((state, tok))
            if state is None:
                return False
        return state in a.finals
    current = a.epsilon_closure({a.start})
    for tok in w:
        nxt = set()
        for s in current:
            nxt.update(a.successors(s, tok))
        if not nxt:
            return False
        current = a.epsilon_closure(nxt)
    return bool(current & a.finals)


def rejected(a, strings):
    """The members of ``strings`` that ``a`` does not accept, in input order.

    Shared prefixes are simulated once, which makes checking a whole
    enumerated language against a large NFA affordable.
    """
    strings = [tuple(_tokens(w)) for w in strings]
    if isinstance(a, Dfa):
        return [w for w in strings if not accepts(a, w)]
    a = condense_epsilon(a)
    memo = {(): frozenset(a.epsilon_closure({a.start}))}

    def reach(prefix):
        found = memo.get(prefix)
        if found is None:
            prev = reach(prefix[:-1])
            moved = set()
            for q in prev:
                moved.update(a.successors(q, prefix[-1]))
            found = memo[prefix] = frozenset(a.epsilon_closure(moved)) if moved else frozenset()
        return found

    return [w for w in strings if not reach(w) & a.finals]


def _as_dfa(a):
    return a if isinstance(a, Dfa) else determinize(a)


def shortest_difference(a, b, maxlen=None):
    """Shortest (then lexicographically least) string accepted by exactly one of ``a``, ``b``.

    Returns a tuple of tokens, or None when the languages agree (on strings
    up to ``maxlen`` when given).  Labels missing from one alphabet lead to
    its dead state.
    """
    a, b = _as_dfa(a), _as_dfa(b)
    labels = sorted(set(a.alphabet) | set(b.alphabet))
    start = (a.start, b.start)
    parent = {start: None}
    queue = deque([(start, 0)])

    def disagree(pair):
        x, y = pair
        return (x is not None and x in a.finals) != (y is not None and y in b.finals)

    def path(pair):
        out = []
        while parent[pair] is not None:
            pair, label = parent[pair]
            out.append(label)
        return tuple(reversed(out))

    if disagree(start):
        return ()
    while queue:
        pair, depth = queue.popleft()
        if maxlen is not None and depth >= maxlen:
            continue
        x, y = pair
        for label in labels:
            nx = a.delta.get((x, label)) if x is not None else None
            ny = b.delta.get((y, label)) if y is not None else None
            if nx is None and ny is None:
                continue
            nxt = (nx, ny)
            if nxt in parent:
                continue
            parent[nxt] = (pair, label)
            if disagree(nxt):
                return path(nxt)
            queue.append((nxt, depth + 1))
    return None


def equivalent(a, b):
    """Decide ``L(a) == L(b)`` exactly via the product automaton."""
    return shortest_difference(a, b) is None


def bounded_equivalent(a, b, maxlen):
    """Compare acceptance on all strings of length <= ``maxlen``.

    Returns ``(agree, witness)`` where ``witness`` is the shortest
    disagreeing string or None.
    """
    witness = shortest_difference(a, b, maxlen)
    return witness is None, witness


def enumerate_accepted(a, maxlen):
    """All accepted strings of length <= ``maxlen``, shortest first, then lexicographic.

    NFAs are explored subset by subset along the strings themselves, so a
    large determinization is never built.
    """
    if isinstance(a, Nfa):
        return _enumerate_nfa(a, maxlen)
    live = _live_states(a)
    if a.start not in live:
        return []
    result = []
    level = [((), a.start)]
    for length in range(maxlen + 1):
        result.extend(w for w, s in level if s in a.finals)
        if length == maxlen:
            break
        level = [(w + (label,), t) for w, s in level for label, t in a.arcs(s) if t in live]
    return result


def _enumerate_nfa(a, maxlen):
    a = condense_epsilon(a)
    # states that can still reach a final state
    back = {}
    for s, _, t in a.transitions:
        back.setdefault(t, []).append(s)
    useful = set(a.finals)
    stack = list(useful)
    while stack:
        for s in back.get(stack.pop(), ()):
            if s not in useful:
                useful.add(s)
                stack.append(s)
    result = []
    start = frozenset(a.epsilon_closure({a.start}) & useful)
    level = [((), start)] if start else []
    for length in range(maxlen + 1):
        result.extend(w for w, states in level if states & a.finals)
        if length == maxlen:
            break
        nxt = []
        for w, states in level:
            moves = {}
            for q in states:
                for label in a.labels_from(q):
                    if label is not EPS:
                        moves.setdefault(label, set()).update(a.successors(q, label))
            for label in sorted(moves):
                target = frozenset(a.epsilon_closure(moves[label]) & useful)
                if target:
                    nxt.append((w + (label,), target))
        level = nxt
    return result


def from_strings(strings, alphabet=()):
    """Minimal DFA accepting exactly the given finite set of token sequences."""
    strings = [tuple(_tokens(w)) for w in strings]
    labels = set(alphabet) | {tok for w in strings for tok in w}
    delta = {}
    finals = set()
    n = 1
    for w in strings:
        s = 0
        for tok in w:
            t = delta.get((s, tok))
            if t is None:
                t = delta[s, tok] = n
                n += 1
            s = t
        finals.add(s)
    return minimize(Dfa(labels, n, 0, finals, delta))


def relabel(a, fn):
    """Apply ``fn`` to every non-epsilon label (and the alphabet)."""
    alphabet = [fn(x) for x in a.alphabet]
    if isinstance(a, Dfa):
        return Dfa(alphabet, a.n_states, a.start, a.finals, {(s, fn(x)): t for (s, x), t in a.delta.items()})
    trans = {(s, x if x is EPS else fn(x), t) for s, x, t in a.transitions}
    return Nfa(alphabet, a.n_states, a.start, a.finals, trans)


def _label_text(label):
    if label is EPS:
        return EPS_TEXT
    text = str(label)
    if not text or any(c.isspace() for c in text) or text == EPS_TEXT:
        raise ValueError(f"label {label!r} cannot be written in the text format")
    return text


def to_text(a):
    """Serialize to the line-oriented ``fsa 1`` text format."""
    lines = [
        "fsa 1",
        " ".join(["alphabet"] + [_label_text(x) for x in a.alphabet]),
        f"states {a.n_states}",
        f"start {a.start}",
        " ".join(["final"] + [str(f) for f in sorted(a.finals)]),
    ]
    for src, label, dst in a.sorted_transitions():
        lines.append(f"trans {src} {_label_text(label)} {dst}")
    return "\n".join(lines) + "\n"


def from_text(text):
    """Parse the ``fsa 1`` format; returns a Dfa when the automaton is deterministic."""
    alphabet = None
    n_states = start = None
    finals = set()
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        key, args = parts[0], parts[1:]
        try:
            if lineno == 1 or (key == "fsa" and alphabet is None):
                if key != "fsa" or args != ["1"]:
                    raise ValueError("missing 'fsa 1' header")
            elif key == "alphabet":
                alphabet = args
            elif key == "states":
                (n_states,) = map(int, args)
            elif key == "start":
                (start,) = map(int, args)
            elif key == "final":
                finals = set(map(int, args))
            elif key == "trans":
                src, label, dst = args
                transitions.append((int(src), EPS if label == EPS_TEXT else label, int(dst)))
            else:
                raise ValueError(f"unknown directive {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if alphabet is None or n_states is None or start is None:
        raise ValueError("incomplete fsa text: need alphabet, states and start")
    keys = [(s, x) for s, x, _ in transitions]
    if all(x is not EPS for _, x in keys) and len(set(keys)) == len(keys):
        return Dfa(alphabet, n_states, start, finals, {(s, x): t for s, x, t in transitions})
    return Nfa(alphabet, n_states, start, finals, transitions)


def to_dot(a, name="fsa"):
    """Graphviz rendering; parallel edges are merged into one comma-separated label."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in range(a.n_states):
        shape = "doublecircle" if s in a.finals else "circle"
        lines.append(f'  {s} [shape={shape}, label="{s}"];')
    lines.append(f"  __start -> {a.start};")
    grouped = {}
    for src, label, dst in a.sorted_transitions():
        text = "ε" if label is EPS else str(label)
        grouped.setdefault((src, dst), []).append(text.replace("\\", "\\\\").replace('"', '\\"'))
    for (src, dst), labels in sorted(grouped.items()):
        lines.append(f'  {src} -> {dst} [label="{", ".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
