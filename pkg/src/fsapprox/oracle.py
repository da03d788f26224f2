"""Reference CFG membership and bounded enumeration, independent of the LR(0) path.

Membership uses an Earley recognizer with the nullable-completion fix, so
epsilon rules and left or right recursion need no grammar rewriting.
Enumeration builds per-nonterminal string sets bottom-up up to a length
bound instead of filtering all of Sigma*.
"""

from .grammar import T


def nullable_symbols(g):
    nullable = set()
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.lhs not in nullable and all(s in nullable for s in rule.rhs):
                nullable.add(rule.lhs)
                changed = True
    return nullable


def _as_symbols(g, w):
    if isinstance(w, str):
        w = w.split()
    syms = [T(tok) if isinstance(tok, str) else tok for tok in w]
    if any(s not in g.terminals for s in syms):
        return None
    return syms


def member(g, w):
    """True iff the token sequence ``w`` is derivable from ``g.start``."""
    tokens = _as_symbols(g, w)
    if tokens is None:
        return False
    rules = g.rules
    by_lhs = {}
    for i, rule in enumerate(rules):
        by_lhs.setdefault(rule.lhs, []).append(i)
    nullable = nullable_symbols(g)
    n = len(tokens)
    charts = [set() for _ in range(n + 1)]
    # waiting[i][A]: items in chart i with A after the dot
    waiting = [dict() for _ in range(n + 1)]

    def add(i, item, agenda):
        if item not in charts[i]:
            charts[i].add(item)
            agenda.append(item)

    agenda0 = []
    for r in by_lhs.get(g.start, ()):
        add(0, (r, 0, 0), agenda0)
    agenda = agenda0
    for i in range(n + 1):
        if i > 0:
            agenda = list(charts[i])
        while agenda:
            r, dot, origin = agenda.pop()
            rhs = rules[r].rhs
            if dot < len(rhs):
                sym = rhs[dot]
                if sym in g.nonterminals:
                    waiting[i].setdefault(sym, []).append((r, dot, origin))
                    for r2 in by_lhs.get(sym, ()):
                        add(i, (r2, 0, i), agenda)
                    if sym in nullable:
                        add(i, (r, dot + 1, origin), agenda)
                elif i < n and tokens[i] == sym:
                    charts[i + 1].add((r, dot + 1, origin))
            else:
                lhs = rules[r].lhs
                if origin == i:
                    continue  # covered by the nullable advance at prediction time
                for r2, d2, o2 in waiting[origin].get(lhs, ()):
                    add(i, (r2, d2 + 1, o2), agenda)
        if i < n and not charts[i + 1]:
            return False
    return any(
        origin == 0 and rules[r].lhs == g.start and dot == len(rules[r].rhs)
        for r, dot, origin in charts[n]
    ) or (n == 0 and g.start in nullable)


def min_lengths(g):
    inf = float("inf")
    best = {a: inf for a in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            total = sum(1 if s in g.terminals else best[s] for s in rule.rhs)
            if total < best[rule.lhs]:
                best[rule.lhs] = total
                changed = True
    return best


def enumerate_language(g, maxlen):
    """All strings of ``L(g)`` with at most ``maxlen`` tokens, shortest first, then lexicographic.

    Strings are tuples of terminal names.  ``layer[A][n]`` holds the strings
    of length ``n`` derived from ``A``; layer ``n`` only needs earlier layers
    plus a local fixpoint for splits that give one symbol the whole length
    (the others being nullable).
    """
    shortest = min_lengths(g)
    layer = {a: [set() for _ in range(maxlen + 1)] for a in g.nonterminals}
    def width(rhs):
        return sum(1 if s in g.terminals else shortest[s] for s in rhs)

    # rules mentioning an unproductive symbol have infinite width and drop out
    rules = [r for r in g.rules if width(r.rhs) <= maxlen]

    def strings(rhs, n):
        """Strings of length exactly ``n`` derived from the symbol sequence ``rhs``."""
        if not rhs:
            return {()} if n == 0 else set()
        head, rest = rhs[0], rhs[1:]
        rest_min = width(rest)
        out = set()
        if head in g.terminals:
            if n >= 1:
                out = {(head.name,) + tail for tail in strings(rest, n - 1)}
            return out
        for k in range(shortest[head], n - rest_min + 1):
            heads = layer[head][k]
            if not heads:
                continue
            tails = strings(rest, n - k)
            out.update(h + t for h in heads for t in tails)
        return out

    for n in range(maxlen + 1):
        changed = True
        while changed:
            changed = False
            for rule in rules:
                new = strings(rule.rhs, n) - layer[rule.lhs][n]
                if new:
                    layer[rule.lhs][n] |= new
                    changed = True
    result = []
    if g.start in layer:
        for n in range(maxlen + 1):
            result.extend(sorted(layer[g.start][n]))
    return result
