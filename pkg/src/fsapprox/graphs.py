"""Graph utilities shared by decomposition and automaton condensation."""


def strongly_connected_components(graph):
    """SCCs of ``graph`` (node -> list of successors, every node a key).

    Iterative Tarjan; components come out callee-first, i.e. every
    component precedes the components that reach it.
    """
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            succ = graph[node]
            if i > 0:
                low[node] = min(low[node], low[succ[i - 1]])
            while i < len(succ):
                nxt = succ[i]
                if nxt not in index:
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
                i += 1
            if i < len(succ):
                work.append((node, i + 1))
                work.append((succ[i], 0))
                continue
            if low[node] == index[node]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == node:
                        break
                out.append(scc)
    return out
