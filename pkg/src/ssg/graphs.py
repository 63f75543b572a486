"""Small digraph helpers: iterative Tarjan SCC and cycle / sink detection.

Vertices are the integers ``0..n-1`` and ``succ[v]`` lists the successors of
``v``.  Recursion is avoided so that graphs with millions of vertices work.
"""

from __future__ import annotations

from typing import Sequence


def strongly_connected_components(n: int, succ: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Return ``(comp, count)`` where ``comp[v]`` is the SCC id of ``v``.

    Component ids come out in reverse topological order (Tarjan's order):
    every edge ``u -> v`` satisfies ``comp[u] >= comp[v]``.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    count = 0

    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            edges = succ[v]
            if i < len(edges):
                work[-1] = (v, i + 1)
                w = edges[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = count
                    if w == v:
                        break
                count += 1
    return comp, count


def cyclic_vertices(n: int, succ: Sequence[Sequence[int]]) -> list[bool]:
    """Flag the vertices lying on a nonempty directed cycle (self-loops count)."""
    comp, count = strongly_connected_components(n, succ)
    sizes = [0] * count
    for c in comp:
        sizes[c] += 1
    flags = [sizes[comp[v]] > 1 for v in range(n)]
    for v in range(n):
        if not flags[v] and v in succ[v]:
            flags[v] = True
    return flags


def sink_components(n: int, succ: Sequence[Sequence[int]]) -> list[bool]:
    """Flag the vertices whose SCC has no edge leaving it."""
    comp, count = strongly_connected_components(n, succ)
    has_exit = [False] * count
    for v in range(n):
        for w in succ[v]:
            if comp[w] != comp[v]:
                has_exit[comp[v]] = True
    return [not has_exit[comp[v]] for v in range(n)]


def reachable_from(n: int, succ: Sequence[Sequence[int]], sources) -> list[bool]:
    seen = [False] * n
    todo = list(sources)
    for v in todo:
        seen[v] = True
    while todo:
        v = todo.pop()
        for w in succ[v]:
            if not seen[w]:
                seen[w] = True
                todo.append(w)
    return seen
