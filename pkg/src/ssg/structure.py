"""Combinatorial structure of a nucleus: the fixing subgraph, cycle subgroups, Delta.

Subsets of the nucleus are bitmasks over state ids (bit ``g`` set when ``g``
is a member); :class:`SubsetVertex` wraps the sorted tuple form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Optional

from . import graphs
from .errors import CapacityExceeded, InternalInconsistency
from .presentation import NucleusAutomaton, Word, act_word

DEFAULT_CAPACITY = 1 << 24


def mask_of(members) -> int:
    m = 0
    for g in members:
        m |= 1 << g
    return m


def members_of(mask: int) -> tuple:
    out = []
    g = 0
    while mask:
        if mask & 1:
            out.append(g)
        mask >>= 1
        g += 1
    return tuple(out)


@dataclass(frozen=True, order=True)
class SubsetVertex:
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @property
    def mask(self) -> int:
        return mask_of(self.members)

    def __contains__(self, g) -> bool:
        return g in self.members

    def __len__(self) -> int:
        return len(self.members)

    def names(self, a: NucleusAutomaton) -> list[str]:
        return [a.names[g] for g in self.members]


@dataclass(frozen=True)
class StrongFixGraph:
    automaton: NucleusAutomaton
    edges: tuple  # (g, x, g|_x) with g(x) = x
    cyclic: frozenset

    @property
    def core_edges(self) -> tuple:
        """Edges ending in a cyclic state; the rest lead to dead ends and never matter."""
        return tuple(edge for edge in self.edges if edge[2] in self.cyclic)

    def successors(self, g) -> list[tuple[int, int]]:
        return [(x, h) for (s, x, h) in self.edges if s == g]


@dataclass
class CyclicSubgroupWitness:
    elements: SubsetVertex
    word: Word
    group: Optional[object] = field(default=None)


@dataclass(frozen=True)
class DeltaGraph:
    automaton: NucleusAutomaton
    vertices: tuple  # SubsetVertex, breadth-first order from {e}
    edges: tuple  # (source index, letter, target index)
    minimal: tuple  # SubsetVertex, sorted

    def vertex_index(self, v: SubsetVertex) -> int:
        return self.vertices.index(v)


def build_strongfix(a: NucleusAutomaton) -> StrongFixGraph:
    edges = []
    succ = [[] for _ in range(a.size)]
    for g in range(a.size):
        for x in range(a.alphabet_size):
            if a.outputs[g][x] == x:
                h = a.restrictions[g][x]
                edges.append((g, x, h))
                succ[g].append(h)
    flags = graphs.cyclic_vertices(a.size, succ)
    cyclic = frozenset(g for g in range(a.size) if flags[g])
    return StrongFixGraph(a, tuple(edges), cyclic)


def hausdorff_witness(h: StrongFixGraph) -> Optional[tuple[int, Word]]:
    """A nontrivial cyclic state and a word it strongly fixes, or ``None``.

    The word is a shortest fixing path from the state to the identity.
    """
    a = h.automaton
    e = a.identity
    for g in sorted(h.cyclic - {e}):
        parent = {g: None}
        queue = deque([g])
        while queue:
            v = queue.popleft()
            if v == e:
                word = []
                while parent[v] is not None:
                    v, x = parent[v]
                    word.append(x)
                return g, tuple(reversed(word))
            for x, w in h.successors(v):
                if w not in parent:
                    parent[w] = (v, x)
                    queue.append(w)
    return None


def is_hausdorff(h: StrongFixGraph) -> bool:
    return hausdorff_witness(h) is None


class _SubsetDigraph:
    """Digraph on subsets of the cyclic set that contain the identity.

    Vertex ``i`` encodes the subset ``{e} U {others[b] : bit b of i}``.
    """

    def __init__(self, h: StrongFixGraph, capacity: int):
        a = h.automaton
        e = a.identity
        self.automaton = a
        self.others = sorted(h.cyclic - {e})
        size = 1 << len(self.others)
        if size > capacity:
            raise CapacityExceeded(size, capacity)
        bit = {g: b for b, g in enumerate(self.others)}
        k = a.alphabet_size
        n = size
        # per letter: image bit of each member (None when undefined), then subset images by DP
        succ = [[] for _ in range(n)]
        self.by_letter = []
        for x in range(k):
            image = []
            for g in self.others:
                target = a.restrictions[g][x]
                if a.outputs[g][x] != x or (target != e and target not in bit):
                    image.append(None)
                elif target == e:
                    image.append(-1)
                else:
                    image.append(bit[target])
            img = [0] * n
            ok = bytearray(n)
            ok[0] = 1
            for v in range(1, n):
                low = v & -v
                b = low.bit_length() - 1
                rest = v ^ low
                t = image[b]
                if not ok[rest] or t is None or t == -1:
                    continue
                tb = 1 << t
                if img[rest] & tb:
                    continue
                img[v] = img[rest] | tb
                ok[v] = 1
            targets = [img[v] if ok[v] else -1 for v in range(n)]
            self.by_letter.append(targets)
            for v in range(n):
                if ok[v]:
                    succ[v].append(img[v])
        self.n = n
        self.succ = succ

    def subset(self, v: int) -> SubsetVertex:
        e = self.automaton.identity
        return SubsetVertex((e,) + tuple(self.others[b] for b in range(len(self.others)) if v >> b & 1))

    def step(self, v: int, x: int) -> int:
        return self.by_letter[x][v]


def _digraph(h: StrongFixGraph, capacity: int) -> tuple[_SubsetDigraph, list[bool]]:
    d = _SubsetDigraph(h, capacity)
    return d, graphs.cyclic_vertices(d.n, d.succ)


def cyclic_subsets(h: StrongFixGraph, capacity: int = DEFAULT_CAPACITY) -> list[SubsetVertex]:
    """Subsets containing the identity that lie on a cycle of the subset digraph.

    A subset ``Y`` qualifies exactly when ``Y`` is contained in some ``H_w``.
    Subsets without the identity are covered by adjoining it.
    """
    d, flags = _digraph(h, capacity)
    return [d.subset(v) for v in range(d.n) if flags[v]]


def _closed_word(d: _SubsetDigraph, start: int, k: int) -> Word:
    """Shortest nonempty word labelling a closed walk at ``start``."""
    parent = {}
    queue = deque()
    for x in range(k):
        t = d.step(start, x)
        if t == -1:
            continue
        if t == start:
            return (x,)
        if t not in parent:
            parent[t] = (None, x)
            queue.append(t)
    while queue:
        v = queue.popleft()
        for x in range(k):
            t = d.step(v, x)
            if t == -1:
                continue
            if t == start:
                word = [x]
                while v is not None:
                    prev, y = parent[v]
                    word.append(y)
                    v = prev
                return tuple(reversed(word))
            if t not in parent:
                parent[t] = (v, x)
                queue.append(t)
    raise InternalInconsistency("subset on a cycle has no closed walk")


def _permutation_order(a: NucleusAutomaton, members, word: Word) -> int:
    perm = {g: act_word(a, g, word)[1] for g in members}
    order = 1
    seen = set()
    for g in members:
        if g in seen:
            continue
        length = 0
        h = g
        while h not in seen:
            seen.add(h)
            h = perm[h]
            length += 1
        order = lcm(order, length)
    return order


def maximal_cyclic_subgroups(h: StrongFixGraph, capacity: int = DEFAULT_CAPACITY) -> list[CyclicSubgroupWitness]:
    """Maximal subgroups ``H_w``, each with a word ``w`` and its verified group table."""
    from .groups import group_table

    a = h.automaton
    d, flags = _digraph(h, capacity)
    on_cycle = [v for v in range(d.n) if flags[v]]
    on_cycle.sort(key=lambda v: (-bin(v).count("1"), v))
    maximal = []
    for v in on_cycle:
        if not any(v & m == v for m in maximal):
            maximal.append(v)
    maximal.sort()
    out = []
    for v in maximal:
        elems = d.subset(v)
        loop = _closed_word(d, v, a.alphabet_size)
        word = loop * _permutation_order(a, elems.members, loop)
        for g in elems.members:
            if act_word(a, g, word) != (word, g):
                raise InternalInconsistency(f"{a.names[g]} is not fixed with restriction itself by the witness word")
        out.append(CyclicSubgroupWitness(elems, word, group_table(a, elems)))
    return out


def delta_step(a: NucleusAutomaton, mask: int, x: int) -> int:
    """``x . Y``: states fixing ``x`` whose restriction at ``x`` lies in ``Y``."""
    out = 0
    for g in range(a.size):
        if a.outputs[g][x] == x and mask >> a.restrictions[g][x] & 1:
            out |= 1 << g
    return out


def build_delta(a: NucleusAutomaton) -> DeltaGraph:
    start = 1 << a.identity
    order = [start]
    index = {start: 0}
    edges = []
    i = 0
    while i < len(order):
        y = order[i]
        for x in range(a.alphabet_size):
            z = delta_step(a, y, x)
            if z not in index:
                index[z] = len(order)
                order.append(z)
            edges.append((i, x, index[z]))
        i += 1
    succ = [[] for _ in order]
    for s, _, t in edges:
        succ[s].append(t)
    sink = graphs.sink_components(len(order), succ)
    vertices = tuple(SubsetVertex(members_of(m)) for m in order)
    minimal = tuple(sorted(vertices[v] for v in range(len(order)) if sink[v]))
    return DeltaGraph(a, vertices, tuple(edges), minimal)


def strong_fix_set(a: NucleusAutomaton, w: Word) -> SubsetVertex:
    """Nucleus elements strongly fixing ``w``, computed as ``w . {e}``."""
    y = 1 << a.identity
    for x in reversed(tuple(w)):
        y = delta_step(a, y, x)
    return SubsetVertex(members_of(y))
