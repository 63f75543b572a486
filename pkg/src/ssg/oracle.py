"""Cross-check: simplicity via the action of words on equivalence relations.

Vertices are partitions of the nucleus reachable from equality under
``a (x.R) b  iff  a(x) = b(x) and a|_x R b|_x``.  An element of the group
algebra of the whole nucleus lies in the essential ideal iff its class sums
vanish for every minimal vertex, and is nonzero in the algebra iff some
essential vertex sees a nonzero class sum.  Simplicity therefore compares the
ranks of the two stacked class-indicator matrices.

This works over the whole nucleus and never looks at cycle subgroups, so it
is independent of :mod:`ssg.verdict`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import graphs, linalg
from .errors import InternalInconsistency, MorphismViolation
from .presentation import NucleusAutomaton
from .structure import DeltaGraph, SubsetVertex, build_delta

SMOKE_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class NucleusPartition:
    """Block label per state; labels numbered by first occurrence, so blocks sort by least member."""

    labels: tuple

    @classmethod
    def from_labels(cls, raw) -> "NucleusPartition":
        seen = {}
        return cls(tuple(seen.setdefault(v, len(seen)) for v in raw))

    @classmethod
    def equality(cls, n: int) -> "NucleusPartition":
        return cls(tuple(range(n)))

    def blocks(self) -> list[tuple]:
        out = {}
        for g, b in enumerate(self.labels):
            out.setdefault(b, []).append(g)
        return [tuple(out[b]) for b in sorted(out)]

    def class_of(self, g: int) -> tuple:
        return tuple(h for h, b in enumerate(self.labels) if b == self.labels[g])


@dataclass(frozen=True)
class GammaGraph:
    automaton: NucleusAutomaton
    vertices: tuple  # NucleusPartition, breadth-first from equality
    edges: tuple  # (source, letter, target)
    essential: tuple  # vertex indices
    minimal: tuple  # vertex indices
    minimal_components: int


def gamma_step(a: NucleusAutomaton, part: NucleusPartition, x: int) -> NucleusPartition:
    return NucleusPartition.from_labels(
        (a.outputs[g][x], part.labels[a.restrictions[g][x]]) for g in range(a.size)
    )


def build_gamma(a: NucleusAutomaton) -> GammaGraph:
    start = NucleusPartition.equality(a.size)
    order = [start]
    index = {start: 0}
    edges = []
    i = 0
    while i < len(order):
        for x in range(a.alphabet_size):
            t = gamma_step(a, order[i], x)
            if t not in index:
                index[t] = len(order)
                order.append(t)
            edges.append((i, x, index[t]))
        i += 1
    n = len(order)
    succ = [[] for _ in range(n)]
    for s, _, t in edges:
        succ[s].append(t)
    on_cycle = graphs.cyclic_vertices(n, succ)
    reach = graphs.reachable_from(n, succ, [v for v in range(n) if on_cycle[v]])
    essential = tuple(v for v in range(n) if reach[v])
    comp, _ = graphs.strongly_connected_components(n, succ)
    sink = graphs.sink_components(n, succ)
    minimal = tuple(v for v in range(n) if sink[v])
    return GammaGraph(a, tuple(order), tuple(edges), essential, minimal, len({comp[v] for v in minimal}))


def _equations(g: GammaGraph, vertices: Iterable[int]) -> list[list[int]]:
    n = g.automaton.size
    rows = []
    for v in vertices:
        for block in g.vertices[v].blocks():
            rows.append([1 if h in block else 0 for h in range(n)])
    return rows


@dataclass(frozen=True)
class GammaVerdict:
    complex_simple: bool
    ranks: dict  # characteristic -> (minimal rank, essential rank)

    def simple_over(self, characteristic: int) -> bool:
        lo, hi = self.ranks[characteristic]
        return lo == hi


def gamma_verdict(a: NucleusAutomaton, primes: Iterable[int] = SMOKE_PRIMES) -> GammaVerdict:
    g = build_gamma(a)
    if g.minimal_components != 1:
        raise InternalInconsistency(f"Gamma has {g.minimal_components} minimal components, expected one")
    if not set(g.minimal) <= set(g.essential):
        raise InternalInconsistency("a minimal vertex is not essential")
    m_min = _equations(g, g.minimal)
    m_ess = _equations(g, g.essential)
    ranks = {0: (linalg.rational_rank(m_min), linalg.rational_rank(m_ess))}
    for p in sorted(set(primes)):
        ranks[p] = (linalg.rank_mod_p(m_min, p), linalg.rank_mod_p(m_ess, p))
    return GammaVerdict(ranks[0][0] == ranks[0][1], ranks)


def phi_morphism(gamma: GammaGraph, delta: DeltaGraph | None = None) -> dict:
    """Map each partition to the class of the identity, checking it is a label-preserving surjection onto Delta."""
    a = gamma.automaton
    if delta is None:
        delta = build_delta(a)
    image = {}
    for v, part in enumerate(gamma.vertices):
        y = SubsetVertex(part.class_of(a.identity))
        if y not in delta.vertices:
            raise MorphismViolation(f"class of the identity {y.names(a)} is not a Delta vertex")
        image[v] = delta.vertex_index(y)
    delta_edges = {(s, x): t for s, x, t in delta.edges}
    for s, x, t in gamma.edges:
        if delta_edges.get((image[s], x)) != image[t]:
            raise MorphismViolation("Phi does not preserve an edge")
    if set(image.values()) != set(range(len(delta.vertices))):
        raise MorphismViolation("Phi is not surjective")
    return image


def minimal_images(gamma: GammaGraph, phi: dict) -> list[SubsetVertex]:
    a = gamma.automaton
    return sorted({SubsetVertex(gamma.vertices[v].class_of(a.identity)) for v in gamma.minimal})


def cross_check(a: NucleusAutomaton, verdict, primes: Iterable[int] = SMOKE_PRIMES) -> list[str]:
    """Disagreements between a Delta-engine verdict and the Gamma oracle (empty when they agree)."""
    primes = set(primes) | set(SMOKE_PRIMES)
    if verdict.bad_characteristics != "all":
        primes |= set(verdict.bad_characteristics)
    for info in verdict.analyses:
        primes |= set(info.bad_primes or ())
    oracle = gamma_verdict(a, primes)
    problems = []
    for c in [0] + sorted(primes):
        if oracle.simple_over(c) != verdict.simple_over(c):
            problems.append(
                f"characteristic {c}: engine says {'simple' if verdict.simple_over(c) else 'not simple'}, "
                f"oracle ranks {oracle.ranks[c]}")
    gamma = build_gamma(a)
    delta = verdict.delta or build_delta(a)
    phi = phi_morphism(gamma, delta)
    if minimal_images(gamma, phi) != list(delta.minimal):
        problems.append("minimal vertices of Delta are not the images of minimal vertices of Gamma")
    return problems
