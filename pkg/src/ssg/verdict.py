"""Simplicity verdict for the algebras attached to a contracting nucleus.

For each maximal cycle subgroup ``H = H_w`` and each minimal vertex ``Y`` of
Delta, an element ``a`` of ``K H`` must have zero coset sums over the left
cosets of ``H & Y``.  Stacking those equations gives an integer matrix; the
algebra is simple over ``K`` exactly when every such matrix has trivial
kernel over ``K``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from sympy import factorint

from . import linalg
from .errors import InternalInconsistency
from .groups import GroupTable, group_table
from .presentation import NucleusAutomaton
from .structure import (
    DEFAULT_CAPACITY,
    DeltaGraph,
    build_delta,
    build_strongfix,
    hausdorff_witness,
    maximal_cyclic_subgroups,
)

ALL = "all"

__all__ = [
    "ALL", "GroupTable", "group_table", "IntMatrixAnalysis", "WitnessElement",
    "SimplicityVerdict", "coset_matrix", "analyze_matrix", "decide_simplicity",
    "verify_witness", "verdict_to_json",
]


@dataclass(frozen=True)
class IntMatrixAnalysis:
    matrix: tuple
    rank: int
    kernel: tuple  # rational kernel basis, integer vectors
    snf: linalg.SnfResult
    bad_primes: Optional[tuple]  # None when rank-deficient over Q (every characteristic)
    mod_p_kernels: dict  # prime -> kernel basis mod p

    @property
    def full_column_rank(self) -> bool:
        return self.rank == len(self.matrix[0])


@dataclass(frozen=True)
class WitnessElement:
    """``sum coefficients[i] * u_{elements[i]}`` in the group algebra of one cycle subgroup."""

    subgroup_index: int
    characteristic: int
    elements: tuple
    coefficients: tuple

    @property
    def support(self) -> tuple:
        return tuple(g for g, c in zip(self.elements, self.coefficients) if c)


@dataclass
class SimplicityVerdict:
    hausdorff: bool
    complex_simple: bool
    bad_characteristics: object  # ALL or a tuple of primes
    subgroups: list = field(default_factory=list)  # CyclicSubgroupWitness
    witnesses: list = field(default_factory=list)  # WitnessElement
    analyses: list = field(default_factory=list)  # IntMatrixAnalysis per subgroup
    delta: Optional[DeltaGraph] = None
    hausdorff_path: Optional[tuple] = None

    @property
    def cstar_simple(self) -> bool:
        # the C*-algebra and the complex algebra are simple together
        return self.complex_simple

    def simple_over(self, characteristic: int) -> bool:
        if characteristic == 0:
            return self.complex_simple
        if self.bad_characteristics == ALL:
            return False
        return characteristic not in self.bad_characteristics


def coset_matrix(g: GroupTable, minimal: Sequence) -> list[list[int]]:
    """One row per left coset of ``H & Y``, for each minimal ``Y`` in the given order."""
    rows = []
    for y in minimal:
        members = [h for h in g.elements if h in y]
        if not g.is_subgroup(members):
            raise InternalInconsistency(f"intersection with {tuple(y.members)} is not a subgroup")
        for coset in g.left_cosets(members):
            rows.append([1 if h in coset else 0 for h in g.elements])
    return rows


def analyze_matrix(m) -> IntMatrixAnalysis:
    m = linalg.as_matrix(m)
    rank = linalg.rational_rank(m)
    kernel = tuple(linalg.rational_kernel(m))
    snf = linalg.smith_normal_form(m)
    if rank < len(m[0]):
        bad = None
        primes = ()
    else:
        primes = tuple(sorted(factorint(snf.largest)))
        bad = primes
    mod_p = {p: tuple(linalg.kernel_mod_p(m, p)) for p in primes}
    return IntMatrixAnalysis(tuple(tuple(r) for r in m), rank, kernel, snf, bad, mod_p)


def verify_witness(a: NucleusAutomaton, w: WitnessElement, delta: DeltaGraph, h: GroupTable, char: int) -> bool:
    """Nonzero over the field and every coset sum over every minimal vertex vanishes."""
    coeff = dict(zip(w.elements, w.coefficients))

    def zero(v):
        return v == 0 if char == 0 else v % char == 0

    if all(zero(coeff.get(g, 0)) for g in h.elements):
        return False
    for y in delta.minimal:
        members = [g for g in h.elements if g in y]
        for coset in h.left_cosets(members):
            if not zero(sum(coeff.get(g, 0) for g in coset)):
                return False
    return True


def decide_simplicity(a: NucleusAutomaton, capacity: int = DEFAULT_CAPACITY) -> SimplicityVerdict:
    fix = build_strongfix(a)
    path = hausdorff_witness(fix)
    if path is None:
        return SimplicityVerdict(True, True, ())
    delta = build_delta(a)
    subgroups = maximal_cyclic_subgroups(fix, capacity)
    complex_simple = True
    bad: set = set()
    witnesses = []
    analyses = []
    for i, sub in enumerate(subgroups):
        table = sub.group
        info = analyze_matrix(coset_matrix(table, delta.minimal))
        analyses.append(info)
        if not info.full_column_rank:
            complex_simple = False
            for vec in info.kernel:
                witnesses.append(WitnessElement(i, 0, table.elements, vec))
        else:
            bad.update(info.bad_primes)
            for p, basis in sorted(info.mod_p_kernels.items()):
                for vec in basis:
                    witnesses.append(WitnessElement(i, p, table.elements, vec))
    for w in witnesses:
        if not verify_witness(a, w, delta, subgroups[w.subgroup_index].group, w.characteristic):
            raise InternalInconsistency("emitted witness fails its own check")
    bad_chars = ALL if not complex_simple else tuple(sorted(bad))
    return SimplicityVerdict(False, complex_simple, bad_chars, subgroups, witnesses, analyses, delta, path)


def verdict_to_dict(a: NucleusAutomaton, v: SimplicityVerdict) -> dict:
    subgroups = [
        {"elements": v_sub.elements.names(a), "witness_word": a.format_word(v_sub.word)}
        for v_sub in v.subgroups
    ]
    witnesses = sorted(v.witnesses, key=lambda w: (w.subgroup_index, w.characteristic, w.coefficients))
    return {
        "hausdorff": v.hausdorff,
        "complex_simple": v.complex_simple,
        "cstar_simple": v.cstar_simple,
        "nonsimple_characteristics": ALL if v.bad_characteristics == ALL else list(v.bad_characteristics),
        "maximal_subgroups": subgroups,
        "witnesses": [
            {
                "subgroup_index": w.subgroup_index,
                "characteristic": w.characteristic,
                "coefficients": {a.names[g]: c for g, c in zip(w.elements, w.coefficients) if c},
            }
            for w in witnesses
        ],
    }


def verdict_to_json(a: NucleusAutomaton, v: SimplicityVerdict) -> str:
    return json.dumps(verdict_to_dict(a, v), indent=2) + "\n"
