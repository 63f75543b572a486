"""Exact integer linear algebra on small dense matrices.

Matrices are lists of rows of Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from sympy import isprime

from .errors import NotPrime

IntMatrix = list  # list[list[int]], row-major


@dataclass(frozen=True)
class SnfResult:
    diagonal: tuple  # d_1 | d_2 | ... over min(rows, cols) entries, zeros last

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def largest(self) -> int:
        """The last nonzero invariant factor (1 for the zero matrix)."""
        nonzero = [d for d in self.diagonal if d]
        return nonzero[-1] if nonzero else 1


def as_matrix(m: Sequence[Sequence[int]]) -> IntMatrix:
    rows = [[int(v) for v in row] for row in m]
    if not rows or not rows[0]:
        raise ValueError("matrix must be nonempty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    return rows


def format_matrix(m) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in m)


def parse_matrix(text: str) -> IntMatrix:
    return as_matrix([[int(t) for t in line.split()] for line in text.strip().splitlines() if line.strip()])


def rational_rank(m) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    a = as_matrix(m)
    rows, cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            arc = a[r][c]
            for j in range(c + 1, cols):
                # exact: Bareiss guarantees divisibility by the previous pivot
                a[r][j] = (p * a[r][j] - arc * a[rank][j]) // prev
            a[r][c] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def _rref_fraction(a):
    rows, cols = len(a), len(a[0])
    m = [[Fraction(v) for v in row] for row in a]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def _normalize_int(vec):
    g = 0
    for v in vec:
        g = gcd(g, v)
    vec = [v // g for v in vec]
    lead = next(v for v in vec if v)
    return tuple(-v for v in vec) if lead < 0 else tuple(vec)


def rational_kernel(m) -> list[tuple]:
    """Integer basis of the right kernel, one vector per free column.

    Each vector has content 1 and a positive first nonzero entry.
    """
    a = as_matrix(m)
    cols = len(a[0])
    rref, pivots = _rref_fraction(a)
    basis = []
    for f in (c for c in range(cols) if c not in pivots):
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rref[i][f]
        scale = 1
        for v in vec:
            scale = lcm(scale, v.denominator)
        basis.append(_normalize_int([int(v * scale) for v in vec]))
    return basis


def smith_normal_form(m) -> SnfResult:
    """Invariant factors by unimodular row and column operations.

    The pivot is the entry of least nonzero absolute value in the remaining
    block, ties broken by row-major position.
    """
    a = as_matrix(m)
    rows, cols = len(a), len(a[0])
    diag = []
    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    v = a[i][j]
                    if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [vi - q * vt for vi, vt in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                continue
            bad = next((i for i in range(t + 1, rows)
                        if any(a[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            a[t] = [vt + vb for vt, vb in zip(a[t], a[bad])]
        if best is None:
            diag.extend([0] * (min(rows, cols) - t))
            break
        diag.append(abs(a[t][t]))
    return SnfResult(tuple(diag))


def _check_prime(p):
    if not (isinstance(p, int) and isprime(p)):
        raise NotPrime(f"{p!r} is not a prime")


def _rref_mod_p(a, p):
    rows, cols = len(a), len(a[0])
    m = [[v % p for v in row] for row in a]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(vi - f * vr) % p for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank_mod_p(m, p: int) -> int:
    _check_prime(p)
    return len(_rref_mod_p(as_matrix(m), p)[1])


def kernel_mod_p(m, p: int) -> list[tuple]:
    """Kernel basis over the p-element field, entries in ``[0, p)``, leading entry 1."""
    _check_prime(p)
    a = as_matrix(m)
    cols = len(a[0])
    rref, pivots = _rref_mod_p(a, p)
    basis = []
    for f in (c for c in range(cols) if c not in pivots):
        vec = [0] * cols
        vec[f] = 1
        for i, c in enumerate(pivots):
            vec[c] = -rref[i][f] % p
        lead = next(v for v in vec if v)
        inv = pow(lead, -1, p)
        basis.append(tuple(v * inv % p for v in vec))
    return basis


def mat_vec(m, v) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in m]
