"""Matrices induced on ell-subsets, inclusion operators, and descent of vectors.

Rows and columns are indexed by ell-subsets in dictionary order.  The
augmented matrices carry one extra index, the collapsed state, placed last
and labelled ``COLLAPSED``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from . import linalg
from .core import Subset, Transformation, compose, subset_lookup, subsets
from .errors import DimensionMismatch, LevelOutOfRange, NotCompatible

log = logging.getLogger(__name__)

COLLAPSED = "X"


@dataclass(frozen=True)
class LevelMatrix:
    n: int
    level: int
    entries: list
    augmented: bool = False

    @property
    def labels(self) -> list:
        labs = list(subsets(self.n, self.level))
        if self.augmented:
            labs.append(COLLAPSED)
        return labs

    def row_sums(self):
        return [sum(row) for row in self.entries]


@dataclass(frozen=True)
class InclusionOperator:
    n: int
    source: int
    target: int
    entries: list
    kind: str = "inclusion"

    @property
    def row_labels(self):
        return list(subsets(self.n, self.source))

    @property
    def col_labels(self):
        return list(subsets(self.n, self.target))

    @property
    def T(self) -> "InclusionOperator":
        return InclusionOperator(self.n, self.target, self.source, linalg.transpose(self.entries), self.kind)


def _check_level(level, n, low=1):
    if not low <= level <= n:
        raise LevelOutOfRange(f"level {level} outside {low}..{n}")


def level_map(f: Transformation, level: int) -> list:
    """Index of ``f(I)`` for each ell-subset ``I``, or None where f collapses I."""
    _check_level(level, f.n)
    lookup = subset_lookup(f.n, level)
    out = []
    for s in subsets(f.n, level):
        img = f.apply(s)
        out.append(lookup[tuple(sorted(img))] if len(img) == level else None)
    return out


def is_preserved(f: Transformation, members) -> bool:
    members = tuple(members)
    return len(f.apply(members)) == len(members)


def level_matrix(f: Transformation, level: int) -> LevelMatrix:
    size = comb(f.n, level) if 0 <= level <= f.n else 0
    entries = linalg.zeros(size, size)
    for i, j in enumerate(level_map(f, level)):
        if j is not None:
            entries[i][j] = 1
    return LevelMatrix(f.n, level, entries)


def permanent(m) -> int:
    """Permanent via Ryser's inclusion-exclusion formula."""
    k = len(m)
    if k == 0:
        return 1
    total = 0
    for size in range(1, k + 1):
        sign = (-1) ** (k - size)
        for cols in combinations(range(k), size):
            prod = 1
            for row in m:
                s = sum(row[c] for c in cols)
                if not s:
                    prod = 0
                    break
                prod *= s
            total += sign * prod
    return total


def level_matrix_via_permanents(f: Transformation, level: int) -> LevelMatrix:
    """Same matrix as :func:`level_matrix`, entry by entry from permanents of ``F``."""
    _check_level(level, f.n)
    F = f.matrix
    labels = subsets(f.n, level)
    entries = [
        [permanent([[F[i - 1][j - 1] for j in J] for i in I]) for J in labels]
        for I in labels
    ]
    return LevelMatrix(f.n, level, entries)


def augmented_level_matrix(f: Transformation, level: int) -> LevelMatrix:
    size = comb(f.n, level)
    entries = linalg.zeros(size + 1, size + 1)
    for i, j in enumerate(level_map(f, level)):
        entries[i][size if j is None else j] = 1
    entries[size][size] = 1
    return LevelMatrix(f.n, level, entries, augmented=True)


def homomorphism_check(f: Transformation, g: Transformation, level: int) -> bool:
    lhs = level_matrix(compose(f, g), level).entries
    rhs = linalg.matmul(level_matrix(f, level).entries, level_matrix(g, level).entries)
    return linalg.equal(lhs, rhs)


def inclusion_operator(source: int, target: int, n: int) -> InclusionOperator:
    """0/1 matrix with entry 1 when the row set contains or is contained in the column set.

    Level 0 is the single empty set; equal levels give the identity.
    """
    _check_level(source, n, 0)
    _check_level(target, n, 0)
    rows, cols = subsets(n, source), subsets(n, target)
    if source <= target:
        entries = [[1 if set(I) <= set(J) else 0 for J in cols] for I in rows]
    else:
        entries = [[1 if set(I) >= set(J) else 0 for J in cols] for I in rows]
    return InclusionOperator(n, source, target, entries)


def exclusion_operator(source: int, target: int, n: int) -> InclusionOperator:
    _check_level(source, n, 0)
    _check_level(target, n, 0)
    rows, cols = subsets(n, source), subsets(n, target)
    entries = [[0 if set(I) & set(J) else 1 for J in cols] for I in rows]
    return InclusionOperator(n, source, target, entries, kind="exclusion")


def local_commuting_check(f: Transformation, level: int) -> set[Subset]:
    """f-preserved rows where E F^(l-1) and F^(l) E disagree; always empty."""
    if level < 2:
        raise LevelOutOfRange("local commuting identity needs level > 1")
    down = inclusion_operator(level, level - 1, f.n).entries
    left = linalg.matmul(down, level_matrix(f, level - 1).entries)
    right = linalg.matmul(level_matrix(f, level).entries, down)
    bad = set()
    for I, lrow, rrow in zip(subsets(f.n, level), left, right):
        if is_preserved(f, I) and lrow != rrow:
            bad.add(I)
    return bad


def factorial_composition_check(a: int, b: int, n: int) -> bool:
    """Check that the chain E^(b,b-1)...E^(a+1,a) equals (b-a)! E^(b,a)."""
    if not 1 <= a < b <= n:
        raise LevelOutOfRange(f"need 1 <= a < b <= n, got a={a}, b={b}, n={n}")
    chain = inclusion_operator(b, b - 1, n).entries
    for k in range(b - 1, a, -1):
        chain = linalg.matmul(chain, inclusion_operator(k, k - 1, n).entries)
    target = linalg.scale(inclusion_operator(b, a, n).entries, factorial(b - a))
    return linalg.equal(chain, target)


def inclusion_inverse_formula(level: int, n: int):
    """Alternating sum of exclusion-inclusion products for the inverse of E^(l,n-l)."""
    total = linalg.zeros(comb(n, n - level), comb(n, level))
    for i in range(level + 1):
        coeff = Fraction((-1) ** i, comb(n - i - level, level - i))
        term = linalg.matmul(exclusion_operator(n - level, i, n).entries,
                             inclusion_operator(i, level, n).entries)
        total = linalg.add(total, linalg.scale(term, coeff))
    return total


def inclusion_inverse(level: int, n: int):
    """Exact inverse of the square inclusion operator E^(l, n-l), for l <= n/2.

    Computed from the alternating-sum formula and verified by multiplication;
    falls back to Gauss-Jordan inversion if the check fails.
    """
    if not 1 <= level <= n // 2:
        raise LevelOutOfRange(f"level {level} outside 1..{n // 2}")
    E = inclusion_operator(level, n - level, n).entries
    M = inclusion_inverse_formula(level, n)
    if linalg.equal(linalg.matmul(E, M), linalg.eye(len(E))):
        return M
    log.warning("alternating-sum inverse failed for n=%d, level=%d; using elimination", n, level)
    return linalg.inverse(E)


def antidiagonal(n):
    m = linalg.zeros(n, n)
    for i in range(n):
        m[i][n - 1 - i] = 1
    return m


def special_inverse_check(n: int) -> bool:
    """E^(1,n-1) = J - I' and its inverse is J/(n-1) - I'."""
    if n < 2:
        raise LevelOutOfRange("need n >= 2")
    J, Ip = linalg.ones(n, n), antidiagonal(n)
    E = inclusion_operator(1, n - 1, n).entries
    ok = linalg.equal(E, linalg.sub(J, Ip))
    inv = linalg.sub(linalg.scale(J, Fraction(1, n - 1)), Ip)
    return (ok and linalg.equal(linalg.matmul(E, inv), linalg.eye(n))
            and linalg.equal(inclusion_inverse(1, n), inv))


def descend_left_eigenvector(v: Sequence, level: int, maps, eigenvalue=None, check: bool = True) -> list:
    """Push a left eigenvector at ``level`` down one level: ``v E^(l,l-1)``.

    ``maps`` is one transformation or a collection of them (a color set).
    With ``check`` the support of ``v`` must lie on sets preserved by every
    map, and if ``eigenvalue`` is given the eigen-equation is verified for a
    single map.  No rescaling is done.
    """
    if isinstance(maps, Transformation):
        maps = [maps]
    maps = list(maps)
    n = maps[0].n
    if len(v) != comb(n, level):
        raise DimensionMismatch(f"vector of length {len(v)} is not at level {level} for n={n}")
    if level < 2:
        raise LevelOutOfRange("cannot descend below level 1")
    if check:
        for I, x in zip(subsets(n, level), v):
            if x and not all(is_preserved(f, I) for f in maps):
                raise NotCompatible(f"support contains the collapsed set {I}")
        if eigenvalue is not None and len(maps) == 1:
            lhs = linalg.vecmat(v, level_matrix(maps[0], level).entries)
            if lhs != [eigenvalue * x for x in v]:
                raise NotCompatible("vector is not a left eigenvector for the given eigenvalue")
    return linalg.vecmat(v, inclusion_operator(level, level - 1, n).entries)


def weighted_inclusion(p: Sequence, source: int, target: int) -> InclusionOperator:
    """Inclusion operator weighted by the product of ``p_j`` over the added elements."""
    n = len(p)
    if n == 0:
        raise DimensionMismatch("empty distribution")
    if not 0 <= source <= target <= n:
        raise LevelOutOfRange(f"need 0 <= source <= target <= {n}")
    entries = []
    for I in subsets(n, source):
        row = []
        sI = set(I)
        for J in subsets(n, target):
            if sI <= set(J):
                w = Fraction(1)
                for j in J:
                    if j not in sI:
                        w *= p[j - 1]
                row.append(w)
            else:
                row.append(Fraction(0))
        entries.append(row)
    return InclusionOperator(n, source, target, entries, kind="weighted")
