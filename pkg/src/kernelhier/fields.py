"""Invariant vectors over ell-subsets: the pi and u hierarchies and what they reveal.

``pi`` fields are left fixed vectors (row sums of the kernel average seen from
the left), normalized to total mass 1.  ``u`` fields are right fixed vectors,
scaled so the largest entry is 1.  Both keep the unscaled vector in ``raw``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

from . import linalg
from .core import Subset, subsets
from .errors import (DimensionMismatch, LevelOutOfRange, NotAperiodic, NotConstant,
                     NotIrreducible)
from .hierarchy import inclusion_operator, weighted_inclusion
from .limits import omega_level
from .semigroup import ColorSystem, KernelStructure


@dataclass(frozen=True)
class Field:
    n: int
    level: int
    kind: str
    values: tuple[Fraction, ...]
    raw: tuple[Fraction, ...]

    @property
    def orientation(self) -> str:
        return "row" if self.kind == "pi" else "column"

    def __getitem__(self, members) -> Fraction:
        from .core import subset_lookup
        return self.values[subset_lookup(self.n, self.level)[tuple(sorted(members))]]

    def support(self) -> list[Subset]:
        return [s for s, v in zip(subsets(self.n, self.level), self.values) if v]


def make_field(n: int, level: int, kind: str, raw: Sequence) -> Field:
    raw = tuple(Fraction(x) for x in raw)
    if len(raw) != comb(n, level):
        raise DimensionMismatch(f"{len(raw)} values do not fit level {level} of n={n}")
    if kind == "pi":
        total = sum(raw)
        values = tuple(x / total for x in raw) if total else raw
    elif kind == "u":
        top = max(raw, default=Fraction(0))
        values = tuple(x / top for x in raw) if top else raw
    else:
        raise ValueError(f"unknown field kind {kind!r}")
    return Field(n, level, kind, values, raw)


def _reach(adj, start):
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def graph_period(cs: ColorSystem) -> int:
    """Period of the strongly connected digraph of the coloring (gcd of cycle lengths)."""
    n = cs.n
    adj = {i: {c(i) for c in cs.colors} for i in range(1, n + 1)}
    depth = {1: 0}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in depth:
                depth[w] = depth[v] + 1
                queue.append(w)
    g = 0
    for v in adj:
        for w in adj[v]:
            g = gcd(g, depth[v] + 1 - depth[w])
    return g


def is_irreducible(cs: ColorSystem) -> bool:
    n = cs.n
    adj = {i: {c(i) for c in cs.colors} for i in range(1, n + 1)}
    radj = {i: set() for i in range(1, n + 1)}
    for v, ws in adj.items():
        for w in ws:
            radj[w].add(v)
    return len(_reach(adj, 1)) == n and len(_reach(radj, 1)) == n


def stationary(cs: ColorSystem) -> Field:
    if not is_irreducible(cs):
        raise NotIrreducible("the colored digraph is not strongly connected")
    period = graph_period(cs)
    if period != 1:
        raise NotAperiodic(f"the colored digraph has period {period}")
    n = cs.n
    A = cs.adjacency()
    system = linalg.transpose(linalg.sub(A, linalg.eye(n)))
    system.append([1] * n)
    p = linalg.solve(system, [0] * n + [1])
    return make_field(n, 1, "pi", p)


def _check_level(ks: KernelStructure, level):
    if not 1 <= level <= ks.rank:
        raise LevelOutOfRange(f"level {level} outside 1..{ks.rank}")


def pi_field(cs: ColorSystem, ks: KernelStructure, level: int, lam: dict | None = None) -> Field:
    _check_level(ks, level)
    omega = omega_level(cs, level, ks, lam).entries
    return make_field(cs.n, level, "pi", [sum(col) for col in zip(*omega)])


def u_field(cs: ColorSystem, ks: KernelStructure, level: int, lam: dict | None = None) -> Field:
    _check_level(ks, level)
    omega = omega_level(cs, level, ks, lam).entries
    return make_field(cs.n, level, "u", [sum(row) for row in omega])


def split_probability(ks: KernelStructure, alpha: Sequence, members) -> Fraction:
    """alpha-probability that the given vertices fall in distinct blocks of a kernel partition."""
    total = Fraction(0)
    for a, partition in zip(alpha, ks.partitions):
        block = {v: b for b, blk in enumerate(partition) for v in blk}
        if len({block[v] for v in members}) == len(members):
            total += a
    return total


def pi_descend(field: Field) -> Field:
    """pi_(l-1)(I) = sum of pi_l(J) over J containing I; unweighted inclusion."""
    if field.level < 2:
        raise LevelOutOfRange("cannot descend below level 1")
    down = inclusion_operator(field.level, field.level - 1, field.n).entries
    return make_field(field.n, field.level - 1, "pi", linalg.vecmat(field.raw, down))


def u_descend(field: Field, pi: Sequence) -> Field:
    """u_(l-1)(I) = sum over i outside I of p_i u_l(I + {i}); pi-weighted inclusion."""
    if field.level < 2:
        raise LevelOutOfRange("cannot descend below level 1")
    p = pi.values if isinstance(pi, Field) else pi
    if len(p) != field.n:
        raise DimensionMismatch("distribution length does not match n")
    up = weighted_inclusion(p, field.level - 1, field.level).entries
    return make_field(field.n, field.level - 1, "u", linalg.matvec(up, field.raw))


def split_matrix(u2: Field):
    """Symmetric n x n matrix of pair-splitting probabilities, zero diagonal."""
    if u2.level != 2:
        raise LevelOutOfRange("split matrix needs the level-2 u field")
    n = u2.n
    m = linalg.zeros(n, n)
    for (i, j), v in zip(subsets(n, 2), u2.values):
        m[i - 1][j - 1] = m[j - 1][i - 1] = v
    return m


def kk_average(u2: Field):
    """Kernel average of K K^T, i.e. J minus the split matrix."""
    return linalg.sub(linalg.ones(u2.n, u2.n), split_matrix(u2))


def rank_witness(pi, u2: Field) -> list[Fraction]:
    p = pi.values if isinstance(pi, Field) else pi
    return linalg.vecmat(p, kk_average(u2))


def detect_rank(pi, u2: Field) -> int:
    v = rank_witness(pi, u2)
    if len(set(v)) != 1:
        raise NotConstant(f"pi (J - u2) is not constant: {v}")
    c = v[0]
    if c <= 0 or (1 / c).denominator != 1:
        raise NotConstant(f"constant {c} is not the reciprocal of an integer")
    return int(1 / c)


def right_group_test(u2: Field):
    """(is right group, partition read off from the zeros of u2 or None)."""
    if any(v not in (0, 1) for v in u2.values):
        return False, None
    n = u2.n
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j), v in zip(subsets(n, 2), u2.values):
        if v == 0:
            parent[find(i)] = find(j)
    blocks: dict[int, list[int]] = {}
    for v in range(1, n + 1):
        blocks.setdefault(find(v), []).append(v)
    return True, tuple(sorted(tuple(b) for b in blocks.values()))


@dataclass
class FriedmanReport:
    rank: int
    block_violations: list
    element_violations: list

    @property
    def ok(self) -> bool:
        return not self.block_violations and not self.element_violations


def friedman_check(pi, ks: KernelStructure) -> FriedmanReport:
    """Every kernel block has pi-mass 1/r and pi k = rho(k)/r for every kernel k."""
    p = pi.values if isinstance(pi, Field) else pi
    r = ks.rank
    target = Fraction(1, r)
    blocks = []
    for partition in ks.partitions:
        for blk in partition:
            mass = sum(p[v - 1] for v in blk)
            if mass != target:
                blocks.append((blk, mass))
    elements = []
    for k in ks.elements:
        pk = [Fraction(0)] * ks.n
        for i, x in enumerate(k.images):
            pk[x - 1] += p[i]
        rho = [target if v in k.image else 0 for v in range(1, ks.n + 1)]
        if pk != rho:
            elements.append((k, pk))
    return FriedmanReport(r, blocks, elements)
