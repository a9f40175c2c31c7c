"""Measures on the semigroup, the idempotent limit measure and projections.

A measure is a plain ``dict`` from transformations to Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import linalg
from .core import compose
from .errors import NearSingular, NotProductForm, NotSubstochastic, SingularSystem
from .hierarchy import level_matrix
from .semigroup import ColorSystem, KernelStructure, SemigroupTable


@dataclass(frozen=True)
class LimitFactorization:
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    group_order: int

    def weight(self, x: int, y: int) -> Fraction:
        return self.alpha[x] * self.beta[y] / self.group_order


@dataclass(frozen=True)
class ProjectionMatrix:
    level: int
    entries: list

    @property
    def trace(self):
        return linalg.trace(self.entries)

    @property
    def rank(self):
        return linalg.rank(self.entries)


def generator_measure(cs: ColorSystem) -> dict:
    mu: dict = {}
    for w, c in zip(cs.weights, cs.colors):
        mu[c] = mu.get(c, 0) + w
    return mu


def convolve(m1: dict, m2: dict, st: SemigroupTable | None = None) -> dict:
    """``(m1 * m2)(w)`` sums ``m1(a) m2(b)`` over products ``a b = w`` (a applied first)."""
    out: dict = {}
    for a, wa in m1.items():
        if not wa:
            continue
        for b, wb in m2.items():
            if wb:
                c = compose(a, b)
                out[c] = out.get(c, 0) + wa * wb
    if st is not None and any(w not in st for w in out):
        raise ValueError("convolution left the semigroup")
    return out


def total_mass(m: dict) -> Fraction:
    return sum(m.values(), Fraction(0))


def sup_distance(m1: dict, m2: dict) -> Fraction:
    keys = set(m1) | set(m2)
    return max((abs(m1.get(k, 0) - m2.get(k, 0)) for k in keys), default=Fraction(0))


FULL_SOLVE_LIMIT = 100


def _stationary_of_action(states, step, mu):
    """Unique stationary vector of the chain ``state -> step(state, c)`` with weights ``mu``."""
    idx = {s: i for i, s in enumerate(states)}
    m = len(states)
    T = linalg.zeros(m, m)
    for c, w in mu.items():
        for i, s in enumerate(states):
            T[i][idx[step(s, c)]] += w
    system = linalg.transpose(linalg.sub(T, linalg.eye(m)))
    system.append([1] * m)
    return linalg.solve(system, [0] * m + [1])


def is_fixed_point(lam: dict, mu: dict) -> bool:
    """``lam = mu * lam = lam * mu`` exactly."""
    return _same(convolve(mu, lam), lam) and _same(convolve(lam, mu), lam)


def _same(m1, m2):
    return all(m1.get(k, 0) == m2.get(k, 0) for k in set(m1) | set(m2))


def _full_solve(mu, K):
    idx = {k: i for i, k in enumerate(K)}
    m = len(K)
    rows = []
    for side in ("left", "right"):
        block = linalg.eye(m)
        for c, w in mu.items():
            for j, k in enumerate(K):
                prod = compose(c, k) if side == "left" else compose(k, c)
                block[idx[prod]][j] -= w
        rows.extend(block)
    rows.append([1] * m)
    return linalg.solve(rows, [0] * (2 * m) + [1])


def _marginal_solve(mu, ks):
    def pull(partition, c):
        # partition of c then k, where k has the given partition
        block = {v: b for b, blk in enumerate(partition) for v in blk}
        groups: dict = {}
        for i in range(1, c.n + 1):
            groups.setdefault(block[c(i)], []).append(i)
        return tuple(sorted(tuple(g) for g in groups.values()))

    def push(range_, c):
        return tuple(sorted({c(v) for v in range_}))

    alpha = _stationary_of_action(ks.partitions, pull, mu)
    beta = _stationary_of_action(ks.ranges, push, mu)
    G = ks.group.order
    return [alpha[ks.x_of(k)] * beta[ks.y_of(k)] / G for k in ks.elements]


def limit_measure_exact(cs: ColorSystem, st: SemigroupTable | None, ks: KernelStructure,
                        method: str = "auto") -> dict:
    """Unique measure on the kernel with ``lam = mu * lam = lam * mu`` and total mass 1.

    ``method="full"`` solves the fixed-point system over all kernel elements.
    ``method="marginal"`` solves for the partition and range marginals as
    stationary vectors of the induced actions and spreads them uniformly over
    each cell; the result is then verified against the full fixed-point
    equations.  ``"auto"`` picks the full solve for small kernels.
    """
    mu = generator_measure(cs)
    K = ks.elements
    if method == "auto":
        method = "full" if len(K) <= FULL_SOLVE_LIMIT else "marginal"
    if method == "full":
        sol = _full_solve(mu, K)
    elif method == "marginal":
        sol = _marginal_solve(mu, ks)
    else:
        raise ValueError(f"unknown method {method!r}")
    if any(x < 0 for x in sol):
        raise SingularSystem("limit measure has negative weights")
    lam = {k: x for k, x in zip(K, sol)}
    if method == "marginal" and not is_fixed_point(lam, mu):
        raise SingularSystem("marginal solution is not a fixed point of the convolution")
    return lam


def factorize_lambda(lam: dict, ks: KernelStructure) -> LimitFactorization:
    alpha = [Fraction(0)] * len(ks.partitions)
    beta = [Fraction(0)] * len(ks.ranges)
    for k, w in lam.items():
        if w and k not in ks:
            raise NotProductForm(f"measure charges {k}, outside the kernel")
        x, y = ks.cell_of(k)
        alpha[x] += w
        beta[y] += w
    fac = LimitFactorization(tuple(alpha), tuple(beta), ks.group.order)
    for (x, y), members in ks.cells.items():
        for k in members:
            if lam.get(k, 0) != fac.weight(x, y):
                raise NotProductForm(f"weight of {k} is not alpha*beta/|G|")
    return fac


def cesaro_sequence(cs: ColorSystem, N: int):
    """Yield ``(m, mu^(m), cesaro average up to m)`` for m = 1..N."""
    mu = generator_measure(cs)
    power = dict(mu)
    running: dict = {}
    for m in range(1, N + 1):
        if m > 1:
            power = convolve(power, mu)
        for k, w in power.items():
            running[k] = running.get(k, 0) + w
        yield m, power, {k: w / m for k, w in running.items()}


def cesaro_partial(cs: ColorSystem, st: SemigroupTable | None, N: int) -> dict:
    if N < 1:
        raise ValueError("N must be at least 1")
    for _, _, avg in cesaro_sequence(cs, N):
        pass
    return avg


def a_level(cs: ColorSystem, level: int):
    out = None
    for w, c in zip(cs.weights, cs.colors):
        term = linalg.scale(level_matrix(c, level).entries, w)
        out = term if out is None else linalg.add(out, term)
    return out


def omega_level(cs: ColorSystem, level: int, ks: KernelStructure, lam: dict | None = None) -> ProjectionMatrix:
    """Kernel average of the level matrices under the limit measure."""
    if lam is None:
        lam = limit_measure_exact(cs, None, ks)
    size = comb(cs.n, level)
    out = linalg.zeros(size, size)
    for k, w in lam.items():
        if w:
            F = level_matrix(k, level).entries
            for i, row in enumerate(F):
                for j, x in enumerate(row):
                    if x:
                        out[i][j] += w
    return ProjectionMatrix(level, out)


def _check_substochastic(P):
    n, m = linalg.shape(P)
    if n != m:
        raise NotSubstochastic("matrix is not square")
    for row in P:
        if any(x < 0 for x in row) or sum(row) > 1:
            raise NotSubstochastic("entries must be nonnegative with row sums at most 1")


def eigenprojection(P, level: int = 0) -> ProjectionMatrix:
    """Exact Abel limit: projection onto the fixed vectors along the other eigenspaces."""
    _check_substochastic(P)
    n = len(P)
    IP = linalg.sub(linalg.eye(n), P)
    right = linalg.nullspace(IP)
    left = linalg.left_nullspace(IP)
    if not right:
        return ProjectionMatrix(level, linalg.zeros(n, n))
    R = linalg.transpose(right)
    LR = linalg.matmul(left, R)
    try:
        middle = linalg.inverse(LR)
    except SingularSystem as exc:
        raise SingularSystem("eigenvalue 1 is not semisimple") from exc
    return ProjectionMatrix(level, linalg.matmul(linalg.matmul(R, middle), left))


def abel_numeric(P, s: float) -> np.ndarray:
    """Floating-point ``(1 - s)(I - sP)^-1``; a cross-check only."""
    if not 0 <= s < 1:
        raise ValueError("s must lie in [0, 1)")
    M = np.eye(len(P)) - s * np.array(P, dtype=float)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1e13:
        raise NearSingular(f"I - sP is ill-conditioned (cond = {cond:.3g})")
    return (1 - s) * np.linalg.inv(M)
