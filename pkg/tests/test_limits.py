from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from kernelhier import linalg
from kernelhier.core import compose, from_oneline
from kernelhier.errors import NotProductForm, NotSubstochastic
from kernelhier.limits import (a_level, abel_numeric, cesaro_partial, cesaro_sequence, convolve,
                               eigenprojection, factorize_lambda, generator_measure,
                               is_fixed_point, limit_measure_exact, omega_level, sup_distance,
                               total_mass)
from kernelhier.semigroup import ColorSystem, generate_semigroup, kernel_of

from . import reference_values as pv

# first N where the Cesaro average is within 0.01 of the limit (sup norm)
CESARO_CROSSING = 57


def test_convolve_identity_is_neutral():
    e = from_oneline("1234")
    mu = {from_oneline("2341"): Fraction(1, 2), from_oneline("1213"): Fraction(1, 2)}
    assert convolve({e: Fraction(1)}, mu) == mu
    assert convolve(mu, {e: Fraction(1)}) == mu


def test_convolve_square_by_enumeration(rank3):
    mu = generator_measure(rank3.cs)
    expected = {}
    for a, b in product(rank3.cs.colors, repeat=2):
        w = compose(a, b)
        expected[w] = expected.get(w, 0) + Fraction(1, 4)
    assert convolve(mu, mu, rank3.st) == expected


def test_powers_match_matrix_powers(rank3):
    # A^m = sum over words of mu^(m)(w) W
    A = a_level(rank3.cs, 1)
    for m, power, _ in cesaro_sequence(rank3.cs, 20):
        assert total_mass(power) == 1
        if m in (1, 2, 5, 9):
            M = linalg.zeros(6, 6)
            for w, x in power.items():
                M = linalg.add(M, linalg.scale(w.matrix, x))
            assert M == linalg.matpow(A, m)


def test_limit_measure_rank3(rank3):
    lam = rank3.lam
    assert set(lam) == set(rank3.ks.elements)
    assert total_mass(lam) == 1
    assert lam[from_oneline("223636")] == Fraction(1, 162)
    fac = factorize_lambda(lam, rank3.ks)
    assert list(fac.alpha) == pv.ALPHA
    assert list(fac.beta) == pv.BETA
    assert fac.group_order == 6


def test_full_and_marginal_agree(rank3):
    full = limit_measure_exact(rank3.cs, rank3.st, rank3.ks, method="full")
    marginal = limit_measure_exact(rank3.cs, rank3.st, rank3.ks, method="marginal")
    assert full == marginal
    with pytest.raises(ValueError):
        limit_measure_exact(rank3.cs, rank3.st, rank3.ks, method="power")


@pytest.mark.parametrize("name", ["rank3", "rightgroup4", "perm4", "cerny4", "case_b"])
def test_limit_relations(analyses, name):
    a = analyses[name]
    mu = generator_measure(a.cs)
    assert is_fixed_point(a.lam, mu)
    assert convolve(a.lam, a.lam) == a.lam
    fac = factorize_lambda(a.lam, a.ks)
    assert sum(fac.alpha) == 1 and sum(fac.beta) == 1
    for cell in a.ks.cells.values():
        assert len({a.lam[k] for k in cell}) == 1


def test_right_group_alpha(rightgroup4):
    assert factorize_lambda(rightgroup4.lam, rightgroup4.ks).alpha == (1,)


def test_single_permutation_is_haar():
    cs = ColorSystem.from_images(["23451"])
    st = generate_semigroup(cs)
    ks = kernel_of(st)
    lam = limit_measure_exact(cs, st, ks)
    assert len(lam) == 5 and set(lam.values()) == {Fraction(1, 5)}


def test_factorize_rejects_non_product(rank3):
    lam = dict(rank3.lam)
    k1, k2 = rank3.ks.cells[(0, 0)][:2]
    lam[k1] += Fraction(1, 1000)
    lam[k2] -= Fraction(1, 1000)
    with pytest.raises(NotProductForm):
        factorize_lambda(lam, rank3.ks)
    with pytest.raises(NotProductForm):
        factorize_lambda({rank3.cs.colors[0]: Fraction(1)}, rank3.ks)


def test_cesaro(rank3):
    mu = generator_measure(rank3.cs)
    assert cesaro_partial(rank3.cs, rank3.st, 1) == mu
    with pytest.raises(ValueError):
        cesaro_partial(rank3.cs, rank3.st, 0)
    dist, outside = [], []
    for m, _, avg in cesaro_sequence(rank3.cs, CESARO_CROSSING):
        dist.append(sup_distance(avg, rank3.lam))
        outside.append(sum(w for k, w in avg.items() if k not in rank3.ks))
    assert all(a > b for a, b in zip(dist, dist[1:]))
    assert all(a >= b for a, b in zip(outside, outside[1:]))
    assert dist[-1] <= Fraction(1, 100) < dist[-2]


def _omegas(a):
    return {lvl: omega_level(a.cs, lvl, a.ks, a.lam).entries for lvl in range(1, a.cs.n + 1)}


ALL = ["rank3", "rightgroup4", "perm4", "cerny4", "case_b"]


@pytest.mark.parametrize("name", ALL)
def test_projection_identities(analyses, name):
    a = analyses[name]
    for lvl, W in _omegas(a).items():
        A = a_level(a.cs, lvl)
        assert linalg.matmul(W, W) == W
        assert linalg.matmul(A, W) == W
        assert linalg.matmul(W, A) == W
        if lvl > a.ks.rank:
            assert not any(any(row) for row in W)


@pytest.mark.parametrize("name", ALL)
def test_eigenprojection_matches_kernel_average(analyses, name):
    a = analyses[name]
    for lvl, W in _omegas(a).items():
        P = eigenprojection(a_level(a.cs, lvl), lvl)
        assert P.entries == W
        assert P.trace == P.rank


@pytest.mark.parametrize("name", ["rank3", "rightgroup4"])
def test_fixed_vectors_span(analyses, name):
    a = analyses[name]
    for lvl, W in _omegas(a).items():
        IA = linalg.sub(linalg.eye(len(W)), a_level(a.cs, lvl))
        right = linalg.nullspace(IA)
        left = linalg.left_nullspace(IA)
        rank = linalg.rank(W)
        assert len(right) == len(left) == rank == linalg.trace(W)
        if rank:
            cols = linalg.transpose(W)
            assert linalg.rank(cols + right) == rank
            assert linalg.rank(W + left) == rank


def test_omega_one_is_rank_one(rank3):
    W = omega_level(rank3.cs, 1, rank3.ks, rank3.lam).entries
    assert all(row == pv.PI for row in W)
    assert eigenprojection(a_level(rank3.cs, 1)).entries == W


def test_omega_two_trace(rank3):
    W = omega_level(rank3.cs, 2, rank3.ks, rank3.lam)
    IA = linalg.sub(linalg.eye(15), a_level(rank3.cs, 2))
    assert W.trace == len(linalg.nullspace(IA))


def test_omega_default_measure(rank3):
    assert omega_level(rank3.cs, 2, rank3.ks).entries == omega_level(rank3.cs, 2, rank3.ks, rank3.lam).entries


def test_eigenprojection_edge_cases():
    assert eigenprojection(linalg.eye(3)).entries == linalg.eye(3)
    half = [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
    assert eigenprojection(half).entries == linalg.zeros(2, 2)
    with pytest.raises(NotSubstochastic):
        eigenprojection([[1, 1], [0, 1]])
    with pytest.raises(NotSubstochastic):
        eigenprojection([[-1, 0], [0, 1]])


def test_abel_numeric(rank3):
    A = a_level(rank3.cs, 1)
    assert np.allclose(abel_numeric(A, 0.0), np.eye(6))
    with pytest.raises(ValueError):
        abel_numeric(A, 1.0)
    exact = np.array(omega_level(rank3.cs, 1, rank3.ks, rank3.lam).entries, dtype=float)
    errors = [np.abs(abel_numeric(A, s) - exact).max() for s in (0.9, 0.99, 0.999, 0.9999)]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    for lvl in (1, 2):
        exact = np.array(omega_level(rank3.cs, lvl, rank3.ks, rank3.lam).entries, dtype=float)
        Q = abel_numeric(a_level(rank3.cs, lvl), 1 - 1e-6)
        assert np.abs(Q - exact).max() <= 1e-4
