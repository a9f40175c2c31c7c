from fractions import Fraction
from itertools import combinations

import pytest

from kernelhier import linalg
from kernelhier.core import subsets
from kernelhier.errors import (DimensionMismatch, LevelOutOfRange, NotAperiodic, NotConstant,
                               NotIrreducible)
from kernelhier.fields import (detect_rank, friedman_check, kk_average, make_field, pi_descend,
                               pi_field, rank_witness, right_group_test, split_matrix,
                               split_probability, stationary, u_descend, u_field)
from kernelhier.limits import a_level, factorize_lambda
from kernelhier.semigroup import ColorSystem, structural_right_group

from . import reference_values as pv

ALL = ["rank3", "rightgroup4", "perm4", "cerny4", "case_a", "case_b"]


def test_stationary_examples(rank3, rightgroup4, analyses):
    assert list(stationary(rank3.cs).values) == pv.PI
    assert list(stationary(rightgroup4.cs).values) == pv.RG_PI
    assert set(stationary(analyses["perm4"].cs).values) == {Fraction(1, 4)}


def test_stationary_errors():
    with pytest.raises(NotIrreducible):
        stationary(ColorSystem.from_images(["1134", "2234"]))
    with pytest.raises(NotAperiodic):
        stationary(ColorSystem.from_images(["2341", "4123"]))


def test_make_field_scaling():
    f = make_field(3, 1, "pi", [1, 1, 2])
    assert f.values == (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))
    assert f.raw == (1, 1, 2) and f.orientation == "row"
    g = make_field(3, 1, "u", [2, 1, 4])
    assert max(g.values) == 1 and g.orientation == "column"
    with pytest.raises(DimensionMismatch):
        make_field(4, 2, "u", [1, 2, 3])


def test_worked_example_fields(rank3):
    cs, ks, lam = rank3.cs, rank3.ks, rank3.lam
    u3 = u_field(cs, ks, 3, lam)
    assert list(u3.values) == pv.U3
    pi3 = pi_field(cs, ks, 3, lam)
    assert list(pi3.values) == pv.PI3
    assert list(u_field(cs, ks, 2, lam).values) == pv.U2
    assert list(u_field(cs, ks, 1, lam).values) == pv.U1
    assert list(pi_field(cs, ks, 1, lam).values) == pv.PI
    with pytest.raises(LevelOutOfRange):
        u_field(cs, ks, 4, lam)
    with pytest.raises(LevelOutOfRange):
        pi_field(cs, ks, 0, lam)


def test_pi_descent_worked_chain(rank3):
    pi3 = make_field(6, 3, "pi", pv.PI3_UNSCALED)
    pi2 = pi_descend(pi3)
    assert list(pi2.raw) == pv.PI2_UNSCALED
    pi1 = pi_descend(pi2)
    assert list(pi1.raw) == pv.PI1_UNSCALED
    assert [x / 54 for x in pi1.raw] == pv.PI
    with pytest.raises(LevelOutOfRange):
        pi_descend(pi1)


def test_u_descent_worked_example(rank3):
    u3 = make_field(6, 3, "u", pv.U3_UNSCALED)
    u2 = u_descend(u3, pv.PI)
    assert list(u2.values) == pv.U2
    # u2({1,2}) = 2*(5/27) + 2*(4/27): only vertices 3 and 5 split {1,2} further
    assert u2.raw[0] == 2 * Fraction(5, 27) + 2 * Fraction(4, 27) == Fraction(2, 3)
    with pytest.raises(DimensionMismatch):
        u_descend(u3, pv.PI[:5])


def test_u_descent_of_ones():
    ones = make_field(5, 3, "u", [1] * 10)
    down = u_descend(ones, [Fraction(1, 5)] * 5)
    assert set(down.values) == {1}


@pytest.mark.parametrize("name", ALL)
def test_u_descent_consistent(analyses, name):
    a = analyses[name]
    r = a.ks.rank
    pi = stationary(a.cs)
    for lvl in range(2, r + 1):
        down = u_descend(u_field(a.cs, a.ks, lvl, a.lam), pi)
        target = u_field(a.cs, a.ks, lvl - 1, a.lam)
        assert down.values == target.values
        assert all(x == Fraction(r - lvl + 1, r) * y for x, y in zip(down.raw, target.raw))


@pytest.mark.parametrize("name", ALL)
def test_pi_descent_gives_fixed_vectors(analyses, name):
    a = analyses[name]
    f = pi_field(a.cs, a.ks, a.ks.rank, a.lam)
    while f.level > 1:
        f = pi_descend(f)
        assert linalg.vecmat(f.raw, a_level(a.cs, f.level)) == list(f.raw)
    assert f.values == stationary(a.cs).values


def test_pi_descent_matches_field_for_equal_blocks(rank3):
    for lvl in (1, 2):
        assert pi_descend(pi_field(rank3.cs, rank3.ks, lvl + 1, rank3.lam)).values == \
            pi_field(rank3.cs, rank3.ks, lvl, rank3.lam).values


@pytest.mark.parametrize("name", ALL)
def test_u_field_is_split_probability(analyses, name):
    a = analyses[name]
    alpha = factorize_lambda(a.lam, a.ks).alpha
    for lvl in range(1, a.ks.rank + 1):
        u = u_field(a.cs, a.ks, lvl, a.lam)
        expected = [split_probability(a.ks, alpha, s) for s in subsets(a.cs.n, lvl)]
        assert list(u.values) == expected
        for rng in a.ks.ranges:
            for s in combinations(rng, lvl):
                assert u[s] == 1


@pytest.mark.parametrize("name", ALL)
def test_pi_r_is_beta_and_supported_where_u_is_one(analyses, name):
    a = analyses[name]
    r = a.ks.rank
    pi_r = pi_field(a.cs, a.ks, r, a.lam)
    beta = factorize_lambda(a.lam, a.ks).beta
    assert [pi_r[rng] for rng in a.ks.ranges] == list(beta)
    assert sum(pi_r[rng] for rng in a.ks.ranges) == 1
    u_r = u_field(a.cs, a.ks, r, a.lam)
    assert all(u_r[s] == 1 for s in pi_r.support())


@pytest.mark.parametrize("name", ALL)
def test_zero_u2_means_same_block_everywhere(analyses, name):
    a = analyses[name]
    if a.ks.rank < 2:
        pytest.skip("u2 is undefined below rank 2")
    u2 = u_field(a.cs, a.ks, 2, a.lam)
    for (i, j), v in zip(subsets(a.cs.n, 2), u2.values):
        together = all(any(i in b and j in b for b in p) for p in a.ks.partitions)
        assert (v == 0) == together


def test_split_matrix(rank3):
    u2 = u_field(rank3.cs, rank3.ks, 2, rank3.lam)
    m = split_matrix(u2)
    assert m == pv.SPLIT_MATRIX
    assert m == linalg.transpose(m)
    kk = kk_average(u2)
    assert all(kk[i][i] == 1 for i in range(6))
    with pytest.raises(LevelOutOfRange):
        split_matrix(u_field(rank3.cs, rank3.ks, 1, rank3.lam))


def test_split_matrix_permutation_group(analyses):
    a = analyses["perm4"]
    m = split_matrix(u_field(a.cs, a.ks, 2, a.lam))
    assert m == linalg.sub(linalg.ones(4, 4), linalg.eye(4))


@pytest.mark.parametrize("name,expected", [("rank3", 3), ("rightgroup4", 4), ("perm4", 4),
                                           ("case_a", 6), ("case_b", 3)])
def test_detect_rank(analyses, name, expected):
    a = analyses[name]
    pi = stationary(a.cs)
    u2 = u_field(a.cs, a.ks, 2, a.lam)
    assert rank_witness(pi, u2) == [Fraction(1, expected)] * a.cs.n
    assert detect_rank(pi, u2) == expected == a.ks.rank


def test_detect_rank_rejects_non_constant(rank3):
    u2 = u_field(rank3.cs, rank3.ks, 2, rank3.lam)
    with pytest.raises(NotConstant):
        detect_rank([Fraction(1, 2), 0, 0, 0, 0, Fraction(1, 2)], u2)
    with pytest.raises(NotConstant):
        # constant but not the reciprocal of an integer
        detect_rank([Fraction(1, 3)] * 4, make_field(4, 2, "u", [0] * 6))


def test_right_group_examples(rank3, rightgroup4, analyses):
    u2 = u_field(rightgroup4.cs, rightgroup4.ks, 2, rightgroup4.lam)
    assert list(u2.values) == pv.RG_U2
    assert right_group_test(u2) == (True, pv.RG_PARTITION)
    assert list(pi_field(rightgroup4.cs, rightgroup4.ks, 4, rightgroup4.lam).values) == pv.RG_PI4
    assert right_group_test(u_field(rank3.cs, rank3.ks, 2, rank3.lam)) == (False, None)
    # rank one: every pair collapses, so the zero pattern joins everything
    cerny = analyses["cerny4"]
    assert right_group_test(make_field(4, 2, "u", [0] * 6)) == (True, ((1, 2, 3, 4),))
    assert structural_right_group(cerny.ks)


@pytest.mark.parametrize("name", ["rank3", "rightgroup4", "perm4", "case_a", "case_b"])
def test_right_group_test_agrees_with_structure(analyses, name):
    a = analyses[name]
    ok, partition = right_group_test(u_field(a.cs, a.ks, 2, a.lam))
    assert ok == structural_right_group(a.ks)
    if ok:
        assert partition == a.ks.partitions[0]


@pytest.mark.parametrize("name", ALL)
def test_friedman(analyses, name):
    a = analyses[name]
    report = friedman_check(stationary(a.cs), a.ks)
    assert report.ok and report.rank == a.ks.rank


def test_friedman_block_masses(rank3, rightgroup4):
    pi = pv.PI
    for block in pv.P1:
        assert sum(pi[v - 1] for v in block) == Fraction(9, 27)
    for block in pv.RG_PARTITION:
        assert sum(pv.RG_PI[v - 1] for v in block) == Fraction(4, 16)


def test_friedman_reports_violations(rank3):
    report = friedman_check([Fraction(1, 2), 0, 0, 0, 0, Fraction(1, 2)], rank3.ks)
    assert not report.ok
    assert report.block_violations and report.element_violations
