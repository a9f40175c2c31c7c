"""Two-color systems whose kernel has rank n-1: construction and classification.

Both constructions start from two permutations on n-1 points whose average is
a doubly stochastic 2-out graph, shift every label up by one, duplicate the
first column, and rewire a single edge to point at the new vertex 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .core import Subset, Transformation, from_oneline, subset_lookup, subsets
from .errors import (HasLoop, MultipleLoops, NoLoopAtVertexOne, NotRankNMinusOne,
                     RankMismatch)
from .fields import Field, stationary, u_field
from .hierarchy import inclusion_inverse
from .limits import factorize_lambda, limit_measure_exact
from .semigroup import ColorSystem, generate_semigroup, kernel_of, structural_right_group


def _as_perm(p) -> Transformation:
    f = p if isinstance(p, Transformation) else from_oneline(p)
    if not f.is_permutation():
        raise ValueError(f"{f} is not a permutation")
    return f


def _loops(r: Transformation, b: Transformation):
    return [(name, i) for name, f in (("r", r), ("b", b))
            for i in range(1, f.n + 1) if f(i) == i]


def _shift_and_duplicate(r: Transformation, b: Transformation):
    rows = []
    for f in (r, b):
        shifted = [x + 1 for x in f.images]
        rows.append([shifted[0]] + shifted)
    return rows


def split_with_loop(r, b) -> ColorSystem:
    """Case a: the loop at vertex 1 becomes the 2-cycle 1 <-> 2."""
    r, b = _as_perm(r), _as_perm(b)
    loops = _loops(r, b)
    if len(loops) > 1:
        raise MultipleLoops(f"precursor has loops {loops}")
    if not loops or loops[0][1] != 1:
        raise NoLoopAtVertexOne(f"precursor loops {loops} do not consist of a loop at vertex 1")
    rows = _shift_and_duplicate(r, b)
    which = 0 if loops[0][0] == "r" else 1
    # column 2 is the old vertex 1; its looped edge 2 -> 2 becomes 2 -> 1
    rows[which][1] = 1
    return ColorSystem.from_images(rows)


def split_no_loop(r, b) -> ColorSystem:
    """Case b: the first '2' in the blue row becomes a '1'."""
    r, b = _as_perm(r), _as_perm(b)
    loops = _loops(r, b)
    if loops:
        raise HasLoop(f"precursor has loops {loops}")
    rows = _shift_and_duplicate(r, b)
    rows[1][rows[1].index(2)] = 1
    return ColorSystem.from_images(rows)


def updown_beta(pi, n: int | None = None) -> list[Fraction]:
    """Unnormalized level-(n-1) left fixed vector from pi via the inverse inclusion operator."""
    p = list(pi.values if isinstance(pi, Field) else pi)
    n = n or len(p)
    if len(p) != n:
        raise RankMismatch("distribution length does not match n")
    M = inclusion_inverse(1, n)
    return linalg.vecmat(p, linalg.transpose(M))


def _normalize(v):
    total = sum(v)
    return [x / total for x in v]


def recover_precursor(cs: ColorSystem):
    """Undo the splitting: drop vertex 1, lump it into 2, shift labels down."""
    out = []
    for c in cs.colors:
        out.append(from_oneline([max(y, 2) - 1 for y in c.images[1:]]))
    return tuple(out)


def relabel(cs: ColorSystem, perm: dict[int, int]) -> ColorSystem:
    """Conjugate every color by the vertex renumbering ``perm`` (old -> new)."""
    colors = []
    for c in cs.colors:
        imgs = [0] * cs.n
        for i in range(1, cs.n + 1):
            imgs[perm[i] - 1] = perm[c(i)]
        colors.append(imgs)
    return ColorSystem.from_images(colors, cs.weights)


@dataclass
class ClassificationReport:
    case: str
    n: int
    q: Fraction
    renumbering: dict[int, int]
    doubleton: tuple[int, int]
    in_degrees: list[int]
    pi: list[Fraction]
    predicted_pi: list[Fraction]
    predicted_beta: list[Fraction]
    predicted_ranges: list[Subset]
    predicted_u2: list[Fraction]
    observed_beta: list[Fraction]
    observed_ranges: list[Subset]
    observed_u2: list[Fraction]
    right_group: bool
    precursor: tuple | None = None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())


def in_degrees(cs: ColorSystem) -> list[int]:
    deg = [0] * cs.n
    for c in cs.colors:
        for x in c.images:
            deg[x - 1] += 1
    return deg


def invariance_holds(cs: ColorSystem, p: Sequence) -> bool:
    """d p_i equals the sum of p_j over edges j -> i, at every vertex."""
    acc = [Fraction(0)] * cs.n
    for c in cs.colors:
        for j, x in enumerate(c.images):
            acc[x - 1] += p[j]
    return all(a == cs.d * pi for a, pi in zip(acc, p))


def classify_rank_n_minus_1(cs: ColorSystem, cap: int | None = None) -> ClassificationReport:
    if cs.d != 2:
        raise NotRankNMinusOne("classification covers two-color systems only")
    n = cs.n
    st = generate_semigroup(cs) if cap is None else generate_semigroup(cs, cap)
    ks = kernel_of(st)
    if ks.rank != n - 1:
        raise NotRankNMinusOne(f"kernel rank is {ks.rank}, not {n - 1}")
    pi = stationary(cs).values
    lam = limit_measure_exact(cs, st, ks)
    fac = factorize_lambda(lam, ks)

    pairs = {blk for part in ks.partitions for blk in part if len(blk) == 2}
    if len(ks.partitions) != 1 or len(pairs) != 1:
        raise AssertionError("rank n-1 kernel without a single doubleton block")
    a, b = next(iter(pairs))
    deg = in_degrees(cs)
    edges = {(j, c(j)) for c in cs.colors for j in range(1, n + 1)}
    case = "neither"
    first, second = a, b
    unit = Fraction(1, n - 1)
    if pi[a - 1] == pi[b - 1] == unit / 2:
        case = "b"
    else:
        for s, t in ((a, b), (b, a)):
            if deg[s - 1] == 1 and (t, s) in edges:
                first, second, case = s, t, "a"
                break
    others = [v for v in range(1, n + 1) if v not in (first, second)]
    renumbering = {first: 1, second: 2}
    renumbering.update({v: i for i, v in enumerate(others, start=3)})
    q = pi[second - 1]

    predicted_pi = [unit - q, q] + [unit] * (n - 2)
    observed_pi_renum = [pi[old - 1] for old, _ in sorted(renumbering.items(), key=lambda kv: kv[1])]

    beta_vec = _normalize(updown_beta(pi, n))
    top = subsets(n, n - 1)
    predicted_ranges = [s for s, v in zip(top, beta_vec) if v]
    observed_vec = [Fraction(0)] * len(top)
    lookup = subset_lookup(n, n - 1)
    for y, rng in enumerate(ks.ranges):
        observed_vec[lookup[rng]] = fac.beta[y]

    u2 = u_field(cs, ks, 2, lam)
    predicted_u2 = [Fraction(0) if set(s) == {a, b} else Fraction(1) for s in subsets(n, 2)]

    renum_cs = relabel(cs, renumbering)
    report = ClassificationReport(
        case=case, n=n, q=q, renumbering=renumbering, doubleton=(a, b), in_degrees=deg,
        pi=list(pi), predicted_pi=predicted_pi, predicted_beta=beta_vec,
        predicted_ranges=predicted_ranges, predicted_u2=predicted_u2,
        observed_beta=observed_vec, observed_ranges=list(ks.ranges),
        observed_u2=list(u2.values), right_group=structural_right_group(ks),
    )
    expected_q = {"a": Fraction(2, 3) * unit, "b": unit / 2}.get(case)
    report.checks = {
        "max in-degree at most 3": max(deg) <= 3,
        "invariance equation": invariance_holds(cs, pi),
        "pi matches closed form": observed_pi_renum == predicted_pi,
        "q matches case": expected_q is not None and q == expected_q,
        "beta from up-down symmetry": beta_vec == observed_vec,
        "u2 is [0, 1, ..., 1]": predicted_u2 == list(u2.values),
        "right group": report.right_group,
    }
    if case == "a":
        report.precursor = recover_precursor(renum_cs)
    return report
