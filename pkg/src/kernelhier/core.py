"""Transformations of {1..n} and ell-subsets in dictionary order.

Vertices are 1-based throughout.  A transformation is written in one-line
notation, ``[f(1) f(2) ... f(n)]``; composition applies the left argument
first, so that the matrix of ``compose(f, g)`` is ``F @ G``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import LengthMismatch, OutOfRange, PositionOutOfRange, SizeMismatch, LevelOutOfRange

Subset = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Transformation:
    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.n:
            raise LengthMismatch(f"expected {self.n} images, got {len(self.images)}")
        for x in self.images:
            if not 1 <= x <= self.n:
                raise OutOfRange(f"image {x} not in 1..{self.n}")

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __str__(self):
        sep = "" if self.n < 10 else ","
        return "[" + sep.join(str(x) for x in self.images) + "]"

    def __repr__(self):
        return f"Transformation{self}"

    def apply(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[i - 1] for i in subset)

    @property
    def rank(self) -> int:
        return len(set(self.images))

    @property
    def image(self) -> Subset:
        return tuple(sorted(set(self.images)))

    @property
    def partition(self) -> tuple[Subset, ...]:
        """Preimage blocks of the image points, sorted."""
        blocks: dict[int, list[int]] = {}
        for i, x in enumerate(self.images, start=1):
            blocks.setdefault(x, []).append(i)
        return tuple(sorted(tuple(b) for b in blocks.values()))

    @property
    def matrix(self) -> list[list[int]]:
        rows = [[0] * self.n for _ in range(self.n)]
        for i, x in enumerate(self.images):
            rows[i][x - 1] = 1
        return rows

    def is_idempotent(self) -> bool:
        return all(self.images[x - 1] == x for x in self.images)

    def is_permutation(self) -> bool:
        return self.rank == self.n


def from_oneline(images: Sequence[int] | str, n: int | None = None) -> Transformation:
    """Build a transformation from ``[f(1), ..., f(n)]``.

    A digit string such as ``"2344"`` is accepted for n < 10.
    """
    if isinstance(images, str):
        text = images.strip().strip("[]")
        if "," in text or " " in text:
            vals = [int(t) for t in text.replace(",", " ").split()]
        else:
            vals = [int(ch) for ch in text]
    else:
        vals = [int(x) for x in images]
    if n is None:
        n = len(vals)
    if len(vals) != n:
        raise LengthMismatch(f"expected {n} images, got {len(vals)}")
    return Transformation(n, tuple(vals))


def identity(n: int) -> Transformation:
    return Transformation(n, tuple(range(1, n + 1)))


def compose(f: Transformation, g: Transformation) -> Transformation:
    """Apply ``f`` then ``g``."""
    if f.n != g.n:
        raise SizeMismatch(f"cannot compose maps on {f.n} and {g.n} points")
    gi = g.images
    return Transformation(f.n, tuple(gi[x - 1] for x in f.images))


def rank_of(f: Transformation) -> int:
    return f.rank


def image_of(f: Transformation) -> Subset:
    return f.image


def partition_of(f: Transformation) -> tuple[Subset, ...]:
    return f.partition


def matrix_of(f: Transformation) -> list[list[int]]:
    return f.matrix


@lru_cache(maxsize=None)
def subsets(n: int, level: int) -> tuple[Subset, ...]:
    """All ``level``-subsets of {1..n} in dictionary order."""
    if not 0 <= level <= n:
        raise LevelOutOfRange(f"level {level} outside 0..{n}")
    return tuple(combinations(range(1, n + 1), level))


@lru_cache(maxsize=None)
def subset_lookup(n: int, level: int) -> dict[Subset, int]:
    return {s: i for i, s in enumerate(subsets(n, level))}


def subset_position(members: Iterable[int], n: int) -> int:
    """1-based dictionary-order position of a subset among those of its size."""
    ms = tuple(sorted(members))
    level = len(ms)
    if len(set(ms)) != level or any(not 1 <= m <= n for m in ms):
        raise OutOfRange(f"{ms} is not a subset of 1..{n}")
    pos = 0
    prev = 0
    for idx, c in enumerate(ms):
        for v in range(prev + 1, c):
            pos += comb(n - v, level - idx - 1)
        prev = c
    return pos + 1


def subset_unrank(pos: int, n: int, level: int) -> Subset:
    total = comb(n, level)
    if not 1 <= pos <= total:
        raise PositionOutOfRange(f"position {pos} outside 1..{total}")
    rest = pos - 1
    out = []
    v = 1
    for idx in range(level):
        while True:
            block = comb(n - v, level - idx - 1)
            if rest < block:
                break
            rest -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x).strip())
