"""Semigroups generated by colorings and the Rees structure of their kernels."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from . import linalg
from .core import Subset, Transformation, as_fraction, compose, from_oneline
from .errors import EmptyCell, ExplosionGuard, NotInKernel, SandwichEscape, SizeMismatch
from .hierarchy import COLLAPSED, level_map

DEFAULT_CAP = 200_000


@dataclass(frozen=True)
class ColorSystem:
    n: int
    colors: tuple[Transformation, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.colors:
            raise ValueError("a color system needs at least one color")
        if any(c.n != self.n for c in self.colors):
            raise SizeMismatch("all colors must act on the same n points")
        if len(self.weights) != len(self.colors):
            raise ValueError("one weight per color is required")
        if any(w <= 0 for w in self.weights) or sum(self.weights) != 1:
            raise ValueError("weights must be positive and sum to 1")

    @classmethod
    def from_images(cls, colors: Sequence, weights: Sequence | None = None, n: int | None = None):
        maps = tuple(c if isinstance(c, Transformation) else from_oneline(c, n) for c in colors)
        if weights is None:
            weights = [Fraction(1, len(maps))] * len(maps)
        return cls(maps[0].n, maps, tuple(as_fraction(w) for w in weights))

    @property
    def d(self) -> int:
        return len(self.colors)

    def adjacency(self):
        """Weighted stochastic matrix sum_i w_i C_i."""
        A = linalg.zeros(self.n, self.n)
        for w, c in zip(self.weights, self.colors):
            for i, x in enumerate(c.images):
                A[i][x - 1] += w
        return A


class SemigroupTable:
    """Elements of the generated semigroup in breadth-first discovery order.

    ``words[i]`` is a shortest word (0-based color indices) whose product, applied
    left to right, is ``elements[i]``.
    """

    def __init__(self, elements, words, generator_indices):
        self.elements: list[Transformation] = elements
        self.words: list[tuple[int, ...]] = words
        self.generator_indices: tuple[int, ...] = generator_indices
        self.index = {e: i for i, e in enumerate(elements)}
        self._products: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, f):
        return f in self.index

    def product(self, i: int, j: int) -> int:
        key = (i, j)
        k = self._products.get(key)
        if k is None:
            k = self.index[compose(self.elements[i], self.elements[j])]
            self._products[key] = k
        return k


def generate_semigroup(cs: ColorSystem, cap: int = DEFAULT_CAP) -> SemigroupTable:
    elements: list[Transformation] = []
    words: list[tuple[int, ...]] = []
    index: dict[Transformation, int] = {}
    gens = []
    queue = deque()
    for ci, c in enumerate(cs.colors):
        if c not in index:
            index[c] = len(elements)
            elements.append(c)
            words.append((ci,))
            queue.append(index[c])
        gens.append(index[c])
    while queue:
        i = queue.popleft()
        s = elements[i]
        for ci, c in enumerate(cs.colors):
            t = compose(s, c)
            if t not in index:
                if len(elements) >= cap:
                    raise ExplosionGuard(cap)
                index[t] = len(elements)
                elements.append(t)
                words.append(words[i] + (ci,))
                queue.append(index[t])
    return SemigroupTable(elements, words, tuple(gens))


@dataclass
class LocalGroup:
    elements: list[Transformation]
    identity: Transformation

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def table(self) -> list[list[int]]:
        """Cayley table by element index; built on first use."""
        idx = {g: i for i, g in enumerate(self.elements)}
        return [[idx[compose(a, b)] for b in self.elements] for a in self.elements]

    def is_abelian(self) -> bool:
        els = self.elements
        return all(compose(a, b) == compose(b, a) for i, a in enumerate(els) for b in els[:i])


def _group_of(elements, identity) -> LocalGroup:
    return LocalGroup(list(elements), identity)


@dataclass
class KernelStructure:
    """Rees decomposition of the kernel.

    Partitions and ranges are listed in sorted order; cells are keyed by
    ``(partition index, range index)``.
    """
    n: int
    elements: list[Transformation]
    rank: int
    partitions: list[tuple[Subset, ...]]
    ranges: list[Subset]
    cells: dict[tuple[int, int], list[Transformation]]
    idempotents: dict[tuple[int, int], Transformation]
    base: Transformation
    group: LocalGroup
    _pindex: dict = field(default_factory=dict, repr=False)
    _rindex: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._pindex = {p: i for i, p in enumerate(self.partitions)}
        self._rindex = {r: i for i, r in enumerate(self.ranges)}
        self._members = set(self.elements)

    def __contains__(self, k):
        return k in self._members

    def x_of(self, k: Transformation) -> int:
        return self._pindex[k.partition]

    def y_of(self, k: Transformation) -> int:
        return self._rindex[k.image]

    def cell_of(self, k: Transformation) -> tuple[int, int]:
        return self.x_of(k), self.y_of(k)

    @property
    def base_cell(self) -> tuple[int, int]:
        return self.cell_of(self.base)

    @property
    def X(self) -> list[Transformation]:
        """Idempotents of K e: one per partition, all with the range of e."""
        ye = self.y_of(self.base)
        return [self.idempotents[(i, ye)] for i in range(len(self.partitions))]

    @property
    def Y(self) -> list[Transformation]:
        """Idempotents of e K: one per range, all with the partition of e."""
        xe = self.x_of(self.base)
        return [self.idempotents[(xe, j)] for j in range(len(self.ranges))]


def kernel_of(st: SemigroupTable, colors: Sequence[Transformation] | None = None) -> KernelStructure:
    r = min(e.rank for e in st.elements)
    K = [e for e in st.elements if e.rank == r]
    gens = colors if colors is not None else [st.elements[i] for i in st.generator_indices]
    # generators times kernel staying at rank r proves the two-sided ideal property by induction
    for k in K:
        for c in gens:
            if compose(c, k).rank != r or compose(k, c).rank != r:
                raise AssertionError("minimal-rank elements do not form an ideal")
    partitions = sorted({k.partition for k in K})
    ranges = sorted({k.image for k in K})
    pidx = {p: i for i, p in enumerate(partitions)}
    ridx = {y: i for i, y in enumerate(ranges)}
    cells: dict[tuple[int, int], list[Transformation]] = {}
    for k in K:
        cells.setdefault((pidx[k.partition], ridx[k.image]), []).append(k)
    idempotents = {}
    for key, members in cells.items():
        ids = [k for k in members if k.is_idempotent()]
        if len(ids) != 1:
            raise AssertionError(f"cell {key} has {len(ids)} idempotents")
        idempotents[key] = ids[0]
    base = next(k for k in K if k.is_idempotent())
    bcell = (pidx[base.partition], ridx[base.image])
    group = _group_of(cells[bcell], base)
    if len(cells) != len(partitions) * len(ranges):
        raise AssertionError("kernel is missing cells")
    if any(len(v) != group.order for v in cells.values()):
        raise AssertionError("kernel cells have unequal sizes")
    return KernelStructure(K[0].n, K, r, partitions, ranges, cells, idempotents, base, group)


def rees_coordinates(ks: KernelStructure, k: Transformation):
    """``(x, g, y)`` with ``x`` in X, ``g`` in G, ``y`` in Y and ``x g y = k``."""
    if k not in ks:
        raise NotInKernel(f"{k} is not in the kernel")
    xe, ye = ks.base_cell
    x = ks.idempotents[(ks.x_of(k), ye)]
    y = ks.idempotents[(xe, ks.y_of(k))]
    for g in ks.group.elements:
        if compose(compose(x, g), y) == k:
            return x, g, y
    raise AssertionError(f"no group coordinate found for {k}")


def rees_product(x, g, y) -> Transformation:
    return compose(compose(x, g), y)


def sandwich(ks: KernelStructure, y: Transformation, x: Transformation) -> Transformation:
    g = compose(y, x)
    if g not in set(ks.group.elements):
        raise SandwichEscape(f"{y} * {x} = {g} is not in the local group")
    return g


def sandwich_table(ks: KernelStructure) -> list[list[Transformation]]:
    return [[sandwich(ks, y, x) for x in ks.X] for y in ks.Y]


def structural_right_group(ks: KernelStructure) -> bool:
    return len(ks.partitions) == 1


def structural_left_group(ks: KernelStructure) -> bool:
    return len(ks.ranges) == 1


def local_group(ks: KernelStructure, partition, range_) -> LocalGroup:
    """The H-class with the given partition and range (labels or indices)."""
    xi = partition if isinstance(partition, int) else ks._pindex.get(
        tuple(sorted(tuple(sorted(b)) for b in partition)))
    yi = range_ if isinstance(range_, int) else ks._rindex.get(tuple(sorted(range_)))
    members = ks.cells.get((xi, yi))
    if not members:
        raise EmptyCell(f"no kernel cell for partition {partition} and range {range_}")
    return _group_of(members, ks.idempotents[(xi, yi)])


def level_labels(ks: KernelStructure, level: int):
    """Level-ell partitions and ranges of the kernel with the collapsed state.

    Subsets are reported by their 1-based dictionary position and the collapsed
    state by ``COLLAPSED``.  Returns ``(partitions, ranges)`` aligned with
    ``ks.partitions`` and ``ks.ranges``.
    """
    def blocks_of(k):
        m = level_map(k, level)
        groups: dict = {}
        for i, j in enumerate(m):
            groups.setdefault(COLLAPSED if j is None else j, []).append(i + 1)
        out = []
        for key, members in groups.items():
            out.append(members + [COLLAPSED] if key == COLLAPSED else members)
        return sorted(out, key=lambda b: b[0])

    def range_of(k):
        m = level_map(k, level)
        return sorted({j + 1 for j in m if j is not None}) + [COLLAPSED]

    parts = [blocks_of(ks.idempotents[(i, 0)]) for i in range(len(ks.partitions))]
    rngs = [range_of(ks.idempotents[(0, j)]) for j in range(len(ks.ranges))]
    return parts, rngs


def kernel_table(ks: KernelStructure) -> list[list[Transformation]]:
    return [[ks.idempotents[(i, j)] for j in range(len(ks.ranges))]
            for i in range(len(ks.partitions))]
