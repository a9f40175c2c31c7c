"""Small dense exact linear algebra over Fractions.

Matrices are lists of row lists.  Entries may be ints or Fractions; results of
elimination are always Fractions.  Sizes stay in the hundreds, so plain
Gauss-Jordan elimination is enough.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch, SingularSystem


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def eye(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def ones(rows, cols):
    return [[1] * cols for _ in range(rows)]


def shape(a):
    return (len(a), len(a[0]) if a else 0)


def transpose(a):
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    if a and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(cols):
                    y = brow[j]
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matpow(a, k):
    out = eye(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def add(a, b):
    if shape(a) != shape(b):
        raise DimensionMismatch(f"cannot add {shape(a)} and {shape(b)}")
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return add(a, scale(b, -1))


def scale(a, c):
    return [[c * x for x in row] for row in a]


def vecmat(v, a):
    """Row vector times matrix."""
    return matmul([list(v)], a)[0]


def matvec(a, v):
    """Matrix times column vector, returned as a flat list."""
    return [sum(x * y for x, y in zip(row, v) if x and y) for row in a]


def trace(a):
    return sum(a[i][i] for i in range(len(a)))


def equal(a, b):
    return shape(a) == shape(b) and all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def rref(a):
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                ri = m[r]
                m[i] = [x - f * y for x, y in zip(m[i], ri)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a):
    return len(rref(a)[1]) if a else 0


def nullspace(a):
    """Basis of {x : a x = 0}, one list per vector."""
    m, pivots = rref(a)
    cols = shape(a)[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def left_nullspace(a):
    """Basis of {y : y a = 0}."""
    return nullspace(transpose(a))


def inverse(a):
    n, cols = shape(a)
    if n != cols:
        raise DimensionMismatch(f"cannot invert a {n}x{cols} matrix")
    aug = [list(row) + e for row, e in zip(a, eye(n))]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is singular")
    return [row[n:] for row in m]


def solve(a, b):
    """Unique solution of ``a x = b`` for a possibly overdetermined system."""
    rows, cols = shape(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if cols in pivots:
        raise SingularSystem("system is inconsistent")
    if len(pivots) < cols:
        raise SingularSystem(f"solution not unique: {cols - len(pivots)} free parameters")
    return [m[i][cols] for i in range(cols)]
