"""Dense matrices over a finite field, with exact elimination routines.

Matrices wrap a read-only int64 ndarray of packed field elements together
with the owning field.  Everything here is deterministic: pivots are always
the first nonzero entry scanning down, so reduced row echelon forms are
canonical and reuse as code identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import Field, poly_is_primitive


class Matrix:
    """Immutable 2-D matrix over a Field."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data) -> None:
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError("matrix data must be 2-D")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise ValueError("entries outside the field")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def row(self, i: int) -> np.ndarray:
        return self.data[i].copy()

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and other.field is self.field
                and other.data.shape == self.data.shape
                and bool(np.array_equal(other.data, self.data)))

    def __hash__(self) -> int:
        return hash((id(self.field), self.data.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.data.tolist()})"


def zeros(field: Field, rows: int, cols: int) -> Matrix:
    return Matrix(field, np.zeros((rows, cols), dtype=np.int64))


def identity(field: Field, n: int) -> Matrix:
    data = np.zeros((n, n), dtype=np.int64)
    np.fill_diagonal(data, 1)
    return Matrix(field, data)


def vec(field: Field, entries: Sequence[int]) -> np.ndarray:
    arr = np.asarray(entries, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("vector must be 1-D")
    if arr.size and (arr.min() < 0 or arr.max() >= field.order):
        raise ValueError("entries outside the field")
    return arr


def dot(field: Field, u, v) -> int:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise ValueError("shape mismatch")
    if u.size == 0:
        return 0
    return int(field.sum_arrays(field.mul_arrays(u, v), axis=0))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.field is not b.field:
        raise ValueError("field mismatch")
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    f = a.field
    if a.cols == 0:
        return zeros(f, a.rows, b.cols)
    prods = f.mul_arrays(a.data[:, :, None], b.data[None, :, :])
    return Matrix(f, f.sum_arrays(prods, axis=1))


def mat_vec(a: Matrix, v) -> np.ndarray:
    f = a.field
    v = np.asarray(v, dtype=np.int64)
    if a.cols != v.shape[0]:
        raise ValueError("shape mismatch")
    if a.cols == 0:
        return np.zeros(a.rows, dtype=np.int64)
    return f.sum_arrays(f.mul_arrays(a.data, v[None, :]), axis=1)


def vec_mat(v, a: Matrix) -> np.ndarray:
    f = a.field
    v = np.asarray(v, dtype=np.int64)
    if a.rows != v.shape[0]:
        raise ValueError("shape mismatch")
    if a.rows == 0:
        return np.zeros(a.cols, dtype=np.int64)
    return f.sum_arrays(f.mul_arrays(v[:, None], a.data), axis=0)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if a.field is not b.field or a.data.shape != b.data.shape:
        raise ValueError("shape or field mismatch")
    return Matrix(a.field, a.field.add_arrays(a.data, b.data))


def stack(blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        raise ValueError("nothing to stack")
    f = blocks[0].field
    if any(b.field is not f for b in blocks):
        raise ValueError("field mismatch")
    return Matrix(f, np.vstack([b.data for b in blocks]))


@dataclass(frozen=True)
class RrefResult:
    matrix: Matrix
    rank: int
    pivots: tuple[int, ...]


def rref(m: Matrix) -> RrefResult:
    """Reduced row echelon form with leading ones, canonical for the row space."""
    f = m.field
    work = m.data.copy()
    nrows, ncols = work.shape
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        hits = np.nonzero(work[r:, col])[0]
        if hits.size == 0:
            continue
        pr = r + int(hits[0])
        if pr != r:
            work[[r, pr]] = work[[pr, r]]
        scale = f.inv(int(work[r, col]))
        work[r] = f.mul_arrays(np.int64(scale), work[r])
        others = np.nonzero(work[:, col])[0]
        others = others[others != r]
        if others.size:
            factors = f.neg_arrays(work[others, col])
            work[others] = f.add_arrays(
                work[others], f.mul_arrays(factors[:, None], work[r][None, :]))
        pivots.append(col)
        r += 1
    return RrefResult(Matrix(f, work), r, tuple(pivots))


def kernel(m: Matrix) -> Matrix:
    """Basis of the right null space {x : m x^T = 0}, rows in rref order."""
    f = m.field
    red = rref(m)
    pivots = red.pivots
    free = [c for c in range(m.cols) if c not in pivots]
    rows = np.zeros((len(free), m.cols), dtype=np.int64)
    rdata = red.matrix.data
    for idx, fc in enumerate(free):
        rows[idx, fc] = 1
        for j, pc in enumerate(pivots):
            rows[idx, pc] = f.neg(int(rdata[j, fc]))
    return Matrix(f, rows)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices invert")
    n = m.rows
    aug = Matrix(m.field, np.hstack([m.data, identity(m.field, n).data]))
    red = rref(aug)
    if red.rank < n or red.pivots[:n] != tuple(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(m.field, red.matrix.data[:, n:])


def mat_power(m: Matrix, e: int) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices take powers")
    base = m if e >= 0 else inverse(m)
    e = abs(e)
    result = identity(m.field, m.rows)
    acc = base
    while e > 0:
        if e & 1:
            result = mat_mul(result, acc)
        acc = mat_mul(acc, acc)
        e >>= 1
    return result


def solve_row(m: Matrix, v) -> np.ndarray | None:
    """Solve x m = v for a row vector x, or None if v is outside the row space.

    Free coordinates are fixed to zero, so the solution is deterministic.
    """
    f = m.field
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (m.cols,):
        raise ValueError("shape mismatch")
    aug = Matrix(f, np.hstack([m.data.T, v[:, None]]))
    red = rref(aug)
    x = np.zeros(m.rows, dtype=np.int64)
    for j, pc in enumerate(red.pivots):
        if pc == m.rows:
            return None
        x[pc] = red.matrix.data[j, m.rows]
    if not np.array_equal(vec_mat(x, m), v):
        return None
    return x


def companion_matrix(field: Field, poly: Sequence[int]) -> Matrix:
    """Companion matrix of a monic primitive polynomial.

    Ones on the superdiagonal, negated coefficients in the last row; its
    multiplicative order is q^n - 1, which is what makes the power orbit
    sweep the whole nonzero ensemble index range.
    """
    poly = tuple(int(c) for c in poly)
    n = len(poly) - 1
    if n < 1 or poly[-1] != 1:
        raise ValueError("polynomial must be monic of degree at least 1")
    if not poly_is_primitive(field, poly):
        raise ValueError(f"{poly} is not primitive over {field}")
    data = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        data[i, i + 1] = 1
    for j in range(n):
        data[n - 1, j] = field.neg(poly[j])
    return Matrix(field, data)


def matrix_order(m: Matrix, limit: int | None = None) -> int:
    """Multiplicative order of m, by iteration up to `limit` steps."""
    if m.rows != m.cols:
        raise ValueError("only square matrices have an order")
    if limit is None:
        limit = m.field.order ** m.rows - 1
    ident = identity(m.field, m.rows)
    acc = m
    for j in range(1, limit + 1):
        if acc == ident:
            return j
        acc = mat_mul(acc, m)
    raise ValueError(f"order exceeds {limit}")
