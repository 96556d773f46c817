"""Generalized Reed-Solomon outer codes and their bounded-distance decoder.

A code here is the image of polynomials of degree < K evaluated at distinct
points and scaled per coordinate.  The dual is again such a code at the same
points, with multipliers from the classic interpolation identity, so outer
pairs whose duals cross-contain come out exactly, not just up to rref.
Decoding is syndrome Berlekamp-Massey out to half the design distance and
reports failure as None rather than guessing.  Small outer codes that are
not polynomial go through an exhaustive coset-leader table instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .codes import (ConjugatePair, LinearCode, coset_leader_table, make_pair,
                    syndrome)
from .errors import ConfigError
from .field import Field
from .linalg import Matrix, mat_vec, solve_row, vec, vec_mat


class GrsCode:
    """Scaled polynomial-evaluation code of dimension K at distinct points."""

    def __init__(self, field: Field, points, multipliers, dim: int):
        points = tuple(int(a) for a in points)
        multipliers = tuple(int(v) for v in multipliers)
        if len(set(points)) != len(points):
            raise ConfigError("evaluation points must be distinct")
        if len(multipliers) != len(points):
            raise ConfigError("one multiplier per point")
        if any(v == 0 for v in multipliers):
            raise ConfigError("multipliers must be nonzero")
        if not 0 <= dim <= len(points):
            raise ConfigError(f"dimension {dim} outside 0..{len(points)}")
        self.field = field
        self.points = points
        self.multipliers = multipliers
        self.dim = dim

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def radius(self) -> int:
        """Guaranteed correction radius, half the design distance."""
        return (self.length - self.dim) // 2

    @cached_property
    def gen(self) -> Matrix:
        f = self.field
        rows = np.zeros((self.dim, self.length), dtype=np.int64)
        for j, (a, v) in enumerate(zip(self.points, self.multipliers)):
            if self.dim:
                rows[0, j] = v
            for l in range(1, self.dim):
                rows[l, j] = f.mul(int(rows[l - 1, j]), a)
        return Matrix(f, rows)

    @cached_property
    def linear(self) -> LinearCode:
        return LinearCode.from_rows(self.field, self.gen)

    @cached_property
    def _dual_multipliers(self) -> tuple[int, ...]:
        f = self.field
        out = []
        for i, a in enumerate(self.points):
            prod = self.multipliers[i]
            for j, b in enumerate(self.points):
                if j != i:
                    prod = f.mul(prod, f.sub(a, b))
            out.append(f.inv(prod))
        return tuple(out)

    @cached_property
    def _parity(self) -> Matrix:
        """Generator of the dual, rows u_j a_j^l for l < N - K."""
        f = self.field
        redundancy = self.length - self.dim
        rows = np.zeros((redundancy, self.length), dtype=np.int64)
        for j, (a, u) in enumerate(zip(self.points, self._dual_multipliers)):
            if redundancy:
                rows[0, j] = u
            for l in range(1, redundancy):
                rows[l, j] = f.mul(int(rows[l - 1, j]), a)
        return Matrix(f, rows)

    def encode(self, message) -> np.ndarray:
        m = vec(self.field, message)
        if m.shape[0] != self.dim:
            raise ConfigError(f"message length {m.shape[0]}, expected {self.dim}")
        return vec_mat(m, self.gen)

    def decode(self, word) -> np.ndarray | None:
        """Nearest codeword within the correction radius, or None.

        Syndrome Berlekamp-Massey: locator from the N - K syndromes, error
        positions by scanning the point inverses, magnitudes by one small
        linear solve, then a full syndrome recheck before accepting.
        """
        f = self.field
        y = vec(f, word)
        if y.shape[0] != self.length:
            raise ConfigError(f"word length {y.shape[0]}, expected {self.length}")
        if any(a == 0 for a in self.points):
            raise ConfigError("decoding needs nonzero evaluation points")
        if self._parity.rows == 0:
            return y.copy()
        synd = mat_vec(self._parity, y)
        if not synd.any():
            return y.copy()
        if self.radius == 0:
            return None
        locator, nerr = _berlekamp_massey(f, [int(s) for s in synd])
        if nerr > self.radius:
            return None
        if len(locator) - 1 != nerr or locator[-1] == 0:
            return None
        positions = [j for j, a in enumerate(self.points)
                     if _poly_eval(f, locator, f.inv(a)) == 0]
        if len(positions) != nerr:
            return None
        vand = np.zeros((nerr, nerr), dtype=np.int64)
        for r, j in enumerate(positions):
            vand[r, 0] = 1
            for l in range(1, nerr):
                vand[r, l] = f.mul(int(vand[r, l - 1]), self.points[j])
        eta = solve_row(Matrix(f, vand), synd[:nerr])
        if eta is None or any(int(x) == 0 for x in eta):
            return None
        err = np.zeros(self.length, dtype=np.int64)
        for r, j in enumerate(positions):
            err[j] = f.div(int(eta[r]), self._dual_multipliers[j])
        cand = f.sub_arrays(y, err)
        if mat_vec(self._parity, cand).any():
            return None
        return cand

    def __repr__(self):
        return (f"GrsCode(n={self.length}, k={self.dim}, "
                f"q={self.field.order})")


def _poly_eval(f: Field, coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _berlekamp_massey(f: Field, synd: list[int]) -> tuple[list[int], int]:
    """Shortest LFSR (connection polynomial, degree) generating `synd`."""
    cur = [1]
    prev = [1]
    length = 0
    gap = 1
    prev_disc = 1
    for i, s in enumerate(synd):
        disc = s
        for j in range(1, length + 1):
            if j < len(cur):
                disc = f.add(disc, f.mul(cur[j], synd[i - j]))
        if disc == 0:
            gap += 1
            continue
        coef = f.div(disc, prev_disc)
        shifted_len = len(prev) + gap
        update = cur + [0] * max(0, shifted_len - len(cur))
        for j, p in enumerate(prev):
            update[j + gap] = f.sub(update[j + gap], f.mul(coef, p))
        if 2 * length <= i:
            prev = cur
            prev_disc = disc
            length = i + 1 - length
            gap = 1
        else:
            gap += 1
        cur = update
    while len(cur) > 1 and cur[-1] == 0:
        cur.pop()
    return cur, length


def grs_dual(code: GrsCode) -> GrsCode:
    """Dual as another code of the same family at the same points.

    A full code maps to the zero code (dimension 0) and back."""
    return GrsCode(code.field, code.points, code._dual_multipliers,
                   code.length - code.dim)


class TableCode:
    """Small linear code decoded by an exhaustive coset-leader table."""

    def __init__(self, code: LinearCode, criterion: str = "entropy"):
        self.linear = code
        self.criterion = criterion

    @property
    def field(self) -> Field:
        return self.linear.field

    @property
    def length(self) -> int:
        return self.linear.n

    @property
    def dim(self) -> int:
        return self.linear.k

    @cached_property
    def _table(self) -> dict:
        return coset_leader_table(self.linear, self.criterion)

    def encode(self, message) -> np.ndarray:
        return self.linear.encode(message)

    def decode(self, word) -> np.ndarray:
        """Subtract the chosen leader of the word's coset; never fails."""
        f = self.field
        y = vec(f, word)
        return f.sub_arrays(y, self._table[syndrome(self.linear, y)])

    def __repr__(self):
        return (f"TableCode(n={self.length}, k={self.dim}, "
                f"q={self.field.order}, {self.criterion})")


@dataclass(frozen=True)
class OuterPair:
    """Two outer codes whose duals cross-contain, with their decoders."""
    code1: object
    code2: object
    pair: ConjugatePair

    @property
    def length(self) -> int:
        return self.pair.n

    @property
    def net_dimension(self) -> int:
        return self.pair.net_dimension


def outer_pair(code1, code2) -> OuterPair:
    return OuterPair(code1, code2, make_pair(code1.linear, code2.linear))


def rs_pair(field: Field, length: int, dim1: int, dim2: int) -> OuterPair:
    """Plain polynomial-evaluation pair at the powers of the field generator.

    The first code is the unscaled code of dimension dim1; the second is the
    exact dual of the unscaled code of dimension length - dim2, so the
    cross-containment holds with equality of families, given
    dim1 + dim2 >= length.
    """
    if length > field.order - 1:
        raise ConfigError(
            f"length {length} exceeds the {field.order - 1} nonzero points")
    if dim1 + dim2 < length:
        raise ConfigError(f"need dim1 + dim2 >= length, got {dim1} + {dim2}")
    # successive generator powers; index j + 1 is g^j in the wire encoding
    points = tuple(field.from_power_index(j + 1) for j in range(length))
    ones = (1,) * length
    code1 = GrsCode(field, points, ones, dim1)
    inner_dual = GrsCode(field, points, ones, length - dim2)
    code2 = grs_dual(inner_dual)
    return outer_pair(code1, code2)
