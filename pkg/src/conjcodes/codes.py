"""Linear codes over the field layer, in canonical generator form.

A code is held as the reduced row echelon form of its generator, so equal
codes compare and hash equal no matter how they were built.  On top of that
sit duals, conjugate pairs (pairs whose duals cross-contain), the quotient
construction used for coset transmission, and exhaustive per-type weight
spectra.  Everything that enumerates words is budget-checked.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .budgets import check_budget
from .errors import ConfigError
from .field import Field
from .infotheory import TypeDistribution
from .linalg import (Matrix, identity, kernel, mat_mul, mat_vec, rref,
                     solve_row, stack, vec, vec_mat)


class LinearCode:
    """[n, k] linear code, stored by its rref generator matrix."""

    __slots__ = ("field", "gen")

    def __init__(self, field: Field, gen: Matrix):
        if gen.field is not field:
            raise ConfigError("generator not over the stated field")
        self.field = field
        self.gen = gen

    @classmethod
    def from_rows(cls, field: Field, rows) -> "LinearCode":
        """Build from any spanning set; zero rows drop out in reduction."""
        m = rows if isinstance(rows, Matrix) else Matrix(field, rows)
        red = rref(m)
        return cls(field, Matrix(field, red.matrix.data[:red.rank]))

    @property
    def n(self) -> int:
        return self.gen.cols

    @property
    def k(self) -> int:
        return self.gen.rows

    def contains(self, word) -> bool:
        return solve_row(self.gen, vec(self.field, word)) is not None

    def size(self) -> int:
        return self.field.order ** self.k

    def messages(self) -> np.ndarray:
        """All q^k messages as rows, most significant symbol first."""
        q = self.field.order
        check_budget(q ** self.k, f"message enumeration for k={self.k}, q={q}")
        if self.k == 0:
            return np.zeros((1, 0), dtype=np.int64)
        idx = np.arange(q ** self.k, dtype=np.int64)
        cols = [(idx // q ** (self.k - 1 - j)) % q for j in range(self.k)]
        return np.stack(cols, axis=1)

    def codewords(self) -> np.ndarray:
        """All codewords as rows, in message order."""
        msgs = self.messages()
        if self.k == 0:
            return np.zeros((1, self.n), dtype=np.int64)
        return mat_mul(Matrix(self.field, msgs), self.gen).data

    def encode(self, message) -> np.ndarray:
        m = vec(self.field, message)
        if m.shape[0] != self.k:
            raise ConfigError(f"message length {m.shape[0]}, expected {self.k}")
        return vec_mat(m, self.gen)

    def __eq__(self, other):
        return (isinstance(other, LinearCode) and self.field is other.field
                and self.gen == other.gen)

    def __hash__(self):
        return hash((id(self.field), self.gen))

    def __repr__(self):
        return f"LinearCode(n={self.n}, k={self.k}, q={self.field.order})"


@functools.lru_cache(maxsize=None)
def dual(code: LinearCode) -> LinearCode:
    """Dual code under the standard bilinear form sum_i x_i y_i."""
    if code.k == 0:
        return LinearCode.from_rows(code.field, identity(code.field, code.n))
    return LinearCode.from_rows(code.field, kernel(code.gen))


def syndrome(code: LinearCode, word) -> tuple[int, ...]:
    """Word's inner products with the dual generator rows, as a tuple."""
    w = vec(code.field, word)
    h = dual(code).gen
    if h.rows == 0:
        return ()
    return tuple(int(x) for x in mat_vec(h, w))


def syndromes(code: LinearCode, words: np.ndarray) -> np.ndarray:
    """Row-wise syndromes of a word matrix."""
    h = dual(code).gen
    if h.rows == 0:
        return np.zeros((words.shape[0], 0), dtype=np.int64)
    return mat_mul(Matrix(code.field, words), h.transpose()).data


@dataclass(frozen=True)
class ConjugatePair:
    """Code pair whose duals cross-contain: dual(code2) <= code1.

    The condition is symmetric, dual(code1) <= code2 follows.  The net
    dimension k1 + k2 - n is the message length the pair carries jointly.
    """
    code1: LinearCode
    code2: LinearCode

    @property
    def n(self) -> int:
        return self.code1.n

    @property
    def net_dimension(self) -> int:
        return self.code1.k + self.code2.k - self.n


def make_pair(code1: LinearCode, code2: LinearCode) -> ConjugatePair:
    if code1.field is not code2.field or code1.n != code2.n:
        raise ConfigError("pair members must share field and length")
    d2 = dual(code2)
    for row in d2.gen.data:
        if not code1.contains(row):
            raise ConfigError("dual of the second code is not inside the first")
    if code1.k + code2.k < code1.n:
        raise ConfigError(
            f"dimensions {code1.k} + {code2.k} leave no message room at n={code1.n}")
    return ConjugatePair(code1, code2)


@dataclass(frozen=True)
class QuotientCode:
    """Coset representatives for code1 modulo dual(code2).

    `reps` rows extend an echelon basis of dual(code2) to one of code1,
    so each of the q^net messages labels a distinct coset.
    """
    pair: ConjugatePair
    reps: Matrix

    @property
    def net_dimension(self) -> int:
        return self.reps.rows

    @property
    def subcode(self) -> LinearCode:
        return dual(self.pair.code2)


def quotient(pair: ConjugatePair) -> QuotientCode:
    """Deterministic coset representatives: rref rows of code1 not absorbed
    by the echelon span of dual(code2)."""
    field = pair.code1.field
    sub = dual(pair.code2)
    span = [sub.gen.row(i) for i in range(sub.gen.rows)]
    reps = []

    def reduce_against(v):
        for b in span:
            piv = int(np.argmax(b != 0))
            if v[piv]:
                coef = field.div(int(v[piv]), int(b[piv]))
                v = field.sub_arrays(v, field.mul_arrays(np.int64(coef), b))
        return v

    for i in range(pair.code1.gen.rows):
        v = reduce_against(pair.code1.gen.row(i))
        if np.any(v):
            reps.append(v)
            span.append(v)
            span.sort(key=lambda b: int(np.argmax(b != 0)))
    if len(reps) != pair.net_dimension:
        raise ConfigError("representative count disagrees with net dimension")
    reps_rows = (np.stack(reps) if reps
                 else np.zeros((0, pair.n), dtype=np.int64))
    return QuotientCode(pair, Matrix(field, reps_rows))


def quotient_encode(qc: QuotientCode, message, sub_message=None) -> np.ndarray:
    """Word of the coset labeled by `message`; `sub_message` picks the
    member within the coset (zero word by default)."""
    field = qc.pair.code1.field
    m = vec(field, message)
    if m.shape[0] != qc.net_dimension:
        raise ConfigError(f"message length {m.shape[0]}, expected {qc.net_dimension}")
    word = (vec_mat(m, qc.reps) if qc.net_dimension
            else np.zeros(qc.pair.n, dtype=np.int64))
    if sub_message is not None:
        word = field.add_arrays(word, qc.subcode.encode(sub_message))
    return word


def coset_of(qc: QuotientCode, word) -> tuple[int, ...]:
    """Message labeling the coset of a word of code1."""
    field = qc.pair.code1.field
    w = vec(field, word)
    basis = stack([qc.reps, qc.subcode.gen])
    x = solve_row(basis, w)
    if x is None:
        raise ConfigError("word is not in the first code")
    return tuple(int(v) for v in x[:qc.net_dimension])


# ---------------------------------------------------------------------------
# spectra and exhaustive decoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Exhaustive per-type codeword counts of a code."""
    n: int
    q: int
    counts: tuple[tuple[TypeDistribution, int], ...]

    def count(self, td: TypeDistribution) -> int:
        for t, c in self.counts:
            if t == td:
                return c
        return 0

    def weights(self) -> tuple[int, ...]:
        """Hamming weight distribution, index = weight."""
        w = [0] * (self.n + 1)
        for td, c in self.counts:
            w[self.n - td.counts[0]] += c
        return tuple(w)

    def premise_factor(self, dim: int) -> float:
        """Smallest a with N_Q(C \\ 0) <= a q^(dim - n) |T_Q| for all types."""
        best = 0.0
        for td, c in self.counts:
            if td.counts[0] == self.n:
                c -= 1          # drop the zero word
            if c == 0:
                continue
            size = math.factorial(self.n)
            for cc in td.counts:
                size //= math.factorial(cc)
            best = max(best, c * self.q ** (self.n - dim) / size)
        return best


def spectrum(code: LinearCode) -> Spectrum:
    words = code.codewords()
    q = code.field.order
    m = words.shape[0]
    cnt = np.zeros((m, q), dtype=np.int64)
    np.add.at(cnt, (np.arange(m)[:, None], words), 1)
    uniq, mult = np.unique(cnt, axis=0, return_counts=True)
    pairs = tuple(
        (TypeDistribution(tuple(int(x) for x in row)), int(c))
        for row, c in sorted(zip(uniq.tolist(), mult.tolist())))
    return Spectrum(code.n, q, pairs)


def _entropy_key(word: np.ndarray, q: int) -> int:
    counts = np.bincount(word, minlength=q)
    prod = 1
    for c in counts:
        if c > 1:
            prod *= int(c) ** int(c)
    return -prod


def coset_leader_table(code: LinearCode, criterion: str = "weight") -> dict:
    """Map from syndrome tuple to its chosen coset leader.

    criterion "weight": minimum Hamming weight.  criterion "entropy":
    minimum empirical entropy, the maximum-likelihood choice for every
    additive channel whose law decreases away from a dominant symbol;
    realized exactly as the maximum of the integer product of c^c over
    symbol counts c.  Ties always break by weight then lexicographic
    word order.
    """
    if criterion not in ("weight", "entropy"):
        raise ConfigError(f"unknown criterion {criterion!r}")
    field = code.field
    q = field.order
    check_budget(q ** code.n, f"coset table for n={code.n}, q={q}")
    every = LinearCode(field, identity(field, code.n))
    words = every.messages()
    synd = syndromes(code, words)
    weights = (words != 0).sum(axis=1)
    table: dict[tuple[int, ...], np.ndarray] = {}
    best_key: dict[tuple[int, ...], tuple] = {}
    for i in range(words.shape[0]):
        s = tuple(int(x) for x in synd[i])
        w = words[i]
        key = (int(weights[i]), tuple(int(x) for x in w))
        if criterion == "entropy":
            key = (_entropy_key(w, q),) + key
        if s not in best_key or key < best_key[s]:
            best_key[s] = key
            table[s] = w.copy()
    return table


def nearest_codeword(code: LinearCode, word) -> np.ndarray:
    """Codeword at minimum Hamming distance; ties break lexicographically."""
    w = vec(code.field, word)
    cands = code.codewords()
    dists = (cands != w).sum(axis=1)
    best = np.nonzero(dists == dists.min())[0]
    rows = cands[best]
    pick = min(range(len(rows)), key=lambda i: tuple(int(x) for x in rows[i]))
    return rows[pick]
