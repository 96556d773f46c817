"""Concatenation of inner conjugate pairs with an outer pair, dual-exactly.

Each outer coordinate gets its own inner family member.  Within block j the
middle rows of T^i and of (T^-i)^t (the rows shared by both inner codes)
carry the outer symbol: one side writes its coordinates over a basis of the
symbol field onto the T rows, the other side uses the trace-dual basis on
the mate rows, so the dot product of two embedded blocks is exactly the
trace of the product of their symbols.  The remaining rows add the inner
dual freedom per block.  Both concatenated codes and both parity checks are
assembled from the same row inventory, which makes the duality identities
checkable by rref rather than only up to dimension counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .codes import ConjugatePair, LinearCode, dual, make_pair
from .ensemble import BalancedEnsemble
from .errors import ConfigError, VerificationError
from .field import Field, dual_basis
from .linalg import Matrix, dot, vec, vec_mat
from .rs import OuterPair


class InnerMaps:
    """One family member's symbol embeddings and dual-freedom generators."""

    def __init__(self, ext: Field, index: int, u: Matrix, v: Matrix,
                 c2perp_gen: Matrix, c1perp_gen: Matrix,
                 power_inv: Matrix, copower_inv: Matrix,
                 basis: tuple[int, ...], dual: tuple[int, ...],
                 code1: LinearCode, code2: LinearCode):
        self.ext = ext
        self.field = code1.field
        self.index = index
        self.u = u
        self.v = v
        self.c2perp_gen = c2perp_gen
        self.c1perp_gen = c1perp_gen
        self.power_inv = power_inv
        self.copower_inv = copower_inv
        self.basis = basis
        self.dual = dual
        self.code1 = code1
        self.code2 = code2

    @property
    def n(self) -> int:
        return self.u.cols

    @property
    def net(self) -> int:
        return self.u.rows

    @property
    def k1(self) -> int:
        return self.code1.k

    @property
    def k2(self) -> int:
        return self.code2.k

    def lift(self, c: int) -> int:
        """Base-field element as a symbol-field element."""
        return self.ext.from_coeffs((c,) + (0,) * (self.ext.degree - 1))

    def embed1(self, x: int) -> np.ndarray:
        """Symbol onto the T-side middle rows, coordinates over `basis`."""
        coords = np.array(self.ext.coeffs(x), dtype=np.int64)
        return vec_mat(coords, self.u)

    def embed2(self, y: int) -> np.ndarray:
        """Symbol onto the mate-side middle rows, coordinates over `dual`."""
        ext = self.ext
        coords = np.array([ext.trace(ext.mul(y, b)) for b in self.basis],
                          dtype=np.int64)
        return vec_mat(coords, self.v)

    def symbol1(self, word) -> int:
        """Outer symbol carried by a block of the first inner code."""
        z = vec_mat(vec(self.field, word), self.power_inv)
        if z[self.k1:].any():
            raise VerificationError("block is not in the first inner code")
        lo = self.n - self.k2
        return self.ext.from_coeffs(tuple(int(c) for c in z[lo:self.k1]))

    def symbol2(self, word) -> int:
        """Outer symbol carried by a block of the second inner code."""
        z = vec_mat(vec(self.field, word), self.copower_inv)
        lo = self.n - self.k2
        if z[:lo].any():
            raise VerificationError("block is not in the second inner code")
        ext = self.ext
        acc = 0
        for c, beta in zip(z[lo:self.k1], self.dual):
            acc = ext.add(acc, ext.mul(self.lift(int(c)), beta))
        return acc

    def __repr__(self):
        return (f"InnerMaps(index={self.index}, n={self.n}, "
                f"net={self.net}, ext_order={self.ext.order})")


def build_inner_maps(ens: BalancedEnsemble, index: int, ext: Field) -> InnerMaps:
    """Cut one member into embeddings, verifying both pairings on the spot."""
    net = ens.k1 + ens.k2 - ens.n
    if ext.base is not ens.field:
        raise ConfigError("symbol field must extend the ensemble field")
    if ext.degree != net:
        raise ConfigError(
            f"symbol field degree {ext.degree}, inner net dimension {net}")
    power = ens.power(index)
    copower = ens.copower(index)
    lo = ens.n - ens.k2
    u = Matrix(ens.field, power.data[lo:ens.k1])
    v = Matrix(ens.field, copower.data[lo:ens.k1])
    for a in range(net):
        for b in range(net):
            got = dot(ens.field, u.data[a], v.data[b])
            if got != (1 if a == b else 0):
                raise VerificationError(
                    f"member {index}: middle rows {a}, {b} pair to {got}")
    db = dual_basis(ext)
    return InnerMaps(
        ext=ext, index=index, u=u, v=v,
        c2perp_gen=Matrix(ens.field, power.data[:lo]),
        c1perp_gen=Matrix(ens.field, copower.data[ens.k1:]),
        power_inv=ens.power(-index),
        copower_inv=power.transpose(),
        basis=db.basis, dual=db.dual,
        code1=ens.code1(index), code2=ens.code2(index))


# ---------------------------------------------------------------------------
# row assembly
# ---------------------------------------------------------------------------

def _check_inners(inners, outer: OuterPair) -> None:
    if len(inners) != outer.length:
        raise ConfigError(
            f"{len(inners)} inner members for {outer.length} outer coordinates")
    first = inners[0]
    for im in inners:
        if im.ext is not first.ext:
            raise ConfigError("inner members disagree on the symbol field")
        if (im.n, im.k1, im.k2) != (first.n, first.k1, first.k2):
            raise ConfigError("inner members disagree on geometry")
    if outer.code1.field is not first.ext:
        raise ConfigError("outer codes must live over the symbol field")


def _embedded_span(inners, ecode: LinearCode, side: int) -> Matrix:
    """Rows spanning the blockwise embedding of ecode plus the per-block
    inner dual freedom, for the given side."""
    first = inners[0]
    ext = first.ext
    field = first.field
    n = first.n
    count = len(inners)
    rows = []
    for r in range(ecode.k):
        erow = ecode.gen.row(r)
        scalers = first.basis if side == 1 else first.dual
        for beta in scalers:
            block_rows = []
            for j, im in enumerate(inners):
                sym = ext.mul(beta, int(erow[j]))
                block_rows.append(im.embed1(sym) if side == 1
                                  else im.embed2(sym))
            rows.append(np.concatenate(block_rows))
    for j, im in enumerate(inners):
        free = im.c2perp_gen if side == 1 else im.c1perp_gen
        for r in range(free.rows):
            row = np.zeros(n * count, dtype=np.int64)
            row[j * n:(j + 1) * n] = free.data[r]
            rows.append(row)
    if not rows:
        # full-space degenerate case: nothing to embed, nothing free
        return Matrix(field, np.zeros((0, n * count), dtype=np.int64))
    return Matrix(field, np.stack(rows))


def generator_of_l1(inners, outer: OuterPair) -> Matrix:
    """Span of the first concatenated code: embedded first outer code plus
    blockwise dual of the second inner code."""
    return _embedded_span(inners, outer.code1.linear, side=1)


def generator_of_l2(inners, outer: OuterPair) -> Matrix:
    return _embedded_span(inners, outer.code2.linear, side=2)


def parity_check_of_l2(inners, outer: OuterPair) -> Matrix:
    """Span of the dual of the second concatenated code, assembled on the
    first side: embedded dual of the second outer code plus the same
    blockwise freedom as the first code."""
    return _embedded_span(inners, dual(outer.code2.linear), side=1)


def parity_check_of_l1(inners, outer: OuterPair) -> Matrix:
    return _embedded_span(inners, dual(outer.code1.linear), side=2)


@dataclass(frozen=True)
class ConcatenatedPair:
    """The two concatenated codes with their provenance."""
    inners: tuple[InnerMaps, ...]
    outer: OuterPair
    code1: LinearCode
    code2: LinearCode
    pair: ConjugatePair

    @property
    def block_length(self) -> int:
        return self.inners[0].n

    @property
    def block_count(self) -> int:
        return len(self.inners)

    @property
    def length(self) -> int:
        return self.block_length * self.block_count

    @property
    def inner_net(self) -> int:
        return self.inners[0].net

    @property
    def net_dimension(self) -> int:
        return self.code1.k + self.code2.k - self.length

    @property
    def overall_rate(self) -> Fraction:
        return Fraction(self.net_dimension, self.length)

    def blocks(self, word) -> list[np.ndarray]:
        w = vec(self.code1.field, word)
        n = self.block_length
        return [w[j * n:(j + 1) * n] for j in range(self.block_count)]

    def symbols1(self, word) -> np.ndarray:
        """Outer-symbol sequence of a word that is blockwise in code1."""
        return np.array([im.symbol1(b) for im, b in
                         zip(self.inners, self.blocks(word))], dtype=np.int64)

    def symbols2(self, word) -> np.ndarray:
        return np.array([im.symbol2(b) for im, b in
                         zip(self.inners, self.blocks(word))], dtype=np.int64)


def concatenate(inners, outer: OuterPair) -> ConcatenatedPair:
    """Build both codes, cross-checking every dimension against the formula
    inner_net x outer_net for the pair's net message length."""
    _check_inners(inners, outer)
    inners = tuple(inners)
    first = inners[0]
    field = first.field
    n, count = first.n, len(inners)
    l1 = LinearCode.from_rows(field, generator_of_l1(inners, outer))
    l2 = LinearCode.from_rows(field, generator_of_l2(inners, outer))
    want1 = first.net * outer.code1.dim + count * (n - first.k2)
    want2 = first.net * outer.code2.dim + count * (n - first.k1)
    if l1.k != want1:
        raise VerificationError(f"first code dimension {l1.k}, expected {want1}")
    if l2.k != want2:
        raise VerificationError(f"second code dimension {l2.k}, expected {want2}")
    pair = make_pair(l1, l2)
    cp = ConcatenatedPair(inners, outer, l1, l2, pair)
    if cp.net_dimension != first.net * outer.net_dimension:
        raise VerificationError(
            f"net dimension {cp.net_dimension} is not inner {first.net} "
            f"times outer {outer.net_dimension}")
    return cp


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

def duality_report(cp: ConcatenatedPair, sample_rng=None) -> tuple:
    """Named pass/fail results for every duality identity of the pair.

    Exhausts the symbol pairs of the trace identity when the symbol field is
    small, otherwise samples 64 pairs per block from `sample_rng`.
    """
    results = []
    ext = cp.inners[0].ext

    ok = True
    detail = ""
    for im in cp.inners:
        for a in range(im.net):
            for b in range(im.net):
                got = dot(im.field, im.u.data[a], im.v.data[b])
                if got != (1 if a == b else 0):
                    ok, detail = False, f"block {im.index}: rows {a},{b} -> {got}"
    results.append(("inner-block-pairing", ok, detail))

    ok = True
    detail = ""
    if ext.order ** 2 <= 1 << 12:
        pairs = [(x, y) for x in range(ext.order) for y in range(ext.order)]
    else:
        rng = sample_rng or np.random.default_rng(0)
        pairs = [(int(a), int(b)) for a, b in
                 rng.integers(0, ext.order, size=(64, 2))]
    for im in cp.inners:
        for x, y in pairs:
            lhs = dot(im.field, im.embed1(x), im.embed2(y))
            rhs = ext.trace(ext.mul(x, y))
            if lhs != rhs:
                ok, detail = False, f"block {im.index}: Tr({x}*{y}) mismatch"
                break
        if not ok:
            break
    results.append(("block-trace-pairing", ok, detail))

    d2 = dual(cp.outer.code2.linear)
    ok = all(cp.outer.code1.linear.contains(d2.gen.row(r))
             for r in range(d2.k))
    results.append(("outer-cross-containment", ok,
                    "" if ok else "dual of outer code2 escapes outer code1"))

    span1 = LinearCode.from_rows(cp.code1.field,
                                 parity_check_of_l1(cp.inners, cp.outer))
    ok = span1 == dual(cp.code1)
    results.append(("first-parity-spans-dual", ok,
                    "" if ok else f"rank {span1.k} vs {dual(cp.code1).k}"))

    span2 = LinearCode.from_rows(cp.code2.field,
                                 parity_check_of_l2(cp.inners, cp.outer))
    ok = span2 == dual(cp.code2)
    results.append(("second-parity-spans-dual", ok,
                    "" if ok else f"rank {span2.k} vs {dual(cp.code2).k}"))

    dl2 = dual(cp.code2)
    ok = all(cp.code1.contains(dl2.gen.row(r)) for r in range(dl2.k))
    results.append(("cross-containment", ok,
                    "" if ok else "dual of code2 escapes code1"))

    want = cp.inner_net * cp.outer.net_dimension
    ok = cp.net_dimension == want
    results.append(("net-dimension", ok,
                    "" if ok else f"{cp.net_dimension} != {want}"))
    return tuple(results)


def verify_duality(cp: ConcatenatedPair) -> None:
    """Raise on the first failed identity, naming it."""
    for name, ok, detail in duality_report(cp):
        if not ok:
            raise VerificationError(
                f"{name} failed" + (f": {detail}" if detail else ""))
