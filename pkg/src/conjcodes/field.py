"""Small finite fields with exact table-driven arithmetic.

A Field object represents GF(s^d) over a subfield of order s, where the
subfield is either the integers mod p or another Field.  Towers built this
way cover everything the package needs: an inner alphabet GF(q), q = p^m,
and the outer alphabet GF(q^k) as a relative extension carrying a trace map
down to GF(q) together with trace-dual bases.

Elements are plain Python ints in [0, order).  The int packs the coefficient
vector of the residue polynomial in base s, least significant digit first,
so an element of GF(q^k) reads as a k-digit base-q string of GF(q) elements.
Zero is 0 and one is 1 at every level, and a subfield element keeps its
packed value when embedded upward.

Multiplication, inversion and powers run on log/antilog tables built once at
construction; addition is carry-free digit arithmetic (plain XOR in
characteristic 2).  Fields are capped at MAX_FIELD_ORDER elements, the
regime where eager table construction and exhaustive checks stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .budgets import MAX_FIELD_ORDER
from .errors import VerificationError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over a field, as tuples of packed coefficients, constant first
# ---------------------------------------------------------------------------

def _poly_trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    last = len(coeffs)
    while last > 0 and coeffs[last - 1] == 0:
        last -= 1
    return tuple(coeffs[:last])


def poly_mul(base: "Field", a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] = base.add(out[i + j], base.mul(ca, cb))
    return _poly_trim(out)


def poly_divmod(base: "Field", num: Sequence[int], den: Sequence[int]):
    den = _poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    quo = [0] * max(len(rem) - len(den) + 1, 0)
    inv_lead = base.inv(den[-1])
    for shift in range(len(rem) - len(den), -1, -1):
        coef = rem[shift + len(den) - 1]
        if coef == 0:
            continue
        factor = base.mul(coef, inv_lead)
        quo[shift] = factor
        for i, dc in enumerate(den):
            rem[shift + i] = base.sub(rem[shift + i], base.mul(factor, dc))
    return _poly_trim(quo), _poly_trim(rem)


def poly_mod(base: "Field", num: Sequence[int], den: Sequence[int]) -> tuple[int, ...]:
    return poly_divmod(base, num, den)[1]


def poly_pow_mod(base: "Field", poly: Sequence[int], e: int, mod: Sequence[int]) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    acc = poly_mod(base, poly, mod)
    while e > 0:
        if e & 1:
            result = poly_mod(base, poly_mul(base, result, acc), mod)
        acc = poly_mod(base, poly_mul(base, acc, acc), mod)
        e >>= 1
    return result


def _monic_candidates(base: "Field", degree: int) -> Iterable[tuple[int, ...]]:
    # ascending packed order of the non-leading coefficients fixes the
    # enumeration, so "lowest" is well defined
    for packed in range(base.order ** degree):
        coeffs = []
        x = packed
        for _ in range(degree):
            coeffs.append(x % base.order)
            x //= base.order
        coeffs.append(1)
        yield tuple(coeffs)


def poly_is_irreducible(base: "Field", poly: Sequence[int]) -> bool:
    """Exhaustive trial division by every lower-degree monic polynomial."""
    poly = _poly_trim(poly)
    degree = len(poly) - 1
    if degree < 1:
        return False
    if degree == 1:
        return True
    for d in range(1, degree // 2 + 1):
        for div in _monic_candidates(base, d):
            if not poly_mod(base, poly, div):
                return False
    return True


def poly_is_primitive(base: "Field", poly: Sequence[int]) -> bool:
    """Irreducible with a root generating the full multiplicative group."""
    poly = _poly_trim(poly)
    if not poly_is_irreducible(base, poly):
        return False
    degree = len(poly) - 1
    group = base.order ** degree - 1
    x = (0, 1)
    if poly_pow_mod(base, x, group, poly) != (1,):
        return False
    for ell in _prime_factors(group):
        if poly_pow_mod(base, x, group // ell, poly) == (1,):
            return False
    return True


def lowest_irreducible(base: "Field", degree: int) -> tuple[int, ...]:
    """First irreducible monic polynomial of the given degree, in packed order."""
    for cand in _monic_candidates(base, degree):
        if poly_is_irreducible(base, cand):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {degree} found")


def lowest_primitive(base: "Field", degree: int) -> tuple[int, ...]:
    """First primitive monic polynomial of the given degree, in packed order."""
    for cand in _monic_candidates(base, degree):
        if poly_is_primitive(base, cand):
            return cand
    raise ValueError(f"no primitive polynomial of degree {degree} found")


# ---------------------------------------------------------------------------
# the field itself
# ---------------------------------------------------------------------------

class Field:
    """GF(s^degree) over a subfield of order s.

    Construct with Field.prime(p), Field.extension(base, degree) or the
    field_create(p, m) convenience.  Instances are immutable once built and
    compared by identity; build each field once and pass it around.
    """

    __slots__ = ("char", "base", "degree", "order", "modulus", "generator",
                 "_exp", "_log")

    def __init__(self) -> None:
        raise TypeError("use Field.prime, Field.extension or field_create")

    # -- construction -----------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> "Field":
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p > MAX_FIELD_ORDER:
            raise ValueError(f"field order {p} above desk-scale cap {MAX_FIELD_ORDER}")
        self = object.__new__(cls)
        self.char = p
        self.base = None
        self.degree = 1
        self.order = p
        self.modulus = (0, 1)
        self._init_tables()
        return self

    @classmethod
    def extension(cls, base: "Field", degree: int,
                  modulus: Sequence[int] | None = None) -> "Field":
        if degree < 1:
            raise ValueError("extension degree must be at least 1")
        order = base.order ** degree
        if order > MAX_FIELD_ORDER:
            raise ValueError(f"field order {order} above desk-scale cap {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = lowest_irreducible(base, degree)
        else:
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != degree + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of the extension degree")
            if any(not 0 <= c < base.order for c in modulus):
                raise ValueError("modulus coefficients must be base field elements")
            if not poly_is_irreducible(base, modulus):
                raise ValueError(f"modulus {modulus} is reducible over {base}")
        self = object.__new__(cls)
        self.char = base.char
        self.base = base
        self.degree = degree
        self.order = order
        self.modulus = tuple(modulus)
        self._init_tables()
        return self

    def _mul_raw(self, a: int, b: int) -> int:
        # table-free product, used only while building the tables
        if self.base is None:
            return (a * b) % self.order
        base = self.base
        s = base.order
        da = self.coeffs(a)
        db = self.coeffs(b)
        prod = [0] * (2 * self.degree - 1)
        for i, ca in enumerate(da):
            if ca == 0:
                continue
            for j, cb in enumerate(db):
                if cb:
                    prod[i + j] = base.add(prod[i + j], base.mul(ca, cb))
        for t in range(len(prod) - 1, self.degree - 1, -1):
            c = prod[t]
            if c == 0:
                continue
            prod[t] = 0
            for i in range(self.degree):
                prod[t - self.degree + i] = base.sub(
                    prod[t - self.degree + i], base.mul(c, self.modulus[i]))
        out = 0
        shift = 1
        for c in prod[: self.degree]:
            out += c * shift
            shift *= s
        return out

    def _pow_raw(self, a: int, e: int) -> int:
        result = 1
        acc = a
        while e > 0:
            if e & 1:
                result = self._mul_raw(result, acc)
            acc = self._mul_raw(acc, acc)
            e >>= 1
        return result

    def _init_tables(self) -> None:
        group = self.order - 1
        factors = _prime_factors(group)
        generator = None
        for cand in range(1, self.order):
            if self._pow_raw(cand, group) != 1:
                continue
            if all(self._pow_raw(cand, group // ell) != 1 for ell in factors):
                generator = cand
                break
        if generator is None:
            raise VerificationError(f"no generator found for order {self.order}")
        self.generator = generator
        exp = np.zeros(2 * group if group else 2, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        val = 1
        for i in range(group):
            exp[i] = val
            log[val] = i
            val = self._mul_raw(val, generator)
        if val != 1:
            raise VerificationError("generator order mismatch while building tables")
        exp[group: 2 * group] = exp[:group]
        if group == 0:
            exp[:] = 1
            log[1] = 0
        self._exp = exp
        self._log = log

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        if self.base is None:
            return (a + b) % self.order
        s = self.base.order
        out = 0
        shift = 1
        for _ in range(self.degree):
            out += self.base.add(a % s, b % s) * shift
            a //= s
            b //= s
            shift *= s
        return out

    def neg(self, a: int) -> int:
        if self.char == 2:
            return a
        if self.base is None:
            return (-a) % self.order
        s = self.base.order
        out = 0
        shift = 1
        for _ in range(self.degree):
            out += self.base.neg(a % s) * shift
            a //= s
            shift *= s
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.order == 2:
            return 1
        return int(self._exp[self.order - 1 - self._log[a]])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        group = self.order - 1
        if group == 0:
            return 1
        return int(self._exp[(int(self._log[a]) * e) % group])

    # -- vectorized arithmetic on int64 ndarrays ---------------------------

    def add_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.char == 2:
            return np.bitwise_xor(a, b)
        if self.base is None:
            return (a + b) % self.order
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        aa = a.copy()
        bb = b.copy()
        s = self.base.order
        shift = 1
        for _ in range(self.degree):
            out += self.base.add_arrays(aa % s, bb % s) * shift
            aa //= s
            bb //= s
            shift *= s
        return out

    def neg_arrays(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.char == 2:
            return a.copy()
        if self.base is None:
            return (-a) % self.order
        out = np.zeros(a.shape, dtype=np.int64)
        aa = a.copy()
        s = self.base.order
        shift = 1
        for _ in range(self.degree):
            out += self.base.neg_arrays(aa % s) * shift
            aa //= s
            shift *= s
        return out

    def sub_arrays(self, a, b) -> np.ndarray:
        return self.add_arrays(a, self.neg_arrays(b))

    def mul_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        if np.any(nz):
            out[nz] = self._exp[self._log[a[nz]] + self._log[b[nz]]]
        return out

    def sum_arrays(self, arr, axis: int = 0) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64)
        if self.char == 2:
            return np.bitwise_xor.reduce(arr, axis=axis)
        if self.base is None:
            return arr.sum(axis=axis) % self.order
        moved = np.moveaxis(arr, axis, 0)
        out = np.zeros(moved.shape[1:], dtype=np.int64)
        for slab in moved:
            out = self.add_arrays(out, slab)
        return out

    # -- structure ---------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector over the subfield, constant digit first."""
        s = self.base.order if self.base is not None else self.order
        out = []
        for _ in range(self.degree):
            out.append(a % s)
            a //= s
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        s = self.base.order if self.base is not None else self.order
        if len(coeffs) != self.degree:
            raise ValueError(f"expected {self.degree} coefficients")
        out = 0
        shift = 1
        for c in coeffs:
            if not 0 <= c < s:
                raise ValueError(f"coefficient {c} outside the subfield")
            out += c * shift
            shift *= s
        return out

    def trace(self, a: int) -> int:
        """Relative trace down to the subfield: sum of a^(s^i), i < degree."""
        if self.base is None:
            return a
        s = self.base.order
        term = a
        total = a
        for _ in range(self.degree - 1):
            term = self.pow(term, s)
            total = self.add(total, term)
        if total >= s:
            raise VerificationError(f"trace of {a} landed outside the subfield")
        return total

    def elements(self) -> range:
        return range(self.order)

    def to_power_index(self, a: int) -> int:
        """Wire encoding of an element: 0 for zero, 1 + log_g(a) otherwise."""
        if a == 0:
            return 0
        return int(self._log[a]) + 1

    def from_power_index(self, idx: int) -> int:
        if idx == 0:
            return 0
        group = max(self.order - 1, 1)
        if not 1 <= idx <= group:
            raise ValueError(f"power index {idx} out of range for {self}")
        return int(self._exp[idx - 1])

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.order})"
        return f"GF({self.order})/GF({self.base.order})"


def field_create(p: int, m: int) -> Field:
    """GF(p^m) with the lowest irreducible modulus in packed order."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if m == 1:
        return Field.prime(p)
    return Field.extension(Field.prime(p), m)


# ---------------------------------------------------------------------------
# trace-dual bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualBasisPair:
    """A basis of an extension and its trace-dual, Tr(b_i d_j) = delta_ij."""
    field: Field
    basis: tuple[int, ...]
    dual: tuple[int, ...]


def polynomial_basis(field: Field) -> tuple[int, ...]:
    """The residue classes of 1, x, ..., x^(degree-1), as packed ints."""
    s = field.base.order if field.base is not None else field.order
    return tuple(s ** i for i in range(field.degree))


def dual_basis(field: Field, basis: Sequence[int] | None = None) -> DualBasisPair:
    """Trace-dual basis of an extension, solved from the Gram matrix.

    The Gram matrix Tr(b_i b_j) lives in the subfield; it is invertible
    exactly when `basis` really is a basis, so the inversion doubles as the
    independence check.
    """
    if basis is None:
        basis = polynomial_basis(field)
    basis = tuple(int(b) for b in basis)
    k = field.degree
    if len(basis) != k:
        raise ValueError(f"need {k} basis elements, got {len(basis)}")
    gram = [[field.trace(field.mul(bi, bj)) for bj in basis] for bi in basis]

    # Gauss-Jordan over the field; subfield entries stay in the subfield
    aug = [row[:] + [1 if i == j else 0 for j in range(k)]
           for i, row in enumerate(gram)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("elements are linearly dependent, not a basis")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = field.inv(aug[col][col])
        aug[col] = [field.mul(scale, v) for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = field.neg(aug[r][col])
                aug[r] = [field.add(aug[r][i], field.mul(f, aug[col][i]))
                          for i in range(2 * k)]
    inv = [row[k:] for row in aug]

    dual = []
    for j in range(k):
        acc = 0
        for i in range(k):
            acc = field.add(acc, field.mul(inv[i][j], basis[i]))
        dual.append(acc)
    dual = tuple(dual)

    for i in range(k):
        for j in range(k):
            want = 1 if i == j else 0
            if field.trace(field.mul(basis[i], dual[j])) != want:
                raise VerificationError("dual basis failed the Kronecker check")
    return DualBasisPair(field, basis, dual)
