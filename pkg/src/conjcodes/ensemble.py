"""Balanced code-pair families from powers of a primitive companion matrix.

With T the companion matrix of a degree-n primitive polynomial over F_q, the
rows of T^i and the rows of (T^-i)^t form dual bases for every i.  Member i
of the family takes the first k1 rows of T^i as one generator and the last
k2 rows of (T^-i)^t as the other; the cross duals then fall out in closed
form, every member is a conjugate pair, and each nonzero word of F_q^n lies
in the same number of member codes on each side.  The sieve below discards
the few members whose per-type codeword counts stray too far above the
family average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .budgets import check_budget
from .codes import ConjugatePair, LinearCode, Spectrum, make_pair, spectrum
from .errors import ConfigError, VerificationError
from .field import Field, lowest_primitive
from .infotheory import type_class_size, type_count
from .linalg import Matrix, companion_matrix, identity, inverse, mat_mul


class BalancedEnsemble:
    """The q^n - 1 conjugate pairs cut from powers of one companion matrix."""

    def __init__(self, field: Field, n: int, k1: int, k2: int,
                 modulus=None):
        if not (0 < k1 <= n and 0 < k2 <= n):
            raise ConfigError("side dimensions must lie in 1..n")
        if k1 + k2 < n:
            raise ConfigError(f"need k1 + k2 >= n, got {k1} + {k2} < {n}")
        if modulus is None:
            modulus = lowest_primitive(field, n)
        self.field = field
        self.n = n
        self.k1 = k1
        self.k2 = k2
        self.modulus = tuple(int(c) for c in modulus)
        self.step = companion_matrix(field, self.modulus)
        self.costep = inverse(self.step).transpose()
        self._powers = [self.step]         # _powers[i] = T^(i+1)
        self._copowers = [self.costep]

    @property
    def size(self) -> int:
        return self.field.order ** self.n - 1

    def _index(self, i: int) -> int:
        return i % self.size

    def power(self, i: int) -> Matrix:
        """T^i, built incrementally and cached."""
        i = self._index(i)
        if i == 0:
            return identity(self.field, self.n)
        while len(self._powers) < i:
            self._powers.append(mat_mul(self._powers[-1], self.step))
        return self._powers[i - 1]

    def copower(self, i: int) -> Matrix:
        """(T^-i)^t, the dual-basis mate of power(i)."""
        i = self._index(i)
        if i == 0:
            return identity(self.field, self.n)
        while len(self._copowers) < i:
            self._copowers.append(mat_mul(self._copowers[-1], self.costep))
        return self._copowers[i - 1]

    def code1(self, i: int) -> LinearCode:
        return LinearCode.from_rows(self.field, Matrix(
            self.field, self.power(i).data[:self.k1]))

    def code2(self, i: int) -> LinearCode:
        return LinearCode.from_rows(self.field, Matrix(
            self.field, self.copower(i).data[self.n - self.k2:]))

    def dual1(self, i: int) -> LinearCode:
        """dual of code1(i), read off the dual basis: last rows of copower."""
        return LinearCode.from_rows(self.field, Matrix(
            self.field, self.copower(i).data[self.k1:]))

    def dual2(self, i: int) -> LinearCode:
        """dual of code2(i): first rows of power."""
        return LinearCode.from_rows(self.field, Matrix(
            self.field, self.power(i).data[:self.n - self.k2]))

    def pair(self, i: int) -> ConjugatePair:
        return make_pair(self.code1(i), self.code2(i))

    def __repr__(self):
        return (f"BalancedEnsemble(q={self.field.order}, n={self.n}, "
                f"k1={self.k1}, k2={self.k2})")


def verify_balanced(ens: BalancedEnsemble) -> tuple[int, int]:
    """Count each word's memberships across the family, both sides.

    Returns the common per-word counts (q^k1 - 1, q^k2 - 1), raising if any
    nonzero word's count deviates on either side.
    """
    q = ens.field.order
    n = ens.n
    size = ens.size
    check_budget(size * q ** max(ens.k1, ens.k2),
                 f"balance verification for q={q}, n={n}")
    pack = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    out = []
    for side, k in ((1, ens.k1), (2, ens.k2)):
        counts = np.zeros(q ** n, dtype=np.int64)
        for i in range(size):
            rows = (ens.power(i).data[:k] if side == 1
                    else ens.copower(i).data[n - ens.k2:])
            code = LinearCode.from_rows(ens.field, Matrix(ens.field, rows))
            idx = code.codewords() @ pack
            np.add.at(counts, idx, 1)
        expected = q ** k - 1
        if counts[0] != size:
            raise VerificationError(
                f"side {side}: zero word in {counts[0]} of {size} members")
        off = np.nonzero(counts[1:] != expected)[0]
        if off.size:
            raise VerificationError(
                f"side {side}: word index {int(off[0]) + 1} lies in "
                f"{int(counts[off[0] + 1])} members, expected {expected}")
        out.append(expected)
    return tuple(out)


def is_spectrum_good(spec: Spectrum, dim: int, epsilon: float) -> bool:
    """Per-type count test against q^(epsilon n) times the family average.

    Good means every type Q has at most (|types| - 1) q^(dim - n + epsilon n)
    |T_Q| nonzero codewords.  Counts and type-class sizes are exact integers;
    only the q^(epsilon n) amplification is floating point.
    """
    if epsilon < 0:
        raise ConfigError("epsilon must be nonnegative")
    n, q = spec.n, spec.q
    amp = q ** (epsilon * n)
    base = type_count(n, q) - 1
    for td, c in spec.counts:
        if td.counts[0] == n:
            c -= 1              # the zero word is exempt
        if c == 0:
            continue
        lhs = c * q ** (n - dim)
        rhs = base * type_class_size(td)
        if lhs > rhs * amp:
            return False
    return True


def meets_average_bound(spec: Spectrum, dim: int, factor: int = 2) -> bool:
    """Exact integer test: every type's nonzero count is at most `factor`
    times (|types| - 1) q^(dim - n) |T_Q|."""
    n, q = spec.n, spec.q
    base = type_count(n, q) - 1
    for td, c in spec.counts:
        if td.counts[0] == n:
            c -= 1
        if c == 0:
            continue
        if c * q ** (n - dim) > factor * base * type_class_size(td):
            return False
    return True


@dataclass(frozen=True)
class SieveReport:
    """Outcome of sieving a family at a given tolerance."""
    n: int
    k1: int
    k2: int
    epsilon: float
    z: int                       # claimed cap on bad members per side
    good_indices: tuple[int, ...]
    bad_count_1: int
    bad_count_2: int


def sieve(ens: BalancedEnsemble, epsilon: float) -> SieveReport:
    """Test every member's two spectra; report survivors and bad counts.

    z = floor((q^n - 1) q^(-epsilon n)) is the counting cap each side's bad
    total is expected to respect; the report carries the observed counts so
    callers can check.
    """
    q = ens.field.order
    n = ens.n
    check_budget(ens.size * q ** max(ens.k1, ens.k2),
                 f"sieve for q={q}, n={n}")
    z = int(ens.size * q ** (-epsilon * n))
    good = []
    bad1 = bad2 = 0
    for i in range(ens.size):
        ok1 = is_spectrum_good(spectrum(ens.code1(i)), ens.k1, epsilon)
        ok2 = is_spectrum_good(spectrum(ens.code2(i)), ens.k2, epsilon)
        bad1 += not ok1
        bad2 += not ok2
        if ok1 and ok2:
            good.append(i)
    return SieveReport(n, ens.k1, ens.k2, epsilon, z, tuple(good), bad1, bad2)


def find_doubly_good_pair(ens: BalancedEnsemble, factor: int = 2) -> int:
    """Smallest index whose two spectra both meet the exact `factor` times
    average bound.  At factor 2 the counting argument guarantees existence:
    each side can exceed the bound in fewer than half the members."""
    check_budget(ens.size * ens.field.order ** max(ens.k1, ens.k2),
                 f"double-goodness scan for q={ens.field.order}, n={ens.n}")
    for i in range(ens.size):
        if (meets_average_bound(spectrum(ens.code1(i)), ens.k1, factor)
                and meets_average_bound(spectrum(ens.code2(i)), ens.k2, factor)):
            return i
    raise VerificationError(
        f"no member meets the {factor}x average bound on both sides")
