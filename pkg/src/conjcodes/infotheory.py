"""Types, entropies and random-coding exponents over a q-ary alphabet.

Every entropy, divergence and exponent here is in base q, so rates and
exponents share the units of code rate for the alphabet at hand (bits only
when q = 2).  Empirical distributions of words are carried around as exact
integer count vectors; nothing in this module touches a field object, the
alphabet is just range(q).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .budgets import check_budget


@dataclass(frozen=True)
class TypeDistribution:
    """Empirical distribution of a length-n word, as symbol counts."""
    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts or any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative and nonempty")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def q(self) -> int:
        return len(self.counts)

    def probs(self) -> tuple[float, ...]:
        n = self.n
        if n == 0:
            raise ValueError("empty word has no distribution")
        return tuple(c / n for c in self.counts)


@dataclass(frozen=True)
class ChannelModel:
    """Additive-noise law on a q-ary alphabet, indexed by packed symbol."""
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) < 2:
            raise ValueError("alphabet needs at least two symbols")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.probs) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")

    @property
    def q(self) -> int:
        return len(self.probs)


def _probs_of(dist) -> tuple[np.ndarray, int]:
    if isinstance(dist, TypeDistribution):
        return np.array(dist.probs(), dtype=float), dist.q
    if isinstance(dist, ChannelModel):
        return np.array(dist.probs, dtype=float), dist.q
    arr = np.asarray(dist, dtype=float)
    return arr, arr.shape[0]


def type_of(word, q: int) -> TypeDistribution:
    """Empirical type of a word with symbols in range(q)."""
    arr = np.asarray(word, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise ValueError("symbols outside the alphabet")
    return TypeDistribution(tuple(int(c) for c in np.bincount(arr, minlength=q)))


def type_count(n: int, q: int) -> int:
    """|P_n|: number of types of length-n words, C(n+q-1, q-1)."""
    return math.comb(n + q - 1, q - 1)


def enumerate_types(n: int, q: int) -> list[TypeDistribution]:
    """All types of length-n words over range(q), in a fixed order."""
    check_budget(type_count(n, q), f"type enumeration for n={n}, q={q}")
    out = []
    for bars in itertools.combinations(range(n + q - 1), q - 1):
        counts = []
        prev = -1
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(n + q - 1 - prev - 1)
        out.append(TypeDistribution(tuple(counts)))
    return out


def type_class_size(td: TypeDistribution) -> int:
    """Number of words with the given type, a multinomial coefficient."""
    size = math.factorial(td.n)
    for c in td.counts:
        size //= math.factorial(c)
    return size


def entropy(dist) -> float:
    """Shannon entropy in base q of a type, channel or probability vector."""
    probs, q = _probs_of(dist)
    pos = probs[probs > 0]
    return float(-(pos * np.log(pos)).sum() / math.log(q))


def divergence(dist, ref) -> float:
    """D(dist || ref) in base q; +inf when dist puts mass where ref has none."""
    p, q_alpha = _probs_of(dist)
    w, q_ref = _probs_of(ref)
    if q_alpha != q_ref:
        raise ValueError("alphabet size mismatch")
    if np.any((p > 0) & (w == 0)):
        return math.inf
    mask = p > 0
    return float((p[mask] * (np.log(p[mask]) - np.log(w[mask]))).sum()
                 / math.log(q_alpha))


# ---------------------------------------------------------------------------
# random-coding exponent
# ---------------------------------------------------------------------------

def _tilted(lw: np.ndarray, beta: float) -> np.ndarray:
    x = beta * lw
    x -= x.max()
    e = np.exp(x)
    return e / e.sum()


def random_coding_exponent(channel: ChannelModel, rate: float, *,
                           tol: float = 1e-12) -> float:
    """min over distributions Q of D(Q || W) + |1 - rate - H(Q)|^+, base q.

    The objective is convex and infinite off the support of W, and its
    minimizer always lies in the tilted family Q_b proportional to W^b:
    Q_1 = W when the result is zero (rate >= 1 - H(W)), Q_(1/2) when the
    penalty is active and smooth there, and otherwise the b in (1/2, 1)
    pinned to the kink H(Q_b) = 1 - rate, located by bisection (H(Q_b) is
    nonincreasing in b).  `tol` is the bisection width on the entropy gap.
    """
    if not -1e-12 <= rate <= 1 + 1e-12:
        raise ValueError(f"rate {rate} outside [0, 1]")
    rate = min(max(rate, 0.0), 1.0)
    probs = np.array(channel.probs, dtype=float)
    lnq = math.log(channel.q)
    supp = np.nonzero(probs > 0)[0]
    if supp.size == 1:
        # noiseless channel: only Q = W has finite divergence
        return 1.0 - rate
    w = probs[supp]
    lw = np.log(w)

    def ent_of(qv):
        return float(-(qv * np.log(qv)).sum() / lnq)

    def div_of(qv):
        return float((qv * (np.log(qv) - lw)).sum() / lnq)

    target = 1.0 - rate
    if ent_of(w) >= target:
        return 0.0
    q_half = _tilted(lw, 0.5)
    h_half = ent_of(q_half)
    if h_half <= target:
        return div_of(q_half) + target - h_half
    lo, hi = 0.5, 1.0
    while hi - lo > 1e-16:
        mid = 0.5 * (lo + hi)
        q_mid = _tilted(lw, mid)
        gap = ent_of(q_mid) - target
        if abs(gap) <= tol:
            break
        if gap > 0:
            lo = mid
        else:
            hi = mid
    return div_of(_tilted(lw, 0.5 * (lo + hi)))


# ---------------------------------------------------------------------------
# error-probability bounds and rate regions
# ---------------------------------------------------------------------------

def syndrome_decoding_error_bound(n: int, dim: int, premise_factor: float,
                                  channel: ChannelModel) -> float:
    """Error bound a_n |P_n|^2 q^(-n E_r) for a code meeting the spectrum premise.

    `premise_factor` is the a_n >= 1 with which the code's spectrum satisfies
    N_Q(C \\ 0) <= a_n q^(dim - n) |T_Q| for every type Q.
    """
    if premise_factor < 1:
        raise ValueError("premise factor must be at least 1")
    if not 0 <= dim <= n:
        raise ValueError("dimension outside [0, n]")
    q = channel.q
    p_n = type_count(n, q)
    er = random_coding_exponent(channel, dim / n)
    return float(premise_factor * p_n ** 2 * q ** (-n * er))


def good_code_error_bound(n: int, rate: float, epsilon: float,
                          channel: ChannelModel) -> float:
    """Error bound |P_n|^3 q^(-n (E_r - epsilon)) for a sieve-good code.

    May exceed 1, in which case it is vacuous but still reported as is.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    q = channel.q
    p_n = type_count(n, q)
    er = random_coding_exponent(channel, rate)
    return float(p_n ** 3 * q ** (-n * (er - epsilon)))


def css_achievable_rate(w1: ChannelModel, w2: ChannelModel) -> float:
    """1 - H(W1) - H(W2), floored at zero; the two-channel rate threshold."""
    if w1.q != w2.q:
        raise ValueError("channels must share an alphabet")
    return max(0.0, 1.0 - entropy(w1) - entropy(w2))


def rate_constrained_exponent(w1: ChannelModel, w2: ChannelModel,
                              overall_rate: float, *, grid: int = 81) -> float:
    """Best guaranteed exponent at a fixed overall rate, by grid search.

    Sweeps inner rates (r1, r2) on a grid; for each pair the outer-rate split
    maximizing min((1-R1)E1, (R1-b)E2) under (r1+r2-1)(R1+R2-1) = overall_rate
    is solved exactly (the min of one decreasing and one increasing linear
    function).  Returns half the best min, a lower estimate that sharpens as
    the grid refines.
    """
    if w1.q != w2.q:
        raise ValueError("channels must share an alphabet")
    if not 0 < overall_rate <= 1:
        raise ValueError("overall rate must be in (0, 1]")
    rs = np.linspace(0.0, 1.0, grid)
    e1 = {float(r): random_coding_exponent(w1, float(r)) for r in rs}
    e2 = {float(r): random_coding_exponent(w2, float(r)) for r in rs}
    best = 0.0
    for r1 in rs:
        for r2 in rs:
            a = float(r1) + float(r2) - 1.0
            if a <= 0 or overall_rate > a:
                continue
            b = overall_rate / a
            ex1 = e1[float(r1)]
            ex2 = e2[float(r2)]
            if ex1 <= 0 or ex2 <= 0:
                continue
            split = (ex1 + b * ex2) / (ex1 + ex2)
            split = min(max(split, b), 1.0)
            val = 0.5 * min((1.0 - split) * ex1, (split - b) * ex2)
            best = max(best, val)
    return best
