"""Transmission trials over additive channels, with the matching bounds.

Two systems are simulated.  A quotient system sends a coset of the dual
freedom inside the first code of one conjugate pair and decodes by coset
leaders, the minimum-empirical-entropy choice by default since that is the
decoder the analytic bounds speak about.  A concatenated system corrects
each block by leaders, extracts the outer symbols and finishes with the
outer code's own decoder, failing openly when that decoder gives up.

Trials are reproducible in isolation: trial t of seed s uses a counter
generator advanced to a fixed offset, so any single trial can be replayed
without running its predecessors, and trials can be farmed out in any
order.  Each trial draws, in order, the message, the scramble freedoms,
and the channel error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .budgets import check_budget
from .codes import (LinearCode, QuotientCode, coset_leader_table, coset_of,
                    make_pair, quotient, quotient_encode, spectrum, syndrome,
                    syndromes)
from .concat import ConcatenatedPair, InnerMaps
from .errors import BudgetExceededError, ConfigError
from .infotheory import (ChannelModel, random_coding_exponent,
                         syndrome_decoding_error_bound)
from .linalg import identity, mat_mul, Matrix, vec

_TRIAL_STRIDE = 1 << 20

_leader_table = lru_cache(maxsize=None)(coset_leader_table)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one trial, independent of all earlier trials."""
    if index < 0:
        raise ConfigError("trial index must be nonnegative")
    bitgen = np.random.Philox(key=seed)
    return np.random.Generator(bitgen.advance(index * _TRIAL_STRIDE))


def transmit(field, word, channel: ChannelModel,
             rng: np.random.Generator) -> np.ndarray:
    """Add an iid channel error to each coordinate."""
    if channel.q != field.order:
        raise ConfigError(
            f"channel alphabet {channel.q} vs field order {field.order}")
    w = vec(field, word)
    err = rng.choice(channel.q, size=w.shape[0], p=channel.probs)
    return field.add_arrays(w, err.astype(np.int64))


def min_entropy_syndrome_decode(code: LinearCode, word,
                                criterion: str = "entropy") -> np.ndarray:
    """Error estimate for a word: the leader of its syndrome coset.

    The estimate shares the word's syndrome, so word minus estimate is
    always in the code.  Leaders minimize empirical entropy, then weight,
    then lexicographic order, independent of any channel."""
    y = vec(code.field, word)
    table = _leader_table(code, criterion)
    return table[syndrome(code, y)]


def quotient_decode(qc: QuotientCode, word,
                    criterion: str = "entropy") -> tuple[int, ...]:
    """Coset message of a noisy word: subtract the error estimate, then
    read the coset.  Syndrome consistency keeps the corrected word in the
    carrier code, so this never fails outright."""
    y = vec(qc.pair.code1.field, word)
    est = min_entropy_syndrome_decode(qc.pair.code1, y, criterion)
    return coset_of(qc, qc.pair.code1.field.sub_arrays(y, est))


# ---------------------------------------------------------------------------
# concatenated encode / decode
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _outer_quotient(cp: ConcatenatedPair, side: int) -> QuotientCode:
    if side == 1:
        return quotient(cp.outer.pair)
    return quotient(make_pair(cp.outer.code2.linear, cp.outer.code1.linear))


def concat_encode(cp: ConcatenatedPair, message, rng: np.random.Generator,
                  side: int = 1, fix_scramble: bool = False) -> np.ndarray:
    """Word carrying the outer coset `message`.

    The outer dual freedom and every block's inner freedom are drawn from
    `rng` in that order, or pinned to zero under `fix_scramble` (sanctioned
    once scramble independence of the decoder has been checked)."""
    if side not in (1, 2):
        raise ConfigError("side must be 1 or 2")
    ext = cp.inners[0].ext
    field = cp.code1.field
    q_out = _outer_quotient(cp, side)
    if fix_scramble:
        sub = np.zeros(q_out.subcode.k, dtype=np.int64)
    else:
        sub = rng.integers(0, ext.order, size=q_out.subcode.k)
    symbols = quotient_encode(q_out, message, sub)
    blocks = []
    for im, sym in zip(cp.inners, symbols):
        free = im.c2perp_gen if side == 1 else im.c1perp_gen
        blk = im.embed1(int(sym)) if side == 1 else im.embed2(int(sym))
        if free.rows and not fix_scramble:
            coeffs = rng.integers(0, field.order,
                                  size=free.rows).astype(np.int64)
            blk = field.add_arrays(blk, field.sum_arrays(
                field.mul_arrays(coeffs[:, None], free.data), axis=0))
        blocks.append(blk)
    return np.concatenate(blocks)


def concat_decode(cp: ConcatenatedPair, word, side: int = 1,
                  criterion: str = "entropy") -> tuple[int, ...] | None:
    """Blockwise leader correction, symbol extraction, outer decoding.

    None when the outer decoder declines; the caller counts that as an
    error.  Block correction always lands in the block code, so symbol
    extraction cannot fail no matter how a block was corrupted."""
    if side not in (1, 2):
        raise ConfigError("side must be 1 or 2")
    field = cp.code1.field
    outer_code = cp.outer.code1 if side == 1 else cp.outer.code2
    symbols = []
    for im, blk in zip(cp.inners, cp.blocks(word)):
        code = im.code1 if side == 1 else im.code2
        est = min_entropy_syndrome_decode(code, blk, criterion)
        fixed = field.sub_arrays(vec(field, blk), est)
        symbols.append(im.symbol1(fixed) if side == 1 else im.symbol2(fixed))
    decoded = outer_code.decode(np.array(symbols, dtype=np.int64))
    if decoded is None:
        return None
    return coset_of(_outer_quotient(cp, side), decoded)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialConfig:
    """What to run: channel, trial count, stream seed, side, decoder.

    `fix_scramble` pins all scramble freedoms to zero; decoding does not
    depend on them, so high-volume runs may skip the draws.  `offset`
    shifts the trial indices, so a campaign can be split into chunks that
    together reproduce one long run."""
    channel: ChannelModel
    trials: int
    seed: int
    side: int = 1
    criterion: str = "entropy"
    fix_scramble: bool = False
    offset: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("need at least one trial")
        if self.side not in (1, 2):
            raise ConfigError("side must be 1 or 2")
        if self.offset < 0:
            raise ConfigError("trial offset cannot be negative")


@dataclass(frozen=True)
class ErrorEstimate:
    """Failure count, point estimate, 95% score interval, analytic bound.

    `bound` is the matching analytic comparison value (union bound for a
    concatenated system, the syndrome-decoding bound for a quotient
    system), or None when its enumeration was over budget."""
    trials: int
    failures: int
    estimate: float
    wilson_low: float
    wilson_high: float
    bound: float | None = None

    @classmethod
    def from_counts(cls, failures: int, trials: int,
                    bound: float | None = None) -> "ErrorEstimate":
        lo, hi = wilson_interval(failures, trials)
        return cls(trials, failures, failures / trials, lo, hi, bound)


def wilson_interval(failures: int, trials: int,
                    z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ConfigError("interval needs at least one trial")
    if not 0 <= failures <= trials:
        raise ConfigError("failure count outside 0..trials")
    p = failures / trials
    zz = z * z
    denom = 1.0 + zz / trials
    center = (p + zz / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + zz / (4 * trials * trials)) / denom
    # at the endpoints center and half agree exactly; do not let rounding
    # pull the interval off 0 or 1
    low = 0.0 if failures == 0 else max(0.0, center - half)
    high = 1.0 if failures == trials else min(1.0, center + half)
    return (low, high)


def _quotient_trial(qc: QuotientCode, cfg: TrialConfig,
                    rng: np.random.Generator) -> bool:
    field = qc.pair.code1.field
    q = field.order
    msg = rng.integers(0, q, size=qc.net_dimension).astype(np.int64)
    if cfg.fix_scramble:
        sub = np.zeros(qc.subcode.k, dtype=np.int64)
    else:
        sub = rng.integers(0, q, size=qc.subcode.k).astype(np.int64)
    word = quotient_encode(qc, msg, sub)
    received = transmit(field, word, cfg.channel, rng)
    return quotient_decode(qc, received, cfg.criterion) != tuple(int(x) for x in msg)


def _concat_trial(cp: ConcatenatedPair, cfg: TrialConfig,
                  rng: np.random.Generator) -> bool:
    ext = cp.inners[0].ext
    q_out = _outer_quotient(cp, cfg.side)
    msg = rng.integers(0, ext.order, size=q_out.net_dimension).astype(np.int64)
    word = concat_encode(cp, msg, rng, cfg.side, cfg.fix_scramble)
    received = transmit(cp.code1.field, word, cfg.channel, rng)
    decoded = concat_decode(cp, received, cfg.side, cfg.criterion)
    return decoded != tuple(int(x) for x in msg)


def _analytic_bound(system, cfg: TrialConfig) -> float | None:
    try:
        if isinstance(system, QuotientCode):
            code = system.pair.code1
            factor = spectrum(code).premise_factor(code.k)
            return syndrome_decoding_error_bound(code.n, code.k, factor,
                                                 cfg.channel)
        worst = max(block_error_probability(im, cfg.channel, cfg.criterion,
                                            cfg.side)
                    for im in system.inners)
        outer = (system.outer.code1 if cfg.side == 1
                 else system.outer.code2)
        return union_bound(system.block_count, outer.linear.k, worst).exact
    except BudgetExceededError:
        return None


def monte_carlo(system, cfg: TrialConfig) -> ErrorEstimate:
    """Independent trials of a quotient or concatenated system."""
    if isinstance(system, QuotientCode):
        if cfg.side != 1:
            raise ConfigError(
                "a quotient system has one side; pass the swapped pair instead")
        runner = _quotient_trial
    elif isinstance(system, ConcatenatedPair):
        runner = _concat_trial
    else:
        raise ConfigError(f"cannot simulate {type(system).__name__}")
    bound = _analytic_bound(system, cfg)
    failures = 0
    for t in range(cfg.offset, cfg.offset + cfg.trials):
        failures += runner(system, cfg, trial_rng(cfg.seed, t))
    return ErrorEstimate.from_counts(failures, cfg.trials, bound)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def block_error_probability(im: InnerMaps, channel: ChannelModel,
                            criterion: str = "entropy",
                            side: int = 1) -> float:
    """Exact chance that leader correction of one block changes the symbol.

    Sums channel mass over all error words whose leader-corrected residual
    leaves the block's dual freedom, which is precisely when the extracted
    outer symbol is wrong."""
    if side not in (1, 2):
        raise ConfigError("side must be 1 or 2")
    code = im.code1 if side == 1 else im.code2
    field = code.field
    if channel.q != field.order:
        raise ConfigError("channel alphabet does not match the block field")
    q = field.order
    n = code.n
    check_budget(q ** n, f"block error enumeration for q={q}, n={n}")
    words = LinearCode(field, identity(field, n)).messages()
    probs = np.prod(np.array(channel.probs)[words], axis=1)
    table = _leader_table(code, criterion)
    synd = syndromes(code, words)
    leaders = np.stack([table[tuple(int(x) for x in row)] for row in synd])
    resid = field.sub_arrays(words, leaders)
    # wrong symbol exactly when the residual is not orthogonal to the
    # paired code, i.e. falls outside the block's dual freedom
    paired = im.code2 if side == 1 else im.code1
    inner = mat_mul(Matrix(field, resid), paired.gen.transpose())
    wrong = inner.data.any(axis=1)
    return float(probs[wrong].sum())


@dataclass(frozen=True)
class UnionBound:
    """Outer-decoder failure bound from per-block error probability."""
    exact: float
    relaxed: float
    relaxed_valid: bool


def union_bound(block_count: int, outer_dim: int, block_error: float,
                bad_blocks: int = 0) -> UnionBound:
    """Chance that more blocks fail than the outer decoder can repair.

    The repair radius is half the outer redundancy.  `bad_blocks` blocks
    are written off entirely; the remaining m carry iid failure chance
    `block_error`, and the decoder loses once total failures exceed the
    radius.  The relaxed form replaces the binomial tail by the entropy
    bound, an upper bound only when the needed count is at least m times
    the block error (reported in `relaxed_valid`)."""
    if not 0 <= block_error <= 1:
        raise ConfigError("block error probability outside [0, 1]")
    if not 0 <= bad_blocks <= block_count:
        raise ConfigError("bad block count outside 0..block_count")
    if not 0 < outer_dim <= block_count:
        raise ConfigError("outer dimension outside 1..block_count")
    radius = (block_count - outer_dim) // 2
    need = radius + 1 - bad_blocks
    m = block_count - bad_blocks
    if need <= 0:
        return UnionBound(1.0, 1.0, True)
    if need > m:
        return UnionBound(0.0, 0.0, True)
    p = block_error
    exact = sum(math.comb(m, i) * p ** i * (1 - p) ** (m - i)
                for i in range(need, m + 1))
    frac = need / m
    ent = 0.0
    if 0 < frac < 1:
        ent = -(frac * math.log2(frac) + (1 - frac) * math.log2(1 - frac))
    relaxed = 2 ** (m * ent) * p ** need * (1 - p) ** (m - need)
    return UnionBound(float(min(exact, 1.0)), float(relaxed),
                      need >= m * p)


# ---------------------------------------------------------------------------
# exponent trend report
# ---------------------------------------------------------------------------

def exponent_target(q: int, inner_rate: float, outer_rate: float,
                    channel: ChannelModel) -> float:
    """Half of (one minus the outer rate) times the exponent at the inner
    rate: the decay-per-coordinate target for a concatenated system."""
    return 0.5 * (1.0 - outer_rate) * random_coding_exponent(channel,
                                                             inner_rate)


@dataclass(frozen=True)
class ExponentRow:
    """One system's measured decay rate next to its analytic target.

    `empirical` is -log_q(estimate)/length, or None for an exact-zero
    estimate, whose decay the run could not resolve."""
    length: int
    side: int
    overall_rate: float
    inner_rate: float
    outer_rate: float
    estimate: float
    empirical: float | None
    target: float


def exponent_report(entries) -> tuple[ExponentRow, ...]:
    """Decay-rate table for systems of at least two different lengths.

    Each entry is (concatenated pair, side, channel, estimate).  Rows come
    out sorted by length so the trend reads top to bottom; no pass or fail
    is attached, the claim being asymptotic."""
    rows = []
    for cp, side, channel, est in entries:
        q = cp.code1.field.order
        im = cp.inners[0]
        inner_rate = (im.k1 if side == 1 else im.k2) / im.n
        outer = cp.outer.code1 if side == 1 else cp.outer.code2
        outer_rate = outer.linear.k / outer.linear.n
        if est.estimate > 0:
            empirical = -math.log(est.estimate) / (cp.length * math.log(q))
        else:
            empirical = None
        rows.append(ExponentRow(
            length=cp.length, side=side,
            overall_rate=float(cp.overall_rate),
            inner_rate=inner_rate, outer_rate=outer_rate,
            estimate=est.estimate, empirical=empirical,
            target=exponent_target(q, inner_rate, outer_rate, channel)))
    if len({r.length for r in rows}) < 2:
        raise ConfigError("trend needs at least two different lengths")
    return tuple(sorted(rows, key=lambda r: (r.length, r.side)))
