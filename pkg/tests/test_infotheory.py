"""Types, entropy, the random-coding exponent, and the error bounds."""

import math

import numpy as np
import pytest

from conjcodes.infotheory import (
    ChannelModel, TypeDistribution, css_achievable_rate, divergence, entropy,
    enumerate_types, good_code_error_bound, random_coding_exponent,
    rate_constrained_exponent, syndrome_decoding_error_bound, type_class_size,
    type_count, type_of)


def h2(p):
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def grid_exponent(probs, rate, step=1e-3):
    """Brute-force E_r over a simplex grid; the oracle for the optimizer."""
    q = len(probs)
    w = np.array(probs, dtype=float)
    lnq = math.log(q)
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    if q == 2:
        qs = np.stack([1.0 - ticks, ticks], axis=1)
    elif q == 3:
        a, b = np.meshgrid(ticks, ticks, indexing="ij")
        keep = a + b <= 1.0 + 1e-12
        qs = np.stack([a[keep], b[keep], 1.0 - a[keep] - b[keep]], axis=1)
        qs[np.abs(qs) < 1e-12] = 0.0
    else:
        raise NotImplementedError
    if np.any(w == 0):
        qs = qs[np.all(qs[:, w == 0] == 0, axis=1)]
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(qs > 0, np.log(np.where(qs > 0, qs, 1.0)), 0.0)
        ent = -(qs * logs).sum(axis=1) / lnq
        div = (qs * (logs - np.log(np.where(w > 0, w, 1.0)))).sum(axis=1) / lnq
    pen = np.maximum(1.0 - rate - ent, 0.0)
    return float((div + pen).min())


def test_type_of_counts_symbols():
    assert type_of((0, 1, 1, 0), 2).counts == (2, 2)
    assert type_of((1, 0, 1, 0), 2) == type_of((0, 0, 1, 1), 2)
    assert type_of((2, 2, 2), 3).counts == (0, 0, 3)
    with pytest.raises(ValueError):
        type_of((0, 2), 2)


def test_enumerate_types_matches_count():
    for n, q in ((3, 2), (5, 2), (3, 3), (2, 4)):
        types = enumerate_types(n, q)
        assert len(types) == type_count(n, q) == math.comb(n + q - 1, q - 1)
        assert len(set(t.counts for t in types)) == len(types)
        assert all(t.n == n and t.q == q for t in types)


def test_type_class_sizes_partition_the_space():
    assert type_class_size(TypeDistribution((3, 0))) == 1
    assert type_class_size(TypeDistribution((1, 2))) == 3
    for q, n in ((2, 12), (3, 7), (4, 5)):
        total = sum(type_class_size(t) for t in enumerate_types(n, q))
        assert total == q ** n


def test_type_class_size_below_entropy_bound():
    for t in enumerate_types(7, 3):
        assert type_class_size(t) <= t.q ** (t.n * entropy(t)) * (1 + 1e-9)


def test_entropy_reference_points():
    assert entropy((1.0, 0.0)) == 0.0
    assert entropy((0.5, 0.5)) == pytest.approx(1.0)
    assert entropy((0.25,) * 4) == pytest.approx(1.0)
    assert entropy(ChannelModel((0.99, 0.01))) == pytest.approx(h2(0.01))


def test_divergence_reference_points():
    w = ChannelModel((0.9, 0.1))
    assert divergence(w, w) == 0.0
    assert divergence((1.0, 0.0), (0.99, 0.01)) == pytest.approx(
        -math.log2(0.99))
    assert divergence((0.5, 0.5), (1.0, 0.0)) == math.inf
    assert divergence((0.3, 0.7), (0.3, 0.7)) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        divergence((0.5, 0.5), (1 / 3,) * 3)


def test_divergence_positive_off_diagonal():
    rng = np.random.default_rng(7)
    for _ in range(20):
        p = rng.dirichlet((1.0, 1.0))
        w = rng.dirichlet((1.0, 1.0))
        d = divergence(p, w)
        assert d >= 0.0
        if np.abs(p - w).max() > 1e-3:
            assert d > 0.0


def test_channel_validation():
    with pytest.raises(ValueError):
        ChannelModel((1.0,))
    with pytest.raises(ValueError):
        ChannelModel((0.7, 0.7))
    with pytest.raises(ValueError):
        ChannelModel((-0.1, 1.1))


def test_exponent_noiseless_is_one_minus_rate():
    w = ChannelModel((1.0, 0.0))
    for r in (0.0, 0.25, 0.5, 1.0):
        assert random_coding_exponent(w, r) == pytest.approx(1.0 - r)


def test_exponent_zero_exactly_above_capacity_gap():
    for probs in ((0.9, 0.1), (0.8, 0.1, 0.1)):
        w = ChannelModel(probs)
        thresh = 1.0 - entropy(w)
        assert random_coding_exponent(w, min(1.0, thresh + 0.01)) <= 1e-6
        assert random_coding_exponent(w, thresh - 0.01) > 1e-6


def test_exponent_matches_grid_oracle():
    cases = [((0.99, 0.01), 0.5), ((0.95, 0.05), 0.3), ((0.8, 0.2), 0.1),
             ((0.7, 0.3), 0.05), ((0.8, 0.1, 0.1), 0.1),
             ((0.6, 0.3, 0.1), 0.1), ((0.95, 0.04, 0.01), 0.5)]
    for probs, rate in cases:
        mine = random_coding_exponent(ChannelModel(probs), rate)
        ref = grid_exponent(probs, rate)
        assert mine == pytest.approx(ref, abs=1e-4)
        assert mine <= ref + 1e-12      # optimizer is exact, grid is not


def test_exponent_never_above_grid_at_entropy_kink():
    # when the optimum pins H(Q) = 1 - r the gridded objective has a
    # first-order offset, so only the one-sided comparison is tight there
    for probs, rate in (((0.9, 0.1), 0.3), ((0.97, 0.03), 0.7),
                        ((0.8, 0.1, 0.1), 0.2)):
        mine = random_coding_exponent(ChannelModel(probs), rate)
        ref = grid_exponent(probs, rate)
        assert 0.0 <= ref - mine < 1.5e-3


def test_exponent_nonincreasing_and_convex_in_rate():
    w = ChannelModel((0.95, 0.05))
    rs = [i / 20 for i in range(21)]
    es = [random_coding_exponent(w, r) for r in rs]
    for a, b in zip(es, es[1:]):
        assert b <= a + 1e-12
    for i in range(1, 20):
        assert es[i] <= (es[i - 1] + es[i + 1]) / 2 + 1e-9


def test_exponent_rejects_rates_outside_unit_interval():
    w = ChannelModel((0.9, 0.1))
    with pytest.raises(ValueError):
        random_coding_exponent(w, -0.1)
    with pytest.raises(ValueError):
        random_coding_exponent(w, 1.1)


def test_syndrome_bound_noiseless_reference():
    w = ChannelModel((1.0, 0.0))
    # E_r = 1 at rate 0, so the bound is |P_7|^2 * 2^-7 = 64/128
    assert syndrome_decoding_error_bound(7, 0, 1.0, w) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        syndrome_decoding_error_bound(7, 0, 0.5, w)
    with pytest.raises(ValueError):
        syndrome_decoding_error_bound(7, 8, 1.0, w)


def test_syndrome_bound_monotone_in_dimension():
    w = ChannelModel((0.95, 0.05))
    vals = [syndrome_decoding_error_bound(10, k, 1.0, w) for k in range(11)]
    for a, b in zip(vals, vals[1:]):
        assert b >= a - 1e-15


def test_good_code_bound_composition():
    w = ChannelModel((0.95, 0.05))
    n, rate = 7, 5 / 7
    er = random_coding_exponent(w, rate)
    expect = type_count(n, 2) ** 3 * 2.0 ** (-n * (er - 0.05))
    assert good_code_error_bound(n, rate, 0.05, w) == pytest.approx(expect)
    # once epsilon eats the whole exponent the bound is vacuous
    assert good_code_error_bound(n, rate, er + 0.01, w) >= 1.0
    with pytest.raises(ValueError):
        good_code_error_bound(n, rate, -0.01, w)


def test_css_rate_reference_points():
    clean = ChannelModel((1.0, 0.0))
    assert css_achievable_rate(clean, clean) == pytest.approx(1.0)
    w = ChannelModel((0.99, 0.01))
    assert css_achievable_rate(w, w) == pytest.approx(1.0 - 2 * h2(0.01))
    noisy = ChannelModel((0.5, 0.5))
    assert css_achievable_rate(noisy, w) == 0.0
    with pytest.raises(ValueError):
        css_achievable_rate(w, ChannelModel((0.5, 0.25, 0.25)))


def test_rate_constrained_exponent_sign():
    w = ChannelModel((0.99, 0.01))
    inside = rate_constrained_exponent(w, w, 0.5, grid=41)
    assert inside > 0.0
    assert rate_constrained_exponent(w, w, 0.99, grid=41) == 0.0
    with pytest.raises(ValueError):
        rate_constrained_exponent(w, w, 0.0)
