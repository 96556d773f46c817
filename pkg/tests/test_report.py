"""Result CSV writers and the figure layer over them."""

import csv
import math

import pytest

from conjcodes.errors import ConfigError
from conjcodes.infotheory import ChannelModel, random_coding_exponent
from conjcodes.report import (
    EXPONENT_COLUMNS, RESULT_COLUMNS, channel_spec, exponent_figure,
    exponent_sweep, result_row, results_figure, write_exponent_sweep,
    write_results)
from conjcodes.simulate import ErrorEstimate

W = ChannelModel((0.99, 0.01))


def test_channel_spec_display():
    assert channel_spec(W) == "0.99/0.01"
    assert channel_spec(ChannelModel((0.5, 0.25, 0.25))) == "0.5/0.25/0.25"


def test_exponent_sweep_values():
    rates = (0.0, 0.5, 1.0)
    sweep = exponent_sweep(W, rates)
    assert [r for r, _ in sweep] == list(rates)
    for r, e in sweep:
        assert e == random_coding_exponent(W, r)
    # binary alphabet: bit scaling is the identity
    assert exponent_sweep(W, rates, bits=True) == sweep
    tri = ChannelModel((0.8, 0.1, 0.1))
    plain = exponent_sweep(tri, (0.2,))
    scaled = exponent_sweep(tri, (0.2,), bits=True)
    assert scaled[0][1] == pytest.approx(plain[0][1] * math.log2(3))


def test_exponent_csv_round_trip(tmp_path):
    path = tmp_path / "sweep.csv"
    rates = tuple(i / 10 for i in range(11))
    write_exponent_sweep(path, W, rates, config_hash="cafe")
    lines = path.read_text().splitlines()
    assert lines[0] == "# config cafe"
    assert lines[1] == ",".join(EXPONENT_COLUMNS)
    for ln, r in zip(lines[2:], rates):
        got_r, got_e = ln.split(",")
        assert float(got_r) == r
        assert float(got_e) == random_coding_exponent(W, r)


def test_result_csv_round_trip(ref21, tmp_path):
    est = ErrorEstimate.from_counts(3, 100, bound=0.25)
    row = result_row(ref21.system, 1, W, est, "beefbeefbeefbeef")
    assert row.length == 21 and row.trials == 100
    path = tmp_path / "results.csv"
    write_results(path, [row])
    with open(path, newline="") as fh:
        got = list(csv.DictReader(fh))
    assert list(got[0]) == list(RESULT_COLUMNS)
    assert got[0]["N_o"] == "21"
    assert float(got[0]["estimate"]) == 0.03
    assert float(got[0]["union_bound"]) == 0.25
    assert got[0]["config_hash"] == "beefbeefbeefbeef"


def test_result_csv_blank_for_missing_bound(ref21, tmp_path):
    est = ErrorEstimate.from_counts(0, 10, bound=None)
    row = result_row(ref21.system, 2, W, est, "0" * 16)
    path = tmp_path / "r.csv"
    write_results(path, [row])
    with open(path, newline="") as fh:
        got = list(csv.DictReader(fh))
    assert got[0]["union_bound"] == ""


def test_exponent_figure_renders(tmp_path):
    path = tmp_path / "exp.png"
    exponent_figure(path, {"W1": W}, tuple(i / 10 for i in range(11)))
    assert path.stat().st_size > 1000
    with pytest.raises(ConfigError):
        exponent_figure(tmp_path / "none.png", {}, (0.0, 1.0))


def test_results_figure_renders(ref21, tmp_path):
    rows = [
        result_row(ref21.system, 1, W,
                   ErrorEstimate.from_counts(3, 100, bound=0.25), "a" * 16),
        result_row(ref21.system, 2, W,
                   ErrorEstimate.from_counts(0, 100, bound=0.25), "a" * 16),
    ]
    path = tmp_path / "res.png"
    results_figure(path, rows)
    assert path.stat().st_size > 1000
    with pytest.raises(ConfigError):
        results_figure(tmp_path / "none.png", [])
