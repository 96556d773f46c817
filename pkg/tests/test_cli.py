"""End-to-end runs of the command-line front end in a subprocess."""

import json
import math
import os
import shutil
import subprocess
import sys

import pytest


def run(*argv, code=0, env=None):
    r = subprocess.run([sys.executable, "-m", "conjcodes.cli", *argv],
                       capture_output=True, text=True, env=env)
    assert r.returncode == code, (argv, r.returncode, r.stdout, r.stderr)
    return r


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


def cfg_file(workdir, name, data):
    path = workdir / name
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture(scope="module")
def bundle21(workdir):
    cfg = cfg_file(workdir, "c21.json", {"preset": "reference_21"})
    out = workdir / "b21"
    run("construct", "--config", cfg, "--out", str(out))
    return cfg, out


@pytest.fixture(scope="module")
def bundle49(workdir):
    cfg = cfg_file(workdir, "g49.json",
                   {"p": 2, "m": 1, "n": 7, "k1": 5, "k2": 5,
                    "N": 7, "K1": 5, "K2": 5})
    out = workdir / "b49"
    run("construct", "--config", cfg, "--out", str(out))
    return cfg, out


@pytest.fixture(scope="module")
def tampered49(workdir, bundle49):
    _, b49 = bundle49
    out = workdir / "tampered"
    shutil.copytree(b49, out)
    data = json.loads((out / "bundle.json").read_text())
    data["matrices"]["generator_2"][3][10] ^= 1
    (out / "bundle.json").write_text(json.dumps(data))
    return out


def test_construct_is_byte_identical(workdir, bundle21):
    cfg, out = bundle21
    first = (out / "bundle.json").read_bytes()
    r = run("construct", "--config", cfg, "--out", str(out))
    assert (out / "bundle.json").read_bytes() == first
    assert "(config " in r.stdout


def test_construct_rejects_degenerate_config(workdir):
    bad = cfg_file(workdir, "bad.json",
                   {"p": 2, "m": 1, "n": 4, "k1": 2, "k2": 2,
                    "N": 7, "K1": 5, "K2": 5})
    r = run("construct", "--config", bad, "--out", str(workdir / "no"),
            code=2)
    assert r.stderr.strip()


def test_construct_rejects_unknown_preset(workdir):
    bad = cfg_file(workdir, "bad2.json", {"preset": "x"})
    run("construct", "--config", bad, "--out", str(workdir / "no"), code=2)


def test_construct_requires_out_dir():
    run("construct", code=2)


def test_verify_passes_fresh_bundles(bundle21, bundle49):
    for _, out in (bundle21, bundle49):
        r = run("verify", str(out))
        assert "FAIL" not in r.stdout


def test_verify_names_tampered_identity(tampered49):
    r = run("verify", str(tampered49), code=1)
    named = [l for l in r.stdout.splitlines() if l.startswith("FAIL")]
    assert named


def test_verify_rejects_unreadable_bundle(workdir):
    empty = workdir / "emptyb"
    empty.mkdir()
    (empty / "bundle.json").write_text("")
    run("verify", str(empty), code=2)
    run("verify", str(workdir / "missing"), code=2)


def test_exponent_outputs(workdir):
    cfg = cfg_file(workdir, "exp.json", {
        "channels": {"W1": [0.99, 0.01],
                     "W2": {"q": 2, "probs": [0.99, 0.01]}},
        "rates": [i / 20 for i in range(21)]})
    out = workdir / "exp"
    run("exponent", "--config", cfg, "--out", str(out))
    for f in ("exponent_W1.csv", "exponent_W2.csv",
              "exponent_summary.json", "exponent.png"):
        assert (out / f).exists(), f
    lines = (out / "exponent_W1.csv").read_text().splitlines()
    assert lines[0].startswith("# config ")
    assert lines[1] == "r,E_r"
    assert len(lines) == 23
    summary = json.loads((out / "exponent_summary.json").read_text())
    h = -(0.99 * math.log2(0.99) + 0.01 * math.log2(0.01))
    assert summary["channels"]["W1"]["capacity_threshold"] == \
        pytest.approx(1 - h, abs=1e-12)
    assert summary["css_rate"] == pytest.approx(1 - 2 * h, abs=1e-12)
    # binary alphabet: bits and base-q units coincide
    run("exponent", "--config", cfg, "--out", str(workdir / "expb"),
        "--bits")
    sb = json.loads((workdir / "expb" / "exponent_summary.json").read_text())
    assert sb["units"] == "bits"
    assert sb["channels"]["W1"]["capacity_threshold"] == \
        pytest.approx(summary["channels"]["W1"]["capacity_threshold"])


def test_exponent_rejects_bad_channel(workdir):
    cfg = cfg_file(workdir, "expbad.json", {"channels": {"W1": [0.9, 0.2]}})
    run("exponent", "--config", cfg, "--out", str(workdir / "expx"), code=2)


def test_simulate_results_and_replay(workdir, bundle21):
    _, b21 = bundle21
    cfg = cfg_file(workdir, "sim.json", {
        "bundle": str(b21),
        "channels": {"W1": [0.99, 0.01], "W2": [0.99, 0.01]},
        "trials": 200, "seed": 7})
    out = workdir / "sim"
    run("simulate", "--config", cfg, "--out", str(out))
    assert (out / "results.png").exists()
    rows = (out / "results.csv").read_text().splitlines()
    assert rows[0].split(",")[:4] == ["N_o", "rate", "j", "W_spec"]
    assert len(rows) == 3                          # one row per side
    run("simulate", "--config", cfg, "--out", str(workdir / "sim2"))
    assert (workdir / "sim2" / "results.csv").read_text() == \
        "\n".join(rows) + "\n"


def test_simulate_seed_flag_changes_hash(workdir, bundle21):
    _, b21 = bundle21
    cfg = cfg_file(workdir, "sims.json", {
        "bundle": str(b21), "channels": {"W1": [0.99, 0.01]},
        "trials": 50, "seed": 7})
    run("simulate", "--config", cfg, "--out", str(workdir / "sA"),
        "--no-figures")
    run("simulate", "--config", cfg, "--out", str(workdir / "sB"),
        "--seed", "8", "--no-figures")
    assert not (workdir / "sB" / "results.png").exists()
    row_a = (workdir / "sA" / "results.csv").read_text().splitlines()[1]
    row_b = (workdir / "sB" / "results.csv").read_text().splitlines()[1]
    assert row_a.split(",")[-1] != row_b.split(",")[-1]


def test_simulate_offset_chunks_rejoin(workdir, bundle21):
    _, b21 = bundle21
    base = {"bundle": str(b21), "channels": {"W1": [0.9, 0.1]}, "seed": 3}
    cfg = cfg_file(workdir, "long.json", dict(base, trials=150))
    run("simulate", "--config", cfg, "--out", str(workdir / "sL"),
        "--no-figures")
    whole = int((workdir / "sL" / "results.csv")
                .read_text().splitlines()[1].split(",")[5])
    total = 0
    for off in (0, 50, 100):
        c = cfg_file(workdir, f"chunk{off}.json",
                     dict(base, trials=50, trial_offset=off))
        run("simulate", "--config", c, "--out", str(workdir / f"sC{off}"),
            "--no-figures")
        total += int((workdir / f"sC{off}" / "results.csv")
                     .read_text().splitlines()[1].split(",")[5])
    assert total == whole


def test_simulate_noiseless_never_fails(workdir, bundle21):
    _, b21 = bundle21
    cfg = cfg_file(workdir, "clean.json", {
        "bundle": str(b21), "channels": {"W1": [1.0, 0.0]},
        "trials": 30, "seed": 1})
    run("simulate", "--config", cfg, "--out", str(workdir / "sN"),
        "--no-figures")
    row = (workdir / "sN" / "results.csv").read_text().splitlines()[1]
    assert row.split(",")[5] == "0"


def test_simulate_refuses_tampered_bundle(workdir, tampered49):
    cfg = cfg_file(workdir, "simt.json", {
        "bundle": str(tampered49), "channels": {"W1": [0.99, 0.01]},
        "trials": 10, "seed": 1})
    run("simulate", "--config", cfg, "--out", str(workdir / "sT"), code=1)


def test_budget_cap_exits_three(workdir, bundle21):
    cfg, _ = bundle21
    env = dict(os.environ, CONJ_BUDGET="10")
    run("construct", "--config", cfg, "--out", str(workdir / "bb"),
        code=3, env=env)
