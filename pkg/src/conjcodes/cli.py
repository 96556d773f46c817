"""Command-line front end for constructing, checking and running systems.

A run is described by one JSON config file; a few flags override single
fields for quick variations.  Everything a command writes is a pure
function of the resolved config, and each output carries a short hash of
it, so campaigns can be diffed and reproduced.  Exit codes: 0 success,
1 verification failure, 2 bad config, 3 enumeration budget exceeded.

Config keys by command:

construct   "preset" (reference_21 / reference_49), or the explicit
            parameters p, m, n, k1, k2, N, K1, K2; optional epsilon,
            inner_indices, name.  Writes a bundle directory.
verify      none needed; the bundle path is the positional argument.
exponent    "channels": {label: prob list}, optional "rates" grid.
simulate    "bundle" path, "channels" with keys W1 and/or W2,
            "trials", "seed", optional "trial_offset", "fix_scramble".

The config hash covers the semantic fields, not output locations; for a
simulation it folds in the hash stored in the bundle rather than the
bundle's path, so moving a bundle does not change the run's identity.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .builds import build_system, reference_21, reference_49
from .bundle import bundle_dict, config_hash, read_bundle, rebuild, \
    verify_bundle, write_bundle
from .errors import BudgetExceededError, ConfigError, VerificationError
from .infotheory import ChannelModel, css_achievable_rate, entropy
from .report import channel_spec, exponent_figure, result_row, \
    results_figure, write_exponent_sweep, write_results
from .simulate import TrialConfig, monte_carlo

PRESETS = {"reference_21": reference_21, "reference_49": reference_49}
BUILD_KEYS = ("p", "m", "n", "k1", "k2", "N", "K1", "K2")
DEFAULT_RATES = tuple(i / 100 for i in range(101))


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def _resolve(args) -> dict:
    """Config file merged with flag overrides."""
    cfg = _load_config(args.config)
    for key in ("seed", "trials", "out", "epsilon"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "bits", False):
        cfg["bits"] = True
    seed = cfg.get("seed")
    if seed is not None and not 0 <= int(seed) < 2 ** 64:
        raise ConfigError("seed must fit in 64 bits")
    return cfg


def _out_dir(cfg) -> str:
    out = cfg.get("out")
    if not out:
        raise ConfigError("no output directory; pass --out or set \"out\"")
    return out


def _hash_of(cfg: dict, extra: dict | None = None) -> str:
    semantic = {k: v for k, v in cfg.items()
                if k not in ("out", "bundle", "figures")}
    if extra:
        semantic.update(extra)
    return config_hash(semantic)


def _channel(spec) -> ChannelModel:
    if isinstance(spec, dict):
        probs = spec.get("probs")
        if probs is None:
            raise ConfigError("channel object needs a \"probs\" list")
        if "q" in spec and spec["q"] != len(probs):
            raise ConfigError(
                f"channel says q={spec['q']} but lists {len(probs)} "
                f"probabilities")
    else:
        probs = spec
    try:
        return ChannelModel(tuple(probs))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad channel {spec!r}: {exc}") from exc


def _channels(cfg, required=None) -> dict:
    raw = cfg.get("channels")
    if not isinstance(raw, dict) or not raw:
        raise ConfigError("config needs a \"channels\" object")
    out = {label: _channel(spec) for label, spec in raw.items()}
    for label in required or ():
        if label not in out:
            raise ConfigError(f"config is missing channel {label}")
    return out


def _figures_wanted(cfg, args) -> bool:
    if getattr(args, "no_figures", False):
        return False
    return bool(cfg.get("figures", True))


def _system_build(cfg):
    preset = cfg.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; have {sorted(PRESETS)}")
        kwargs = {}
        if "epsilon" in cfg:
            kwargs["epsilon"] = float(cfg["epsilon"])
        if "inner_indices" in cfg:
            kwargs["indices"] = cfg["inner_indices"]
        return PRESETS[preset](**kwargs)
    missing = [k for k in BUILD_KEYS if k not in cfg]
    if missing:
        raise ConfigError(
            f"config needs a preset or the parameters {', '.join(missing)}")
    vals = {}
    for k in BUILD_KEYS:
        v = cfg[k]
        if not isinstance(v, int) or v < 1:
            raise ConfigError(f"parameter {k} must be a positive integer")
        vals[k] = v
    if vals["k1"] + vals["k2"] <= vals["n"]:
        raise ConfigError(
            f"inner dimensions {vals['k1']}+{vals['k2']} leave no message "
            f"room at n={vals['n']}")
    if vals["K1"] + vals["K2"] < vals["N"]:
        raise ConfigError(
            f"outer dimensions {vals['K1']}+{vals['K2']} cannot "
            f"cross-contain at N={vals['N']}")
    return build_system(
        vals["p"], vals["m"], vals["n"], vals["k1"], vals["k2"],
        vals["N"], vals["K1"], vals["K2"],
        epsilon=float(cfg.get("epsilon", 0.05)),
        indices=cfg.get("inner_indices"),
        name=cfg.get("name", "system"))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    cfg = _resolve(args)
    out = _out_dir(cfg)
    build = _system_build(cfg)
    cfg_hash = _hash_of(cfg)
    write_bundle(out, build, cfg_hash)
    sys_ = build.system
    print(f"built {build.name}: length {sys_.length}, "
          f"net dimension {sys_.net_dimension}, rate {sys_.overall_rate}")
    print(f"sieve kept {len(build.sieve.good_indices)} of "
          f"{build.ensemble.field.order ** build.ensemble.n - 1} members "
          f"at epsilon {build.epsilon}")
    print(f"bundle written to {out} (config {cfg_hash})")
    return 0


def cmd_verify(args) -> int:
    data = read_bundle(args.bundle)
    results = verify_bundle(data)
    bad = 0
    for name, ok, detail in results:
        mark = "ok " if ok else "FAIL"
        print(f"{mark} {name}: {detail}")
        bad += not ok
    print(f"{len(results) - bad} of {len(results)} checks passed "
          f"(config {data.get('config_hash', '?')})")
    if bad:
        raise VerificationError(f"{bad} bundle check(s) failed")
    return 0


def cmd_exponent(args) -> int:
    cfg = _resolve(args)
    out = _out_dir(cfg)
    channels = _channels(cfg)
    rates = tuple(float(r) for r in cfg.get("rates", DEFAULT_RATES))
    if not rates or any(not 0 <= r <= 1 for r in rates):
        raise ConfigError("rates must lie in [0, 1]")
    bits = bool(cfg.get("bits", False))
    cfg_hash = _hash_of(cfg)
    os.makedirs(out, exist_ok=True)
    scale = (lambda q: math.log2(q)) if bits else (lambda q: 1.0)
    summary = {"config_hash": cfg_hash,
               "units": "bits" if bits else "base-q", "channels": {}}
    for label, ch in channels.items():
        write_exponent_sweep(os.path.join(out, f"exponent_{label}.csv"),
                             ch, rates, bits, cfg_hash)
        summary["channels"][label] = {
            "q": ch.q, "spec": channel_spec(ch),
            "capacity_threshold": scale(ch.q) * (1.0 - entropy(ch))}
    if "W1" in channels and "W2" in channels:
        w1, w2 = channels["W1"], channels["W2"]
        if w1.q == w2.q:
            summary["css_rate"] = scale(w1.q) * css_achievable_rate(w1, w2)
    with open(os.path.join(out, "exponent_summary.json"), "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=1)
        fh.write("\n")
    if _figures_wanted(cfg, args):
        exponent_figure(os.path.join(out, "exponent.png"),
                        channels, rates, bits)
    for label, info in sorted(summary["channels"].items()):
        print(f"{label} ({info['spec']}): capacity threshold "
              f"{info['capacity_threshold']:.6f}")
    if "css_rate" in summary:
        print(f"two-sided achievable rate: {summary['css_rate']:.6f}")
    print(f"sweeps written to {out} (config {cfg_hash})")
    return 0


def cmd_simulate(args) -> int:
    cfg = _resolve(args)
    out = _out_dir(cfg)
    bundle_path = cfg.get("bundle")
    if not bundle_path:
        raise ConfigError("config needs a \"bundle\" path")
    data = read_bundle(bundle_path)
    build = rebuild(data)
    fresh = bundle_dict(build, data.get("config_hash", ""))
    if fresh["matrices"] != data["matrices"]:
        raise VerificationError(
            "stored bundle matrices do not match their configuration; "
            "run the verify command for the failing identity")
    channels = _channels(cfg)
    sides = [s for s in (1, 2) if f"W{s}" in channels]
    if not sides:
        raise ConfigError("channels must include W1 and/or W2")
    trials = int(cfg.get("trials", 1000))
    seed = int(cfg.get("seed", 0))
    offset = int(cfg.get("trial_offset", 0))
    fix = bool(cfg.get("fix_scramble", False))
    cfg_hash = _hash_of(cfg, extra={
        "bundle_hash": data.get("config_hash", "")})
    os.makedirs(out, exist_ok=True)
    rows = []
    for side in sides:
        ch = channels[f"W{side}"]
        tc = TrialConfig(channel=ch, trials=trials, seed=seed, side=side,
                         fix_scramble=fix, offset=offset)
        est = monte_carlo(build.system, tc)
        rows.append(result_row(build.system, side, ch, est, cfg_hash))
        bound = "n/a" if est.bound is None else f"{est.bound:.6g}"
        print(f"side {side} over {channel_spec(ch)}: "
              f"{est.failures}/{est.trials} failures, "
              f"estimate {est.estimate:.6g} "
              f"[{est.wilson_low:.6g}, {est.wilson_high:.6g}], "
              f"union bound {bound}")
    write_results(os.path.join(out, "results.csv"), rows)
    if _figures_wanted(cfg, args):
        results_figure(os.path.join(out, "results.png"), rows)
    print(f"results written to {out} (config {cfg_hash})")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="JSON config file")
    common.add_argument("--seed", type=int, metavar="U64",
                        help="override the run seed")
    common.add_argument("--trials", type=int, metavar="N",
                        help="override the trial count")
    common.add_argument("--out", metavar="DIR",
                        help="override the output directory")
    common.add_argument("--epsilon", type=float, metavar="F",
                        help="override the sieve threshold")
    common.add_argument("--bits", action="store_true",
                        help="report entropies and exponents in bits")
    common.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering")

    parser = argparse.ArgumentParser(
        prog="conjcodes",
        description="Construct, verify and simulate conjugate code pairs.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("construct", parents=[common],
                   help="build a system and write its bundle")
    pv = sub.add_parser("verify", parents=[common],
                        help="re-check a stored bundle")
    pv.add_argument("bundle", help="bundle directory or bundle.json")
    sub.add_parser("exponent", parents=[common],
                   help="sweep the random-coding exponent")
    sub.add_parser("simulate", parents=[common],
                   help="Monte Carlo over a stored bundle")
    return parser


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify,
            "exponent": cmd_exponent, "simulate": cmd_simulate}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
