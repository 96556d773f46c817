"""On-disk form of a constructed system, and the checks that re-validate it.

A bundle is a directory: `bundle.json` holds the structured description
and the four code matrices, and each matrix is also exported as a
plain-text file of space-separated rows for external tools.  Matrix
entries use the power encoding (zero is 0, the j-th generator power is
j+1); polynomial moduli are coefficient lists, constant term first.
Writing is deterministic, so re-running a construction reproduces the
bundle byte for byte.

Verification works on the stored matrices, not on a fresh build: each
identity is checked from the serialized rows, so a single flipped entry
is caught and the violated identity named.  A full reconstruction
comparison then pins the bundle to its configuration.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from .builds import SystemBuild, _assemble
from .codes import LinearCode, dual, make_pair
from .concat import parity_check_of_l1, parity_check_of_l2
from .ensemble import BalancedEnsemble, sieve, verify_balanced
from .errors import ConfigError, VerificationError
from .field import Field, field_create
from .linalg import Matrix
from .rs import GrsCode, TableCode, outer_pair

BUNDLE_NAME = "bundle.json"
MATRIX_FILES = ("generator_1", "generator_2", "parity_1", "parity_2")
FORMAT = 1


def config_hash(config: dict) -> str:
    """Stable hash of a configuration mapping."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def encode_elements(field, values) -> list:
    return [field.to_power_index(int(v)) for v in values]


def decode_elements(field, values) -> list:
    return [field.from_power_index(int(v)) for v in values]


def encode_matrix(field, m: Matrix) -> list:
    return [encode_elements(field, row) for row in m.data]


def decode_matrix(field, rows) -> Matrix:
    try:
        data = np.array([decode_elements(field, row) for row in rows],
                        dtype=np.int64)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"matrix entry is not a valid symbol: {exc}") from exc
    return Matrix(field, data)


def _field_spec(field) -> dict:
    return {"char": field.char, "degree": field.degree,
            "modulus": [int(c) for c in field.modulus]}


def _outer_code_spec(code) -> dict:
    ext = code.linear.field
    spec = {"n": code.linear.n, "k": code.linear.k,
            "generator": encode_matrix(ext, code.linear.gen)}
    if isinstance(code, GrsCode):
        spec["kind"] = "grs"
        spec["eval_points"] = encode_elements(ext, code.points)
        spec["multipliers"] = encode_elements(ext, code.multipliers)
    else:
        spec["kind"] = "table"
        spec["criterion"] = code.criterion
    return spec


def bundle_dict(build: SystemBuild, cfg_hash: str) -> dict:
    """The JSON form of a constructed system."""
    ens = build.ensemble
    field = ens.field
    ext = build.extension
    cp = build.system
    rep = build.sieve
    return {
        "format": FORMAT,
        "config_hash": cfg_hash,
        "name": build.name,
        "base_field": _field_spec(field),
        "ensemble": {"n": ens.n, "k1": ens.k1, "k2": ens.k2,
                     "modulus": [int(c) for c in ens.modulus]},
        "epsilon": build.epsilon,
        "sieve": {"n": rep.n, "k1": rep.k1, "k2": rep.k2,
                  "epsilon": rep.epsilon, "z": rep.z,
                  "good_indices": list(rep.good_indices),
                  "bad_count_j1": rep.bad_count_1,
                  "bad_count_j2": rep.bad_count_2},
        "extension": {"degree": ext.degree,
                      "modulus": [int(c) for c in ext.modulus]},
        "inner_indices": list(build.indices),
        "outer": {"code1": _outer_code_spec(build.outer.code1),
                  "code2": _outer_code_spec(build.outer.code2)},
        "matrices": {
            "generator_1": encode_matrix(field, cp.code1.gen),
            "generator_2": encode_matrix(field, cp.code2.gen),
            "parity_1": encode_matrix(field, parity_check_of_l1(cp.inners,
                                                               cp.outer)),
            "parity_2": encode_matrix(field, parity_check_of_l2(cp.inners,
                                                               cp.outer)),
        },
    }


def write_bundle(out_dir, build: SystemBuild, cfg_hash: str) -> dict:
    """Write bundle.json and the plain-text matrices; returns the dict."""
    data = bundle_dict(build, cfg_hash)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, BUNDLE_NAME), "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
        fh.write("\n")
    for name in MATRIX_FILES:
        rows = data["matrices"][name]
        with open(os.path.join(out_dir, name + ".txt"), "w") as fh:
            for row in rows:
                fh.write(" ".join(str(x) for x in row) + "\n")
    return data


def read_bundle(path) -> dict:
    """Load bundle.json from a bundle directory (or the file itself)."""
    if os.path.isdir(path):
        path = os.path.join(path, BUNDLE_NAME)
    if not os.path.exists(path):
        raise ConfigError(f"no bundle at {path}")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"unreadable bundle: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise ConfigError("not a recognized bundle file")
    for key in ("base_field", "ensemble", "extension", "inner_indices",
                "outer", "matrices", "sieve"):
        if key not in data:
            raise ConfigError(f"bundle is missing the {key} section")
    return data


def _base_field_of(data: dict):
    spec = data["base_field"]
    field = field_create(spec["char"], spec["degree"])
    if list(field.modulus) != list(spec["modulus"]):
        raise ConfigError("bundle base field uses an unsupported modulus")
    return field


def rebuild(data: dict) -> SystemBuild:
    """Reconstruct the system a bundle describes, from its specs alone."""
    field = _base_field_of(data)
    es = data["ensemble"]
    ensemble = BalancedEnsemble(field, es["n"], es["k1"], es["k2"],
                                modulus=es["modulus"])
    ext = Field.extension(field, data["extension"]["degree"])
    if list(ext.modulus) != list(data["extension"]["modulus"]):
        raise ConfigError("bundle extension uses an unsupported modulus")
    def outer_code(spec):
        if spec.get("kind") == "grs":
            return GrsCode(ext, decode_elements(ext, spec["eval_points"]),
                           decode_elements(ext, spec["multipliers"]),
                           spec["k"])
        c = LinearCode.from_rows(ext, decode_matrix(ext, spec["generator"]))
        return TableCode(c, spec.get("criterion", "entropy"))

    outer = outer_pair(outer_code(data["outer"]["code1"]),
                       outer_code(data["outer"]["code2"]))
    return _assemble(data.get("name", "bundle"), ensemble, ext,
                     data["sieve"]["epsilon"], data["inner_indices"], outer)


def verify_bundle(data: dict):
    """Run the stored-matrix checks; yields (name, ok, detail) triples.

    The first block works purely on the serialized matrices, so any
    corruption is caught and attributed; the last check rebuilds the
    system from its configuration and demands exact agreement."""
    results = []

    def record(name, fn):
        try:
            detail = fn()
            results.append((name, True, detail or ""))
        except (VerificationError, ConfigError, ValueError) as exc:
            results.append((name, False, str(exc)))

    field = _base_field_of(data)
    mats = data["matrices"]
    codes = {}
    for name in MATRIX_FILES:
        codes[name] = LinearCode.from_rows(
            field, decode_matrix(field, mats[name]))

    def chk_dims():
        es = data["ensemble"]
        net = es["k1"] + es["k2"] - es["n"]
        length = len(data["inner_indices"])
        k1 = data["outer"]["code1"]["k"]
        k2 = data["outer"]["code2"]["k"]
        want1 = net * k1 + length * (es["n"] - es["k2"])
        want2 = net * k2 + length * (es["n"] - es["k1"])
        got1, got2 = codes["generator_1"].k, codes["generator_2"].k
        if (got1, got2) != (want1, want2):
            raise VerificationError(
                f"generator ranks ({got1}, {got2}) differ from the "
                f"configured ({want1}, {want2})")
        return f"ranks {got1}/{got2}"

    def chk_css():
        make_pair(codes["generator_1"], codes["generator_2"])
        return "dual of the second code lies in the first"

    def chk_parity(idx):
        gen = codes[f"generator_{idx}"]
        par = codes[f"parity_{idx}"]
        want = dual(gen)
        if par != want:
            raise VerificationError(
                f"stored parity rows of code {idx} do not span the dual "
                f"of stored generator {idx}")
        return "parity spans the dual exactly"

    def chk_cross():
        d2 = dual(codes["generator_2"])
        g1 = codes["generator_1"]
        par2 = codes["parity_2"]
        for row in par2.gen.data:
            if not g1.contains(row):
                raise VerificationError(
                    "a stored parity-2 row falls outside stored code 1")
        d1 = dual(codes["generator_1"])
        g2 = codes["generator_2"]
        for row in codes["parity_1"].gen.data:
            if not g2.contains(row):
                raise VerificationError(
                    "a stored parity-1 row falls outside stored code 2")
        return "both parity spans embed in the opposite code"

    def chk_balance():
        es = data["ensemble"]
        ensemble = BalancedEnsemble(field, es["n"], es["k1"], es["k2"],
                                    modulus=es["modulus"])
        v1, v2 = verify_balanced(ensemble)
        return f"membership counts {v1}/{v2}"

    def chk_sieve():
        es = data["ensemble"]
        ensemble = BalancedEnsemble(field, es["n"], es["k1"], es["k2"],
                                    modulus=es["modulus"])
        fresh = sieve(ensemble, data["sieve"]["epsilon"])
        stored = data["sieve"]
        if (fresh.z != stored["z"]
                or list(fresh.good_indices) != list(stored["good_indices"])
                or fresh.bad_count_1 != stored["bad_count_j1"]
                or fresh.bad_count_2 != stored["bad_count_j2"]):
            raise VerificationError(
                "stored sieve report disagrees with a fresh sieve")
        return f"z={fresh.z}, {len(fresh.good_indices)} good members"

    def chk_rebuild():
        built = rebuild(data)
        fresh = bundle_dict(built, data.get("config_hash", ""))
        for name in MATRIX_FILES:
            if fresh["matrices"][name] != mats[name]:
                raise VerificationError(
                    f"stored {name} differs from the reconstruction")
        return "reconstruction reproduces all four matrices"

    record("generator-ranks", chk_dims)
    record("css-containment", chk_css)
    record("first-parity-dual", lambda: chk_parity(1))
    record("second-parity-dual", lambda: chk_parity(2))
    record("cross-containment", chk_cross)
    record("ensemble-balance", chk_balance)
    record("sieve-consistency", chk_sieve)
    record("reconstruction", chk_rebuild)
    return results
