"""Bundle round trips, identity verification, tamper detection."""

import copy
import json

import pytest

from conjcodes.bundle import (
    BUNDLE_NAME, MATRIX_FILES, bundle_dict, config_hash, read_bundle,
    rebuild, verify_bundle, write_bundle)
from conjcodes.errors import ConfigError


@pytest.fixture(scope="module")
def written21(ref21, tmp_path_factory):
    out = tmp_path_factory.mktemp("b21")
    h = config_hash({"preset": "reference_21"})
    data = write_bundle(out, ref21, h)
    return out, h, data


def test_config_hash_is_order_insensitive():
    a = config_hash({"p": 2, "n": 3})
    assert a == config_hash({"n": 3, "p": 2})
    assert a != config_hash({"p": 2, "n": 4})
    assert len(a) == 16


def test_write_is_deterministic(written21, ref21):
    out, h, _ = written21
    first = (out / BUNDLE_NAME).read_bytes()
    write_bundle(out, ref21, h)
    assert (out / BUNDLE_NAME).read_bytes() == first


def test_read_returns_what_was_written(written21):
    out, h, data = written21
    got = read_bundle(out)
    assert got == data
    assert got["config_hash"] == h
    assert read_bundle(out / BUNDLE_NAME) == data


def test_plaintext_matrices_mirror_json(written21):
    out, _, data = written21
    for name in MATRIX_FILES:
        lines = (out / f"{name}.txt").read_text().splitlines()
        assert [[int(x) for x in ln.split()] for ln in lines] == \
            data["matrices"][name]


def test_clean_bundle_passes_every_check(written21):
    _, _, data = written21
    results = verify_bundle(data)
    assert len(results) == 8
    assert all(ok for _, ok, _ in results), results


def test_clean_49_bundle_passes(ref49, tmp_path):
    h = config_hash({"preset": "reference_49"})
    write_bundle(tmp_path, ref49, h)
    results = verify_bundle(read_bundle(tmp_path))
    assert all(ok for _, ok, _ in results), results


def test_flipped_generator_entry_is_named(written21):
    _, _, data = written21
    bad = copy.deepcopy(data)
    bad["matrices"]["generator_1"][0][0] ^= 1
    failed = [nm for nm, ok, _ in verify_bundle(bad) if not ok]
    assert failed
    # an identity check, not only reconstruction, must name the damage
    assert any(nm != "reconstruction" for nm in failed)


def test_flipped_parity_entry_is_caught(written21):
    _, _, data = written21
    bad = copy.deepcopy(data)
    bad["matrices"]["parity_2"][0][2] ^= 1
    failed = [nm for nm, ok, _ in verify_bundle(bad) if not ok]
    assert "second-parity-dual" in failed or "cross-containment" in failed


def test_sieve_tamper_is_isolated(written21):
    _, _, data = written21
    bad = copy.deepcopy(data)
    bad["sieve"]["good_indices"] = bad["sieve"]["good_indices"][1:]
    failed = [nm for nm, ok, _ in verify_bundle(bad) if not ok]
    assert failed == ["sieve-consistency"]


def test_out_of_alphabet_symbol_is_malformed_input(written21):
    # not a failed identity but unreadable data: config-level rejection
    _, _, data = written21
    bad = copy.deepcopy(data)
    bad["matrices"]["generator_1"][0][0] = 99
    with pytest.raises(ConfigError):
        verify_bundle(bad)


def test_unreadable_bundles_rejected(tmp_path):
    with pytest.raises(ConfigError):
        read_bundle(tmp_path / "nowhere")
    empty = tmp_path / BUNDLE_NAME
    empty.write_text("")
    with pytest.raises(ConfigError):
        read_bundle(empty)
    empty.write_text('{"format": 1}')
    with pytest.raises(ConfigError):
        read_bundle(empty)
    empty.write_text(json.dumps({"format": 99}))
    with pytest.raises(ConfigError):
        read_bundle(empty)


def test_rebuild_reproduces_the_dict(written21):
    _, h, data = written21
    again = bundle_dict(rebuild(data), h)
    assert again == data


def test_rebuild_49_reproduces_the_dict(ref49, tmp_path):
    h = config_hash({"preset": "reference_49"})
    data = write_bundle(tmp_path, ref49, h)
    assert bundle_dict(rebuild(data), h) == data


def test_symbols_use_power_encoding(written21):
    # wire convention: 0 is zero, index j+1 is the j-th generator power
    _, _, data = written21
    ext = data["extension"]
    assert ext["degree"] == 1
    assert data["base_field"] == {"char": 2, "degree": 1, "modulus": [0, 1]}


def test_49_extension_power_encoding(ref49, tmp_path):
    data = write_bundle(tmp_path, ref49, config_hash({}))
    assert data["extension"]["degree"] == 3
    # packed coefficient values of successive generator powers in GF(8)
    from conjcodes.field import Field, field_create
    ext = Field.extension(field_create(2, 1), 3)
    assert [ext.from_power_index(i) for i in range(8)] == \
        [0, 1, 2, 4, 3, 6, 7, 5]
