"""
tests/test_spec_io.py
---------------------
Tests for spec_io.py: structure-constant files for Hopf algebras, H-algebras and
paired spaces, and the located InputErrors raised on malformed input.
"""
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from action import PairedSpace, dual_regular_algebra, regular_pairing
from checks import InputError
from conftest import CORPUS_PARAMS, corpus_algebra
from exactla import FieldSpec
from hopf import HopfAlgebra
from spec_io import hopf_to_spec, load_spec, parse_spec, save_spec, to_spec


def c2_spec() -> dict:
    return hopf_to_spec(corpus_algebra("C2"))


# ── Round trips ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", list(CORPUS_PARAMS))
def test_hopf_round_trip(key):
    H = corpus_algebra(key)
    back = parse_spec(json.loads(json.dumps(to_spec(H))))
    assert isinstance(back, HopfAlgebra)
    assert back.same_structure(H)
    assert back.name == H.name


def test_serialization_is_canonical(h4):
    first = json.dumps(to_spec(h4), sort_keys=True)
    second = json.dumps(to_spec(parse_spec(json.loads(first))), sort_keys=True)
    assert first == second


def test_cyclotomic_field_survives(t3):
    spec = to_spec(t3)
    assert spec["field"] == {"kind": "cyclotomic", "order": 3}
    assert parse_spec(spec).field == FieldSpec.cyclotomic(3)


def test_halgebra_round_trip(h4):
    A = dual_regular_algebra(h4)
    back = parse_spec(to_spec(A))
    assert back.dim == A.dim
    assert back.mult == A.mult
    assert back.hopf.same_structure(h4)
    assert all(a == b for a, b in zip(back.module.matrices, A.module.matrices))


def test_pairing_round_trip(c2):
    P = regular_pairing(c2)
    back = parse_spec(to_spec(P))
    assert isinstance(back, PairedSpace)
    assert back.pairing == P.pairing


def test_save_and_load(tmp_path, h4):
    path = save_spec(h4, tmp_path / "nested" / "h4.json")
    assert path.exists()
    assert load_spec(path).same_structure(h4)


# ── Malformed input ──────────────────────────────────────────────────────────

def test_missing_field_defaults_to_rationals():
    spec = c2_spec()
    del spec["field"]
    assert parse_spec(spec).field == FieldSpec.rationals()


def test_float_rejected_with_location():
    spec = c2_spec()
    spec["counit"][0][1] = 1.0
    with pytest.raises(InputError, match="Inexact") as info:
        parse_spec(spec)
    assert info.value.location == "$.counit[0]"


def test_zero_denominator_located():
    spec = c2_spec()
    spec["mult"][0][3] = "1/0"
    with pytest.raises(InputError) as info:
        parse_spec(spec)
    assert info.value.location == "$.mult[0]"
    assert "denominator" in info.value.reason


@pytest.mark.parametrize("entry", [[0, 0, 5, "1"], [0, 0, "1"], [-1, 0, 0, "1"]])
def test_bad_tensor_entries(entry):
    spec = c2_spec()
    spec["comult"].append(entry)
    with pytest.raises(InputError) as info:
        parse_spec(spec)
    assert info.value.location.startswith("$.comult[")


def test_missing_key():
    spec = c2_spec()
    del spec["antipode"]
    with pytest.raises(InputError, match="Missing key 'antipode'"):
        parse_spec(spec)


def test_unknown_kind():
    with pytest.raises(InputError, match="Unknown kind") as info:
        parse_spec({"kind": "coalgebra"})
    assert info.value.location == "$.kind"


def test_zero_dimension_rejected():
    spec = c2_spec()
    spec["dim"] = 0
    with pytest.raises(InputError, match="dimension ≥ 1"):
        parse_spec(spec)


def test_halgebra_error_points_into_embedded_hopf(h4):
    spec = to_spec(dual_regular_algebra(h4))
    spec["hopf"]["unit"] = [[0, 0.5]]
    with pytest.raises(InputError) as info:
        parse_spec(spec)
    assert info.value.location == "$.hopf.unit[0]"


def test_load_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"kind\": ", encoding="utf-8")
    with pytest.raises(InputError, match="Invalid JSON"):
        load_spec(path)


def test_load_missing_file(tmp_path):
    with pytest.raises(InputError, match="Cannot read"):
        load_spec(tmp_path / "absent.json")


def test_load_error_names_file(tmp_path):
    spec = c2_spec()
    spec["counit"] = "one"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(spec), encoding="utf-8")
    with pytest.raises(InputError) as info:
        load_spec(path)
    assert str(path) in info.value.location
    assert "$.counit" in info.value.location
