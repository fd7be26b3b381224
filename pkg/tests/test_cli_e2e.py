"""
tests/test_cli_e2e.py
---------------------
End-to-end runs of the CLI verbs on small corpus files written to a temp
directory: exit codes, report files and byte-identical reruns.
"""
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main


def read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def out(tmp_path) -> Path:
    return tmp_path / "out"


@pytest.fixture
def h4_file(out) -> Path:
    assert main(["corpus", "sweedler", "--out", str(out)]) == EXIT_OK
    return out / "H4.json"


# ── corpus / validate ────────────────────────────────────────────────────────

def test_corpus_list():
    assert main(["corpus", "--list"]) == EXIT_OK


def test_corpus_then_validate(h4_file, out):
    assert h4_file.exists()
    assert read_json(h4_file)["kind"] == "hopf"
    assert main(["validate", str(h4_file), "--out", str(out)]) == EXIT_OK
    doc = read_json(out / "validate_H4.json")
    assert doc["ok"] is True and doc["verb"] == "validate"
    assert (out / "validate_H4.md").exists()


def test_corpus_taft_is_cyclotomic(out):
    assert main(["corpus", "taft", "--order", "3", "--out", str(out)]) == EXIT_OK
    assert read_json(out / "T3.json")["field"] == {"kind": "cyclotomic", "order": 3}


def test_corpus_coefficient_algebra(out):
    assert main(["corpus", "group_algebra", "--group", "C2", "--algebra", "trivial", "--out", str(out)]) == EXIT_OK
    spec = read_json(out / "C_C2_trivial.json")
    assert spec["kind"] == "halgebra" and spec["dim"] == 1


def test_corpus_unknown_name(out):
    assert main(["corpus", "quantum_double", "--out", str(out)]) == EXIT_INPUT


def test_field_mismatch(out):
    main(["corpus", "taft", "--order", "3", "--out", str(out)])
    assert main(["validate", str(out / "T3.json"), "--field", "rationals", "--out", str(out)]) == EXIT_INPUT


def test_malformed_file(tmp_path, out):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "hopf", "dim": 1, "mult": [[0, 0, 0, 1.5]]}), encoding="utf-8")
    assert main(["validate", str(bad), "--out", str(out)]) == EXIT_INPUT


# ── verify ───────────────────────────────────────────────────────────────────

def test_verify_radford(h4_file, out):
    assert main(["verify", str(h4_file), "radford", "--out", str(out)]) == EXIT_OK
    doc = read_json(out / "verify_radford_H4.json")
    assert doc["ok"] is True
    radford = next(s for s in doc["sections"] if s["title"].startswith("Radford"))
    assert radford["values"]["S⁴ = id"] is True


def test_verify_stops_on_broken_axioms(h4_file, out):
    spec = read_json(h4_file)
    spec["counit"] = [[i, "2"] for i, _ in spec["counit"]]
    broken = h4_file.with_name("broken.json")
    broken.write_text(json.dumps(spec), encoding="utf-8")
    assert main(["verify", str(broken), "haar", "--out", str(out)]) == EXIT_FAILED
    doc = read_json(out / "verify_haar_broken.json")
    assert doc["ok"] is False
    assert doc["failed_stage"] == "axioms"


def test_verify_forms_writes_table(out):
    main(["corpus", "group_algebra", "--group", "C2", "--algebra", "trivial", "--out", str(out)])
    path = out / "C_C2_trivial.json"
    assert main(["verify", str(path), "forms", "--degree", "2", "--out", str(out)]) == EXIT_OK
    assert (out / "verify_forms_C_C2_trivial_forms_dimensions.csv").exists()


def test_verify_is_deterministic(h4_file, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["verify", str(h4_file), "pontrjagin", "--out", str(first)]) == EXIT_OK
    assert main(["verify", str(h4_file), "pontrjagin", "--out", str(second)]) == EXIT_OK
    name = "verify_pontrjagin_H4.json"
    assert (first / name).read_bytes() == (second / name).read_bytes()


# ── hp ───────────────────────────────────────────────────────────────────────

def test_hp_scalars(out):
    main(["corpus", "trivial", "--algebra", "trivial", "--out", str(out)])
    path = str(out / "C_trivial.json")
    assert main(["hp", path, path, "--level", "2", "--out", str(out)]) == EXIT_OK
    doc = read_json(out / "hp_theta_C_trivial_C_trivial.json")
    assert doc["results"]["ranks"] == [1, 0]
    assert (out / "hp_theta_C_trivial_C_trivial_stabilization.csv").exists()


def test_hp_dimension_cap(out):
    main(["corpus", "group_algebra", "--group", "C2", "--algebra", "dual-regular", "--out", str(out)])
    path = str(out / "C_C2_dual_regular.json")
    assert main(["hp", path, path, "--cap", "1", "--out", str(out)]) == EXIT_INPUT


def test_hp_needs_algebra_files(h4_file, out):
    assert main(["hp", str(h4_file), str(h4_file), "--out", str(out)]) == EXIT_INPUT


def test_hp_hopf_must_match(h4_file, out):
    main(["corpus", "group_algebra", "--group", "C2", "--algebra", "trivial", "--out", str(out)])
    path = str(out / "C_C2_trivial.json")
    assert main(["hp", path, path, "--hopf", str(h4_file), "--out", str(out)]) == EXIT_INPUT
