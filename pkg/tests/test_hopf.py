"""
tests/test_hopf.py
------------------
Tests for hopf.py: axioms and corruption detection, Haar data, duality,
the Fourier identities, Pontrjagin duality and Radford's formula.
"""
import dataclasses
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from conftest import CORPUS_PARAMS, corpus_algebra
from exactla import Matrix, vec_equal
from hopf import (comul, dual_hopf, eps, fourier, fourier_chain, galois_maps, haar_data,
                  hopf_equal_report, invariant_functionals, mul, pair, pairs_to_vector, pontrjagin,
                  radford_check, s_power, validate_hopf)


def corrupt(H, part: str):
    """Copy of H with one structure constant doubled."""
    if part == "mult":
        i, j, k, v = next((i, j, k, v) for i, j, k, v in H.mult.items() if i and j)
        return dataclasses.replace(H, mult=H.mult.with_entry(i, j, k, v * 2), cache={})
    if part == "comult":
        k, i, j, v = next((k, i, j, v) for k, i, j, v in H.comult.items() if k)
        return dataclasses.replace(H, comult=H.comult.with_entry(k, i, j, v * 2), cache={})
    columns = [dict(c) for c in H.antipode.columns()]
    r = next(iter(columns[1]))
    columns[1][r] = columns[1][r] * 2
    return dataclasses.replace(H, antipode=Matrix(H.dim, H.dim, H.field, columns), cache={})


# ── Axioms ────────────────────────────────────────────────────────────────────

def test_corpus_passes_all_axioms(corpus_hopf):
    report = validate_hopf(corpus_hopf)
    assert report.ok, f"{corpus_hopf.name}: {[c.name for c in report.failures()]}"
    galois = [c for c in report.checks if c.name.startswith("Galois map")]
    assert len(galois) == 4


@pytest.mark.parametrize("key", ["C2", "S3", "C^S3", "H4", "T3"])
@pytest.mark.parametrize("part", ["mult", "comult", "antipode"])
def test_corruption_is_caught_with_witness(key, part):
    H = corrupt(corpus_algebra(key), part)
    report = validate_hopf(H)
    assert not report.ok, f"{key}: doubling one {part} entry went unnoticed"
    for check in report.failures():
        assert check.witness and {"lhs", "rhs"} <= set(check.witness), \
            f"{key}/{part}: {check.name} fails without both sides"


def test_galois_maps_are_square(h4):
    maps = galois_maps(h4)
    assert set(maps) == {"gamma_l", "gamma_r", "rho_l", "rho_r"}
    assert all(m.shape == (16, 16) and m.is_invertible() for m in maps.values())


# ── Haar data ─────────────────────────────────────────────────────────────────

def test_integrals_unique_and_faithful(corpus_hopf):
    H = corpus_hopf
    assert invariant_functionals(H).dim == 1
    assert invariant_functionals(H, right=True).dim == 1
    haar = haar_data(H)
    form = Matrix.from_images(H.dim, H.dim, H.field, lambda j: {
        i: pair(haar.phi, mul(H, H.basis(i), H.basis(j)), H.field) for i in range(H.dim)})
    assert form.is_invertible(), f"{H.name}: φ(xy) degenerate"


def test_modular_elements_are_grouplike(corpus_hopf):
    H = corpus_hopf
    haar = haar_data(H)
    d = H.dim
    delta = haar.delta
    expected = {a * d + b: ca * cb for a, ca in delta.items() for b, cb in delta.items()}
    assert vec_equal(pairs_to_vector(comul(H, delta), d), expected)
    assert eps(H, delta) == 1
    assert vec_equal(mul(H, delta, haar.delta_inv), H.one())


def test_sweedler_is_not_unimodular(h4):
    haar = haar_data(h4)
    assert not vec_equal(haar.delta, h4.one()), "δ should be a nontrivial group-like on H₄"
    assert not vec_equal(haar.delta_hat, h4.counit), "δ̂ should be a nontrivial character on H₄"


@pytest.mark.parametrize("key", ["trivial", "C2", "S3"])
def test_group_algebras_are_unimodular(key):
    H = corpus_algebra(key)
    assert vec_equal(haar_data(H).delta, H.one())


# ── Duality and Fourier maps ──────────────────────────────────────────────────

def test_double_dual_is_identity(corpus_hopf):
    assert dual_hopf(dual_hopf(corpus_hopf)) is corpus_hopf


def test_dual_is_a_hopf_algebra(corpus_hopf):
    assert validate_hopf(dual_hopf(corpus_hopf)).ok


def test_dual_of_group_algebra_matches_function_algebra():
    D = dual_hopf(corpus_algebra("S3"))
    F = corpus_algebra("C^S3")
    assert D.mult == F.mult and D.comult == F.comult


def test_fourier_maps_invertible(corpus_hopf):
    F = fourier(corpus_hopf)
    assert all(m.is_invertible() for m in (F.Fl, F.Fr, F.Gl, F.Gr))


def test_fourier_identities(corpus_hopf):
    report = fourier_chain(corpus_hopf)
    assert report.ok, f"{corpus_hopf.name}: {[c.name for c in report.failures()]}"
    assert len(report.values) == len(report.checks), "every ≡ identity reports its scalar"


def test_pontrjagin(corpus_hopf):
    P, report = pontrjagin(corpus_hopf)
    assert report.ok
    assert P.is_identity(), "after rescaling, P is the canonical evaluation map"
    assert report.get("P: intertwines antipodes").ok


def test_isomorphism_report_accepts_identity(h4):
    report = hopf_equal_report(h4, h4, Matrix.identity(h4.dim, h4.field))
    assert report.ok
    assert [c.name for c in report.checks] == [
        "bijective", "multiplicative", "unital", "comultiplicative", "counital", "intertwines antipodes"]


def test_isomorphism_report_rejects_scaled_map_with_witness(h4):
    report = hopf_equal_report(h4, h4, Matrix.identity(h4.dim, h4.field).scale(h4.field(2)))
    failed = {c.name for c in report.failures()}
    assert {"multiplicative", "unital", "comultiplicative", "counital"} <= failed
    assert "bijective" not in failed
    for check in report.failures():
        assert {"lhs", "rhs"} <= set(check.witness), check.name


# ── Radford ───────────────────────────────────────────────────────────────────

def test_radford_on_corpus(corpus_hopf):
    result = radford_check(corpus_hopf)
    assert result["holds"], f"{corpus_hopf.name}: {result['witness']}"


def test_radford_is_not_vacuous_on_taft(t3):
    result = radford_check(t3)
    assert result["holds"]
    assert not result["s4_is_identity"], "S⁴ = id on T₃ would make the check vacuous"
    assert not s_power(t3, 4).is_identity()


def test_radford_sweedler_s4_is_identity(h4):
    assert radford_check(h4)["s4_is_identity"]
    assert not (h4.antipode @ h4.antipode).is_identity()


def test_corpus_keys_cover_acceptance_list():
    assert len(CORPUS_PARAMS) == 7
