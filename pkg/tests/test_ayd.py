"""
tests/test_ayd.py
-----------------
Tests for ayd.py: the algebra A(H), AYD modules and their two compatibility
forms, the operator T, morphism spaces, quotients and paracomplexes.
"""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from action import regular_module
from ayd import (AH_module_to_ayd, ayd_from_matrices, ayd_to_AH_module, build_AH, conjugate_ayd,
                 direct_sum_ayd, hom_ayd, lambda_picture, naturality_report, quotient_module, regular_ayd,
                 round_trip_report, t_operator_report, trivial_ayd, validate_AH, validate_ayd,
                 validate_paracomplex, zero_paracomplex)
from checks import InputError
from conftest import corpus_algebra
from exactla import FieldSpec, Matrix, Subspace
from hopf import dual_hopf


# ── A(H) ──────────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["trivial", "C2", "S3", pytest.param("H4", marks=pytest.mark.slow)])
def test_AH_structure(key):
    H = corpus_algebra(key)
    AH = build_AH(H)
    assert AH.dim == H.dim ** 2
    report = validate_AH(AH)
    assert report.ok, [c.name for c in report.failures()]


def test_AH_is_cached(h4):
    assert build_AH(h4) is build_AH(h4)


# ── AYD modules ───────────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "S3", "H4"])
def test_trivial_and_regular_ayd(key):
    H = corpus_algebra(key)
    for M in (trivial_ayd(H), regular_ayd(build_AH(H))):
        report = validate_ayd(M)
        assert report.ok, f"{M.name}: {[c.name for c in report.failures()]}"


def test_non_ayd_module_fails_both_forms():
    """Left multiplication with the grading coaction is Yetter–Drinfeld-like, not AYD, on S₃."""
    H = corpus_algebra("S3")
    M = ayd_from_matrices(H, regular_module(H).matrices, regular_module(dual_hopf(H)).matrices, "graded")
    report = validate_ayd(M)
    assert not report.ok
    assert report.get("compatibility (action form)").witness
    assert report.get("action and coaction forms agree").ok


def test_mismatched_dimensions_rejected(c2):
    with pytest.raises(InputError):
        ayd_from_matrices(c2, [Matrix.identity(2, c2.field)] * 2, [Matrix.identity(1, c2.field)] * 2)


def test_direct_sum_and_conjugate(h4):
    M = direct_sum_ayd(trivial_ayd(h4), regular_ayd(build_AH(h4)))
    assert M.dim == 17
    assert validate_ayd(M).ok
    P = Matrix.identity(17, h4.field)
    P = P + Matrix.from_dense([[1 if (i, j) == (0, 1) else 0 for j in range(17)] for i in range(17)], h4.field)
    assert validate_ayd(conjugate_ayd(M, P)).ok


def test_quotient_module(c2):
    M = direct_sum_ayd(trivial_ayd(c2), trivial_ayd(c2))
    W = Subspace.span(2, c2.field, [{0: c2.field.one()}])
    Q = quotient_module(M, W)
    assert Q.dim == 1 and validate_ayd(Q).ok


def test_quotient_by_non_submodule_rejected(c2):
    M = regular_ayd(build_AH(c2))
    W = Subspace.span(4, c2.field, [{0: c2.field.one()}])
    with pytest.raises(InputError, match="not a submodule"):
        quotient_module(M, W)


# ── The operator T ────────────────────────────────────────────────────────────

def test_T_trivial_is_identity(h4):
    assert trivial_ayd(h4).T.is_identity()


@pytest.mark.parametrize("key", ["C2", "S3", "H4"])
def test_T_is_an_ayd_automorphism(key):
    report = t_operator_report(regular_ayd(build_AH(corpus_algebra(key))))
    assert report.ok, [c.name for c in report.failures()]


def test_T_is_nontrivial_on_sweedler(h4):
    report = t_operator_report(regular_ayd(build_AH(h4)))
    assert report.values["T is identity"] is False


def test_lambda_picture_group_algebra(c2):
    report = lambda_picture(build_AH(c2))
    assert report.ok, [c.name for c in report.failures()]


def test_lambda_picture_sweedler(h4):
    report = lambda_picture(build_AH(h4))
    assert report.ok, [c.name for c in report.failures()]
    assert report.get("T(x⊗y) = x_(2) ⊗ S⁻¹(x_(1))y").ok
    for side in ("left H", "left Ĥ", "right H", "right Ĥ"):
        assert report.get(f"T commutes with the transported {side} action").ok
    assert report.get("left H action matches its H⊗H formula").ok


# ── A(H)-modules and Hom ──────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", pytest.param("H4", marks=pytest.mark.slow)])
def test_AH_module_round_trip(key):
    report = round_trip_report(regular_ayd(build_AH(corpus_algebra(key))))
    assert report.ok, [c.name for c in report.failures()]


def test_ayd_to_AH_rejects_non_ayd():
    H = corpus_algebra("S3")
    M = ayd_from_matrices(H, regular_module(H).matrices, regular_module(dual_hopf(H)).matrices, "graded")
    with pytest.raises(InputError, match="not an AYD module"):
        ayd_to_AH_module(M)


def test_AH_module_back_to_ayd(c2):
    M = regular_ayd(build_AH(c2))
    back = AH_module_to_ayd(ayd_to_AH_module(M))
    assert all(a == b for a, b in zip(back.h_module.matrices, M.h_module.matrices))


def test_hom_trivial(h4):
    basis = hom_ayd(trivial_ayd(h4), trivial_ayd(h4))
    assert len(basis) == 1 and basis[0].is_identity()


def test_hom_across_hopf_algebras_rejected():
    H = corpus_algebra("C2")
    K = corpus_algebra("trivial")
    with pytest.raises(InputError):
        hom_ayd(trivial_ayd(H), trivial_ayd(K))


@pytest.mark.parametrize("key", ["C2", "H4"])
def test_T_is_natural(key):
    M = regular_ayd(build_AH(corpus_algebra(key)))
    report = naturality_report(M, M)
    assert report.ok
    assert report.values["dim Hom"] >= 1


# ── Paracomplexes ─────────────────────────────────────────────────────────────

def test_zero_paracomplex(c2):
    assert validate_paracomplex(zero_paracomplex(c2)).ok


def test_field_of_trivial_ayd():
    H = corpus_algebra("T3")
    assert trivial_ayd(H).field == FieldSpec.cyclotomic(3)
