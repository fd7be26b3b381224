"""
tests/test_action.py
--------------------
Tests for action.py: modules and comodules, module algebras, crossed products,
pairings and the pairing algebras l(b; A), Takesaki–Takai duality and the
stability isomorphism.
"""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from action import (PairedSpace, admissible_vector, alpha_maps, bilinear, check_module_comodule,
                    crossed_product, diagonal_action, double_crossed_product, dual_regular_algebra,
                    dual_regular_module, dual_regular_pairing, find_unit, invariant_subspace, kernel_algebra,
                    module_from_matrices, normalize_pairing, pairing_algebra, regular_module, regular_pairing,
                    scalar_algebra, stability_isomorphism, takesaki_takai, trivial_module, underlying_algebra,
                    unitarize, validate_halgebra, validate_module, validate_pairing)
from checks import InputError
from conftest import corpus_algebra
from exactla import Matrix
from hopf import dual_hopf


# ── Modules and comodules ─────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "S3", "H4", "T3"])
def test_regular_modules(key):
    H = corpus_algebra(key)
    for M in (regular_module(H), dual_regular_module(H), trivial_module(H, 2)):
        report = validate_module(M)
        assert report.ok, f"{M.name}: {[c.name for c in report.failures()]}"


def test_broken_module_failures_carry_both_sides(c2):
    doubled = Matrix.identity(1, c2.field).scale(c2.field(2))
    report = validate_module(module_from_matrices(c2, [doubled] * c2.dim))
    assert {c.name for c in report.failures()} == {"unital", "associative"}
    for check in report.failures():
        assert {"lhs", "rhs"} <= set(check.witness), check.name
    assert report.get("unital").witness["lhs"] == "2"


def test_diagonal_action_is_a_module(h4):
    M = diagonal_action(h4, [regular_module(h4), dual_regular_module(h4)])
    assert M.dim == 16
    assert validate_module(M).ok


def test_invariants_of_regular_module(c2):
    inv = invariant_subspace(regular_module(c2))
    assert inv.dim == 1, "the invariants of ℂ[C₂] are spanned by the integral 1 + g"


@pytest.mark.parametrize("key", ["C2", "H4"])
def test_module_comodule_correspondence(key):
    H = corpus_algebra(key)
    report = check_module_comodule(regular_module(dual_hopf(H)))
    assert report.ok, [c.name for c in report.failures()]


# ── Module algebras ───────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "H4", "T3"])
def test_coefficient_algebras(key):
    H = corpus_algebra(key)
    for A in (scalar_algebra(H), dual_regular_algebra(H), unitarize(dual_regular_algebra(H))):
        report = validate_halgebra(A)
        assert report.ok, f"{A.name}: {[c.name for c in report.failures()]}"


def test_underlying_algebra_with_trivial_action(h4):
    A = underlying_algebra(h4, corpus_algebra("C2"))
    assert A.dim == 2 and validate_halgebra(A).ok


def test_find_unit(c2):
    A = dual_regular_algebra(c2)
    assert find_unit(A.mult, A.field) == A.unit


def test_unitarize_adds_one_dimension(c2):
    A = unitarize(scalar_algebra(c2))
    assert A.dim == 2
    assert A.unit == {1: c2.field.one()}


# ── Crossed products ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "H4"])
def test_crossed_product_is_a_dual_module_algebra(key):
    H = corpus_algebra(key)
    cp = crossed_product(scalar_algebra(H), validate=True)
    assert cp.algebra.dim == H.dim
    assert cp.algebra.hopf is dual_hopf(H)
    assert cp.report.ok


def test_double_crossed_product_dimension(c2):
    A = double_crossed_product(dual_regular_algebra(c2))
    assert A.dim == 2 * 2 * 2
    assert A.hopf is c2, "Ĥ-action on A⋊H makes A⋊H⋊Ĥ an H-algebra again"
    assert validate_halgebra(A).ok


# ── Pairings ──────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "S3", "H4"])
def test_canonical_pairings_are_equivariant(key):
    H = corpus_algebra(key)
    for P in (regular_pairing(H), dual_regular_pairing(H)):
        assert validate_pairing(P).ok, P.name
        assert P.pairing.is_invertible()


def test_non_equivariant_pairing_rejected(c2):
    P = PairedSpace(regular_module(c2), Matrix.from_dense([[1, 0], [0, 0]], c2.field), name="bad")
    assert not validate_pairing(P).ok
    with pytest.raises(InputError, match="not equivariant"):
        pairing_algebra(P, scalar_algebra(c2))


def test_pairing_algebra_is_unital_module_algebra(h4):
    A = pairing_algebra(regular_pairing(h4), scalar_algebra(h4))
    assert A.dim == 16
    assert A.unit is not None
    assert validate_halgebra(A).ok


def test_kernel_algebra(c2):
    K = kernel_algebra(c2)
    assert K.dim == 4 and validate_halgebra(K).ok


def test_admissible_vector_trivial_pairing(c2):
    P = PairedSpace(trivial_module(c2, 1), Matrix.identity(1, c2.field), name="1")
    u = admissible_vector(P)
    assert u is not None and bilinear(P, u, u) == 1


def test_nonsquare_norm_needs_rescaling(c2):
    P = regular_pairing(c2)
    assert admissible_vector(P) is None, "b(1+g, 1+g) = 2 has no rational square root"
    P2, u = normalize_pairing(P)
    assert bilinear(P2, u, u) == 1


def test_alpha_trivializations(h4):
    report = alpha_maps(regular_module(h4))
    assert report.ok, [c.name for c in report.failures()]


# ── Takesaki–Takai and stability ─────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "H4"])
def test_takesaki_takai_scalar_coefficients(key):
    H = corpus_algebra(key)
    tt = takesaki_takai(scalar_algebra(H))
    assert tt.matrix.shape == (H.dim ** 2, H.dim ** 2)
    assert tt.report.ok, [c.name for c in tt.report.failures()]


def test_takesaki_takai_dual_regular_coefficients(c2):
    tt = takesaki_takai(dual_regular_algebra(c2))
    assert tt.report.ok, [c.name for c in tt.report.failures()]


@pytest.mark.slow
def test_takesaki_takai_sweedler_dual_regular(h4):
    tt = takesaki_takai(dual_regular_algebra(h4))
    assert tt.report.ok


def test_takesaki_takai_group_s3_trivial():
    tt = takesaki_takai(scalar_algebra(corpus_algebra("S3")), check_multiplicative=False)
    assert tt.report.ok
    assert tt.report.get("multiplicative") is None


def test_stability_isomorphism(c2):
    gamma, report = stability_isomorphism(regular_pairing(c2), scalar_algebra(c2))
    assert gamma.shape == (16, 16)
    assert report.ok, [c.name for c in report.failures()]
