"""
tests/test_forms.py
-------------------
Tests for forms.py: Ω_H(A) and its operators, the κ identities, Hodge levels and
the X-complex, the truncated tensor algebra and the stability trace.
"""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from action import (dual_regular_algebra, dual_regular_pairing, normalize_pairing, regular_pairing, scalar_algebra,
                    underlying_algebra)
from ayd import validate_paramixed
from checks import InputError
from conftest import corpus_algebra
from exactla import Matrix
from forms import (algebra_hom_forms, algebra_hom_theta, build_forms, dimension_table, forms_ayd_report,
                   hodge_level, kappa_identities, paramixed, stability_trace, tensor_algebra,
                   twisted_trace_report, x_complex, xdiff_check)


def failures(report) -> list[str]:
    return [c.name for c in report.failures()]


# ── Ω_H(A) ───────────────────────────────────────────────────────────────────

def test_forms_of_scalars_dimensions(c2):
    F = build_forms(scalar_algebra(c2), degree=3)
    assert F.top == 4 and F.degree == 3
    df = dimension_table(F)
    assert list(df["degree"]) == [0, 1, 2, 3, 4]
    assert list(df["dim Ω^n(A)"]) == [1, 2, 2, 2, 2]
    assert list(df["dim Ω^n_H(A)"]) == [2, 4, 4, 4, 4]


@pytest.mark.parametrize("key", ["trivial", "C2", "H4", "T3"])
def test_operators_on_scalars(key):
    F = build_forms(scalar_algebra(corpus_algebra(key)), degree=3)
    assert F.report.ok, failures(F.report)


def test_operators_on_dual_regular_algebra(c2):
    F = build_forms(dual_regular_algebra(c2), degree=2)
    assert F.report.ok, failures(F.report)


def test_degree_zero_rejected(c2):
    with pytest.raises(InputError, match="degree ≥ 1"):
        build_forms(scalar_algebra(c2), degree=0)


def test_T_is_identity_over_trivial_hopf(trivial_hopf):
    F = build_forms(scalar_algebra(trivial_hopf), degree=2)
    assert all(F.T[k].is_identity() for k in F.T)


# ── κ identities and the AYD structure ───────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "H4", "T3"])
def test_kappa_identities_on_scalars(key):
    F = build_forms(scalar_algebra(corpus_algebra(key)), degree=3)
    report = kappa_identities(F)
    assert report.ok, failures(report)


def test_kappa_identities_through_degree_four(c2):
    report = kappa_identities(build_forms(scalar_algebra(c2), degree=4))
    assert report.ok, failures(report)
    assert report.get("Bb + bB = id − T on degree 4").ok
    assert report.get("(κ^(n+1) − T)(κ^n − T) = 0 on degree 4").ok


def test_kappa_identities_dual_regular(c2):
    report = kappa_identities(build_forms(dual_regular_algebra(c2), degree=2))
    assert report.ok, failures(report)


def test_kappa_identities_need_full_forms(c2):
    F = build_forms(scalar_algebra(c2), degree=2, full=False)
    with pytest.raises(InputError, match="full=True"):
        kappa_identities(F)


@pytest.mark.parametrize("key", ["C2", "H4"])
def test_forms_are_ayd_modules(key):
    F = build_forms(scalar_algebra(corpus_algebra(key)), degree=2)
    report = forms_ayd_report(F)
    assert report.ok, failures(report)


def test_paramixed_complex(h4):
    F = build_forms(scalar_algebra(h4), degree=2)
    report = validate_paramixed(paramixed(F))
    assert report.ok, failures(report)
    assert report.values["unchecked degrees"]


# ── Hodge tower ──────────────────────────────────────────────────────────────

def test_x_complex_is_a_paracomplex(h4):
    X = x_complex(scalar_algebra(h4))
    assert X.level == 1
    assert X.report.ok, failures(X.report)
    assert X.even_degrees == [0] and X.odd_degrees == [1]


def test_higher_hodge_level(c2):
    F = build_forms(scalar_algebra(c2), degree=3)
    L = hodge_level(F, 2)
    assert L.report.ok, failures(L.report)
    assert L.even_degrees == [0, 2] and L.odd_degrees == [1]


def test_hodge_level_out_of_range(c2):
    F = build_forms(scalar_algebra(c2), degree=2)
    with pytest.raises(InputError):
        hodge_level(F, 3)


def test_algebra_hom_shape_checked(c2):
    with pytest.raises(InputError, match="does not match"):
        algebra_hom_forms(Matrix.identity(2, c2.field), scalar_algebra(c2), scalar_algebra(c2), 0)


def test_identity_hom_on_forms(c2):
    A = dual_regular_algebra(c2)
    phi = Matrix.identity(A.dim, A.field)
    assert algebra_hom_forms(phi, A, A, 1).is_identity()


# ── Truncated tensor algebra ─────────────────────────────────────────────────

def test_tensor_algebra_of_scalars(c2):
    T = tensor_algebra(scalar_algebra(c2), 1)
    assert T.dim == 3
    assert T.report.ok, failures(T.report)
    assert T.report.values["dims of J^k"][-1] == 0


def test_tensor_algebra_level_zero_is_A(c2):
    A = dual_regular_algebra(c2)
    assert tensor_algebra(A, 0).dim == A.dim


def test_tensor_algebra_negative_level(c2):
    with pytest.raises(InputError):
        tensor_algebra(scalar_algebra(c2), -1)


def test_xdiff_on_scalars(c2):
    report = xdiff_check(scalar_algebra(c2), 2)
    assert report.ok, failures(report)
    assert report.values["unchecked degrees"] == [3, 4]


def test_xdiff_on_scalars_over_trivial_hopf(trivial_hopf):
    report = xdiff_check(scalar_algebra(trivial_hopf), 2)
    assert report.ok, failures(report)
    assert report.get("∂₁ = b − (1+κ)d on degree 1").ok


@pytest.mark.slow
def test_xdiff_dual_regular(c2):
    report = xdiff_check(dual_regular_algebra(c2), 1)
    assert report.ok, failures(report)


def test_xdiff_needs_positive_level(c2):
    with pytest.raises(InputError):
        xdiff_check(scalar_algebra(c2), 0)


# ── Stability trace ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("key", ["C2", "H4"])
def test_twisted_trace(key):
    report = twisted_trace_report(dual_regular_pairing(corpus_algebra(key)))
    assert report.ok, failures(report)


def test_stability_trace_without_admissible_vector(c2):
    trace = stability_trace(regular_pairing(c2), scalar_algebra(c2))
    assert trace.iota is None
    assert trace.report.values["admissible vector"] is None
    assert trace.report.ok, failures(trace.report)


def test_stability_trace_left_inverse(c2):
    P, u = normalize_pairing(regular_pairing(c2))
    trace = stability_trace(P, scalar_algebra(c2), u=u)
    assert trace.iota is not None
    assert trace.report.get("tr ∘ X_H(ι) = id on degree 1").ok
    assert trace.report.ok, failures(trace.report)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hodge_tower_up_to_three(c2, n):
    F = build_forms(scalar_algebra(c2), degree=3)
    assert hodge_level(F, n).report.ok


def test_group_algebra_coefficients_over_trivial_hopf(trivial_hopf):
    A = underlying_algebra(trivial_hopf, corpus_algebra("C2"))
    F = build_forms(A, degree=4)
    assert F.report.ok, failures(F.report)
    report = kappa_identities(F)
    assert report.ok, failures(report)


@pytest.mark.parametrize("key", ["C2", "H4"])
def test_stability_trace_dual_regular_pairing(key):
    H = corpus_algebra(key)
    trace = stability_trace(dual_regular_pairing(H), scalar_algebra(H), quotient_check=False)
    assert trace.report.ok, failures(trace.report)


@pytest.mark.slow
def test_stability_trace_quotient_sweedler(h4):
    trace = stability_trace(dual_regular_pairing(h4), scalar_algebra(h4))
    assert trace.report.get("tr maps b(Ω²_H(l)) into b(Ω²_H(B))").ok


def test_identity_on_theta_level(c2):
    F = build_forms(dual_regular_algebra(c2), degree=1)
    L = hodge_level(F, 1)
    phi = Matrix.identity(F.algebra.dim, c2.field)
    even, odd = algebra_hom_theta(phi, F, F, L, L)
    assert even.is_identity() and odd.is_identity()
