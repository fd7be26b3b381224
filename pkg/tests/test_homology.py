"""
tests/test_homology.py
----------------------
Tests for homology.py: Hom-complexes of paracomplexes, homology ranks and class
arithmetic, semisimple type and the finite-level HP driver with its dimension cap.
"""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from action import regular_pairing, scalar_algebra
from checks import DimensionCapError, InputError
from conftest import corpus_algebra
from exactla import Matrix, axpy
from forms import build_forms, hodge_level, stability_trace, x_complex
from homology import (MODES, compose_classes, forecast, hom_complex, hom_cycle_from_chain_map, homology_ranks,
                      hp_equivariant, identity_class, is_cycle, same_class, semisimple_type)


# ── Hom-complexes ────────────────────────────────────────────────────────────

def test_hom_complex_of_scalars_trivial_hopf(trivial_hopf):
    X = x_complex(scalar_algebra(trivial_hopf)).paracomplex
    C = hom_complex(X, X)
    assert C.report.ok
    assert homology_ranks(C).ranks == (1, 0)


def test_identity_class(c2):
    X = x_complex(scalar_algebra(c2)).paracomplex
    C = hom_complex(X, X)
    ident = identity_class(C)
    assert is_cycle(C, 0, ident)
    assert same_class(C, 0, ident, ident)
    assert not same_class(C, 0, ident, {})


def test_identity_is_a_unit_for_composition(c2):
    X = x_complex(scalar_algebra(c2)).paracomplex
    C = hom_complex(X, X)
    ident = identity_class(C)
    coords, parity = compose_classes(C, ident, 0, C, ident, 0, C)
    assert parity == 0
    assert same_class(C, 0, coords, ident)


def test_composition_is_associative(c2):
    X = x_complex(scalar_algebra(c2)).paracomplex
    C = hom_complex(X, X)
    reps = homology_ranks(C).representatives[0]
    ident = identity_class(C)
    first = axpy(dict(ident), c2.field(1), reps[0])
    second = axpy(dict(reps[-1]), c2.field(-3), reps[0])
    third = axpy(dict(ident), c2.field(2), reps[-1])

    def times(u, v):
        return compose_classes(C, u, 0, C, v, 0, C)[0]

    left = times(times(first, second), third)
    right = times(first, times(second, third))
    assert same_class(C, 0, left, right)


def test_identity_needs_endomorphisms(c2):
    X = x_complex(scalar_algebra(c2)).paracomplex
    Y = x_complex(scalar_algebra(c2)).paracomplex
    with pytest.raises(InputError):
        identity_class(hom_complex(X, Y))


def test_element_outside_hom_space_rejected(c2):
    X = x_complex(scalar_algebra(c2)).paracomplex
    C = hom_complex(X, X)
    assert C.shape == (2, 2)
    swap = Matrix.from_dense([[0, 1], [1, 0]], c2.field)
    with pytest.raises(InputError, match="not a degree-0 element"):
        C.coordinates(0, swap)


def test_hom_across_hopf_algebras_rejected(c2, h4):
    X = x_complex(scalar_algebra(c2)).paracomplex
    Y = x_complex(scalar_algebra(h4)).paracomplex
    with pytest.raises(InputError):
        hom_complex(X, Y)


# ── Semisimple type ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("key,expected", [("trivial", True), ("C2", True), ("S3", True), ("H4", False)])
def test_semisimple_type(key, expected):
    assert semisimple_type(corpus_algebra(key)) is expected


# ── Finite-level HP ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("level", [1, 2, 3])
def test_hp_scalars_over_trivial_hopf(trivial_hopf, level):
    A = scalar_algebra(trivial_hopf)
    result = hp_equivariant(A, A, mode="theta", level=level)
    assert result.ranks == (1, 0)
    assert list(result.table["level"]) == list(range(1, level + 1))
    assert set(result.table["HP_0"]) == {1}
    assert "finite-level" in result.note


@pytest.mark.parametrize("level", [1, 2, 3])
def test_hp_scalars_agrees_with_paracomplex_homology(trivial_hopf, level):
    """Over the trivial Hopf algebra H(Hom(P, P)) = Hom(H(P), H(P)), counted from the θ differentials."""
    A = scalar_algebra(trivial_hopf)
    P = hodge_level(build_forms(A, degree=level, full=True), level).paracomplex
    r0, r1 = P.d0.rank(), P.d1.rank()
    even, odd = P.even.dim - r0 - r1, P.odd.dim - r1 - r0
    expected = (even * even + odd * odd, 2 * even * odd)
    assert (even, odd) == (1, 0)
    assert hp_equivariant(A, A, level=level).ranks == expected


def test_hp_scalars_over_c2(c2):
    A = scalar_algebra(c2)
    result = hp_equivariant(A, A, mode="theta", level=1)
    assert result.ranks == (2, 0)
    assert "exploratory" in result.values


def test_hp_to_dict_is_plain_json(c2):
    A = scalar_algebra(c2)
    doc = hp_equivariant(A, A, level=1).to_dict()
    assert doc["ranks"] == [2, 0]
    assert doc["table"][0]["HP_0"] == 2
    assert type(doc["table"][0]["level"]) is int


def test_semisimple_mode_matches_theta(c2):
    A = scalar_algebra(c2)
    assert hp_equivariant(A, A, mode="semisimple").ranks == hp_equivariant(A, A, mode="theta").ranks


def test_semisimple_mode_refused_for_sweedler(h4):
    A = scalar_algebra(h4)
    with pytest.raises(InputError, match="not of semisimple type"):
        hp_equivariant(A, A, mode="semisimple")


def test_full_mode_matches_semisimple(c2):
    A = scalar_algebra(c2)
    assert hp_equivariant(A, A, mode="full").ranks == hp_equivariant(A, A, mode="semisimple").ranks


@pytest.mark.parametrize("kwargs", [{"mode": "cyclic"}, {"level": 0}])
def test_bad_parameters(c2, kwargs):
    A = scalar_algebra(c2)
    with pytest.raises(InputError):
        hp_equivariant(A, A, **kwargs)


def test_mixed_hopf_algebras_rejected(c2, h4):
    with pytest.raises(InputError, match="different Hopf algebras"):
        hp_equivariant(scalar_algebra(c2), scalar_algebra(h4))


def test_dimension_cap_aborts_with_forecast(h4):
    A = scalar_algebra(h4)
    with pytest.raises(DimensionCapError) as info:
        hp_equivariant(A, A, level=2, cap=3)
    assert info.value.forecast["largest"] == 8
    assert info.value.forecast["level"] == 2


def test_forecast_dimensions(c2):
    size = forecast(scalar_algebra(c2), 2)
    assert size["dim Ω^k_H"] == [2, 4, 4, 4]
    assert size["largest"] == 4
    assert size["dim θ bound"] == 10
    assert size["dim Hom ambient"] == 100


def test_dimension_cap_counts_the_hom_space(c2):
    A = scalar_algebra(c2)
    with pytest.raises(DimensionCapError, match="Hom") as info:
        hp_equivariant(A, A, level=1, cap=10)
    assert info.value.forecast["largest"] == 4
    assert info.value.forecast["dim Hom ambient"] == 36


def test_modes_constant():
    assert MODES == ("full", "semisimple", "theta")


# ── Chain maps as cycles ─────────────────────────────────────────────────────

def test_stability_trace_is_a_cycle(c2):
    trace = stability_trace(regular_pairing(c2), scalar_algebra(c2))
    X_source, X_target = x_complex(trace.source), x_complex(trace.target)
    even, odd = trace.on_x_complex(X_source, X_target)
    C = hom_complex(X_source.paracomplex, X_target.paracomplex)
    coords = hom_cycle_from_chain_map(C, even, odd)
    assert is_cycle(C, 0, coords)
