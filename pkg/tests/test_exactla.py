"""
tests/test_exactla.py
---------------------
Tests for exactla.py: field arithmetic, sparse matrices, echelon forms,
kernels/images/quotients and the proportionality helper.
"""
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from checks import InputError
from exactla import (FieldSpec, Matrix, Subspace, Tensor3, block_matrix, direct_sum, image, is_square,
                     kernel, kernel_image_quotient, proportionality, quotient_maps, rank_reversed, scalar,
                     solve_linear, sqrt, tensor_contract, zeta)

Q = FieldSpec.rationals()
Q3 = FieldSpec.cyclotomic(3)


def sympy_rank(A: Matrix) -> int:
    """Independent oracle for rational matrices."""
    rows = [[sympy.Rational(A[i, j].coeffs[0].numerator, A[i, j].coeffs[0].denominator)
             for j in range(A.cols)] for i in range(A.rows)]
    return sympy.Matrix(rows).rank() if rows else 0


def random_matrix(rows: int, cols: int, seed: int, density: float = 0.5) -> Matrix:
    rng = random.Random(seed)
    values = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < density else 0
               for _ in range(cols)] for _ in range(rows)]
    return Matrix.from_dense(values, Q)


# ── Fields ────────────────────────────────────────────────────────────────────

def test_field_normalizes_small_orders():
    assert FieldSpec.cyclotomic(2) == Q
    assert FieldSpec.cyclotomic(1) == Q


def test_field_rejects_unknown_kind():
    with pytest.raises(InputError):
        FieldSpec("reals")


def test_rational_arithmetic():
    a, b = scalar(Q, "1/2"), scalar(Q, "-2/3")
    assert a + b == scalar(Q, "-1/6")
    assert a * b == scalar(Q, "-1/3")
    assert (a / b) * b == a
    assert str(a - b) == "7/6"


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        Q.zero().inv()


def test_zero_denominator_string_is_input_error():
    with pytest.raises(InputError, match="Zero denominator"):
        scalar(Q, "1/0")


def test_cube_root_of_unity():
    z = zeta(Q3)
    assert z ** 3 == 1
    assert z != 1
    assert 1 + z + z * z == 0, "1 + ζ + ζ² must vanish in ℚ(ζ₃)"


def test_cyclotomic_inverse():
    z = zeta(Q3)
    x = 2 + 3 * z
    assert x * x.inv() == 1


def test_cyclotomic_wire_format():
    z = zeta(Q3)
    assert z.to_wire() == ["0", "1"]
    assert scalar(Q3, ["0", "1"]) == z


def test_zeta_not_in_field():
    with pytest.raises(InputError):
        zeta(Q, 3)


def test_field_mismatch_raises():
    with pytest.raises(InputError, match="Field mismatch"):
        _ = scalar(Q3, 1) + scalar(FieldSpec.cyclotomic(4), 1)


@pytest.mark.parametrize("value,root", [("4/9", "2/3"), ("0", "0"), ("2", None), ("-1", None)])
def test_sqrt(value, root):
    got = sqrt(scalar(Q, value))
    if root is None:
        assert got is None and not is_square(scalar(Q, value))
    else:
        assert got == scalar(Q, root)


@pytest.mark.parametrize("value,root", [
    ([-3, 0], [1, 2]),     # (1 + 2ζ)² = −3
    ([0, 1], [1, 1]),      # (−ζ²)² = ζ
    ([4, 0], [2, 0]),
    ([2, 0], None),
    ([-1, 0], None),
])
def test_sqrt_in_cyclotomic_field(value, root):
    got = sqrt(scalar(Q3, value))
    if root is None:
        assert got is None and not is_square(scalar(Q3, value))
    else:
        assert got == scalar(Q3, root)
        assert got * got == scalar(Q3, value)


def test_minus_one_is_a_square_in_gaussian_field():
    Q4 = FieldSpec.cyclotomic(4)
    assert sqrt(scalar(Q4, -1)) == zeta(Q4)


# ── Matrices ──────────────────────────────────────────────────────────────────

def test_matrix_product_and_identity():
    A = Matrix.from_dense([[1, 2], [3, 4]], Q)
    I = Matrix.identity(2, Q)
    assert A @ I == A
    assert (A @ A) == Matrix.from_dense([[7, 10], [15, 22]], Q)
    assert (A ** 0).is_identity()


def test_inverse():
    A = Matrix.from_dense([[1, 2], [3, 4]], Q)
    assert (A @ A.inverse()).is_identity()
    with pytest.raises(ZeroDivisionError):
        Matrix.from_dense([[1, 2], [2, 4]], Q).inverse()


def test_first_difference_witness():
    A = Matrix.from_dense([[1, 0], [0, 1]], Q)
    B = Matrix.from_dense([[1, 0], [5, 1]], Q)
    w = A.first_difference(B)
    assert w == {"row": 1, "col": 0, "lhs": "0", "rhs": "5"}
    assert A.first_difference(A) is None


def test_kron_shape_and_index():
    A = Matrix.from_dense([[1, 2], [0, 1]], Q)
    B = Matrix.from_dense([[0, 1], [1, 0]], Q)
    K = A.kron(B)
    assert K.shape == (4, 4)
    assert K[0 * 2 + 1, 1 * 2 + 0] == 2


def test_direct_sum_and_blocks():
    A = Matrix.from_dense([[1]], Q)
    B = Matrix.from_dense([[2, 3]], Q)
    D = direct_sum(A, B)
    assert D.shape == (2, 3)
    M = block_matrix([[A, None], [None, B]], [1, 1], [1, 2], Q)
    assert M == D


@pytest.mark.parametrize("seed", range(8))
def test_rank_matches_sympy_and_reversed_elimination(seed):
    A = random_matrix(5, 7, seed)
    assert A.rank() == sympy_rank(A), f"seed {seed}: rank differs from sympy"
    assert A.rank() == rank_reversed(A)


# ── Subspaces ─────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("seed", range(5))
def test_rank_nullity(seed):
    A = random_matrix(4, 6, seed, density=0.4)
    ker = kernel(A)
    assert ker.dim + A.rank() == A.cols
    for v in ker.basis:
        assert not A.apply(v), "kernel vector not annihilated"


def test_quotient_maps_split():
    A = Matrix.from_dense([[1, 0], [1, 0], [0, 1], [0, 0]], Q)
    sub = image(A)
    projection, lift = quotient_maps(sub)
    assert projection.shape == (2, 4)
    assert (projection @ lift).is_identity()
    assert (projection @ A).is_zero()


def test_kernel_image_quotient_bundle():
    A = Matrix.from_dense([[0, 1], [0, 0]], Q)
    kiq = kernel_image_quotient(A)
    assert kiq.kernel.dim == 1 and kiq.image.dim == 1
    assert kiq.quotient_projection.rows == 1


def test_subspace_coordinates_round_trip():
    sub = Subspace.span(3, Q, [{0: Q.one(), 1: Q.one()}, {2: Q.one()}])
    v = {0: scalar(Q, 2), 1: scalar(Q, 2), 2: scalar(Q, -1)}
    assert sub.contains(v)
    assert sub.combine(sub.coordinates(v)) == v


def test_solve_linear():
    A = Matrix.from_dense([[1, 1], [0, 0]], Q)
    sol = solve_linear(A, [3, 0])
    assert sol is not None and sol.dim == 1
    assert A.apply(sol.particular) == {0: scalar(Q, 3)}
    assert solve_linear(A, [0, 1]) is None


# ── Tensors and proportionality ──────────────────────────────────────────────

def test_tensor_rejects_out_of_range_entries():
    with pytest.raises(InputError):
        Tensor3.from_entries((2, 2, 2), Q, [(0, 0, 2, 1)])


def test_tensor_contract_slots():
    t = Tensor3.from_entries((2, 2, 2), Q, [(0, 1, 1, 1), (1, 0, 0, 2)])
    left = tensor_contract(t, [1, 0], 1)    # j ↦ t(e_0, e_j)
    assert left.column(1) == {1: Q.one()}
    assert not left.column(0)


@pytest.mark.parametrize("c", ["3", "-1/2"])
def test_proportionality(c):
    B = Matrix.from_dense([[1, 0], [2, 5]], Q)
    A = B.scale(scalar(Q, c))
    assert proportionality(A, B) == scalar(Q, c)


def test_proportionality_rejects_pattern_mismatch():
    A = Matrix.from_dense([[1, 1]], Q)
    B = Matrix.from_dense([[1, 0]], Q)
    assert proportionality(A, B) is None
