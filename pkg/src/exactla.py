"""
exactla.py
----------
Exact scalars over ℚ and the cyclotomic fields ℚ(ζ_n), and the linear algebra
that every other module is built on.

Key behaviors:
- Scalars are immutable; arithmetic never rounds
- Cyclotomic elements are coordinate vectors in the power basis of ℚ[x]/(Φ_n(x))
- Vectors are sparse dicts {index: Scalar} holding no zero entries
- Matrix keeps one sparse dict per column and exposes a dense row-major view (`entries`)
- The canonical form of every Subspace is its reduced row echelon basis with
  pivot = first nonzero column and leading entries 1
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple

import sympy

from checks import InputError

logger = logging.getLogger(__name__)

Vector = dict  # {index: Scalar}, zero entries never stored


# ── Fields ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FieldSpec:
    """ℚ (kind="rationals") or ℚ(ζ_n) (kind="cyclotomic", order=n)."""

    kind: str = "rationals"
    order: int = 1

    def __post_init__(self):
        if self.kind not in ("rationals", "cyclotomic"):
            raise InputError(f"Unknown field kind '{self.kind}'")
        if isinstance(self.order, bool) or not isinstance(self.order, int) or self.order < 1:
            raise InputError(f"Field order must be a positive integer, got {self.order!r}")
        # ℚ(ζ_1) = ℚ(ζ_2) = ℚ
        if self.kind == "rationals" or self.order <= 2:
            object.__setattr__(self, "kind", "rationals")
            object.__setattr__(self, "order", 1)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals", 1)

    @classmethod
    def cyclotomic(cls, n: int) -> "FieldSpec":
        return cls("cyclotomic", n)

    @property
    def degree(self) -> int:
        return len(_cyclotomic_data(self.order)[0]) - 1

    def zero(self) -> "Scalar":
        return _zero(self)

    def one(self) -> "Scalar":
        return _one(self)

    def __call__(self, value) -> "Scalar":
        return scalar(self, value)

    def describe(self) -> str:
        return "ℚ" if self.kind == "rationals" else f"ℚ(ζ{self.order})"

    def to_wire(self) -> dict:
        return {"kind": self.kind, "order": self.order}


@lru_cache(maxsize=None)
def _cyclotomic_data(order: int) -> tuple[tuple[int, ...], dict[int, tuple[Fraction, ...]]]:
    """
    Φ_n coefficients (low → high) and the reductions of x^k mod Φ_n for
    deg ≤ k ≤ 2·deg − 2.
    """
    if order <= 2:
        return (0, 1), {}
    x = sympy.Symbol("x")
    high_to_low = sympy.Poly(sympy.cyclotomic_poly(order, x), x).all_coeffs()
    modulus = tuple(int(c) for c in reversed(high_to_low))
    deg = len(modulus) - 1
    current = [Fraction(-c) for c in modulus[:deg]]
    table = {deg: tuple(current)}
    for k in range(deg + 1, 2 * deg - 1):
        top = current[-1]
        shifted = [Fraction(0)] + current[:-1]
        current = [s + top * r for s, r in zip(shifted, table[deg])]
        table[k] = tuple(current)
    logger.debug(f"Φ_{order} = {modulus} (degree {deg})")
    return modulus, table


@lru_cache(maxsize=None)
def _zero(field: FieldSpec) -> "Scalar":
    return Scalar._raw(field, (Fraction(0),) * field.degree)


@lru_cache(maxsize=None)
def _one(field: FieldSpec) -> "Scalar":
    return Scalar._raw(field, (Fraction(1),) + (Fraction(0),) * (field.degree - 1))


# ── Scalars ──────────────────────────────────────────────────────────────────

class Scalar:
    """Exact element of a FieldSpec, stored as power-basis coordinates."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != field.degree:
            raise InputError(
                f"{field.describe()} elements need {field.degree} coordinates, got {len(coeffs)}"
            )
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def _raw(cls, field: FieldSpec, coeffs: tuple) -> "Scalar":
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        return obj

    # -- coercion --
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise InputError(
                    f"Field mismatch: {self.field.describe()} vs {other.field.describe()}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(
                self.field, (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
            )
        return NotImplemented

    # -- arithmetic --
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._raw(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar._raw(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Scalar._raw(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.coeffs) == 1:
            return Scalar._raw(self.field, (self.coeffs[0] * other.coeffs[0],))
        deg = len(self.coeffs)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        table = _cyclotomic_data(self.field.order)[1]
        for k in range(deg, 2 * deg - 1):
            top = prod[k]
            if top:
                for i, r in enumerate(table[k]):
                    if r:
                        prod[i] += top * r
        return Scalar._raw(self.field, tuple(prod[:deg]))

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError(f"Division by zero in {self.field.describe()}")
        if len(self.coeffs) == 1:
            return Scalar._raw(self.field, (1 / self.coeffs[0],))
        # solve (multiplication by self) · c = 1 in the power basis
        deg = len(self.coeffs)
        basis = [Scalar._raw(self.field, tuple(Fraction(int(i == j)) for i in range(deg)))
                 for j in range(deg)]
        columns = [(self * e).coeffs for e in basis]
        rows = [[columns[j][i] for j in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
        return Scalar._raw(self.field, tuple(_solve_square_fractions(rows)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --
    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.coeffs == other.coeffs and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    # -- rendering --
    def to_wire(self) -> str | list[str]:
        if self.field.kind == "rationals":
            return _fstr(self.coeffs[0])
        return [_fstr(c) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_rational():
            return _fstr(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            power = "" if k == 0 else (f"ζ{self.field.order}" if k == 1 else f"ζ{self.field.order}^{k}")
            if not power:
                terms.append(_fstr(c))
            elif c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{_fstr(c)}*{power}")
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _fstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _solve_square_fractions(rows: list[list[Fraction]]) -> list[Fraction]:
    """Gauss–Jordan on an invertible augmented system [M | b] of Fractions."""
    n = len(rows)
    rows = [list(r) for r in rows]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def scalar(field: FieldSpec, value) -> Scalar:
    """Coerce an int, Fraction, Scalar, "p/q" string or coordinate list into `field`."""
    if isinstance(value, Scalar):
        return field.zero()._coerce(value)
    if isinstance(value, bool):
        raise InputError(f"Not a scalar: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Scalar._raw(field, (Fraction(value),) + (Fraction(0),) * (field.degree - 1))
    if isinstance(value, str):
        return scalar(field, parse_fraction(value))
    if isinstance(value, (list, tuple)):
        coords = [parse_fraction(v) if isinstance(v, str) else Fraction(v) for v in value]
        if len(coords) != field.degree:
            raise InputError(
                f"{field.describe()} needs {field.degree} coordinates, got {len(coords)}"
            )
        return Scalar._raw(field, tuple(coords))
    raise InputError(f"Not a scalar: {value!r}")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise InputError(f"Zero denominator in '{text}'") from None
    except (ValueError, AttributeError):
        raise InputError(f"Not an exact rational: '{text}'") from None


def field_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Single entry point for the four field operations (add, mul, inv, neg)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return (b if b is not None else a).inv()
    raise InputError(f"Unknown field operation '{op}'")


def zeta(field: FieldSpec, n: int | None = None) -> Scalar:
    """A primitive n-th root of unity in `field` (default n = field order)."""
    n = field.order if n is None else n
    if n == 1:
        return field.one()
    if n == 2:
        return -field.one()
    if field.kind != "cyclotomic" or field.order % n:
        raise InputError(f"{field.describe()} has no primitive {n}-th root of unity")
    gen = Scalar._raw(field, tuple(Fraction(int(k == 1)) for k in range(field.degree)))
    return gen ** (field.order // n)


def is_square(c: Scalar) -> bool:
    return sqrt(c) is not None


def sqrt(c: Scalar) -> Scalar | None:
    """
    Exact square root in the field of `c`, or None.

    Rational values try the rational root first (the nonnegative one). Over
    ℚ(ζₙ) the remaining cases solve r(ζ)² ≡ c(ζ) mod Φₙ for the power-basis
    coordinates of r and keep a rational solution; of ±r the root whose first
    nonzero coordinate is positive is returned.
    """
    if c.is_rational() and c.coeffs[0] >= 0:
        q = c.coeffs[0]
        num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if num * num == q.numerator and den * den == q.denominator:
            return scalar(c.field, Fraction(num, den))
    if c.field.kind == "rationals":
        return None
    return _cyclotomic_sqrt(c)


def _cyclotomic_sqrt(c: Scalar) -> Scalar | None:
    fld, m = c.field, c.field.degree
    z = sympy.Symbol("z")
    unknowns = sympy.symbols(f"r0:{m}")
    modulus = sympy.Poly(list(reversed(_cyclotomic_data(fld.order)[0])), z)
    root = sympy.Poly(sum(u * z**k for k, u in enumerate(unknowns)), z)
    target = sympy.Poly(sum(sympy.Rational(q.numerator, q.denominator) * z**k
                            for k, q in enumerate(c.coeffs)), z)
    residue = (root * root - target).rem(modulus)
    equations = [e for e in residue.all_coeffs() if e != 0]
    candidates = []
    for solution in sympy.solve(equations, unknowns, dict=True):
        values = [solution.get(u) for u in unknowns]
        if any(v is None or not v.is_Rational for v in values):
            continue
        candidates.append(Scalar._raw(fld, tuple(Fraction(int(v.p), int(v.q)) for v in values)))
    for candidate in candidates:
        leading = next((q for q in candidate.coeffs if q), Fraction(0))
        if leading >= 0 and candidate * candidate == c:
            return candidate
    return None


# ── Sparse vectors ───────────────────────────────────────────────────────────

def unit(i: int, field: FieldSpec) -> Vector:
    return {i: field.one()}


def axpy(target: Vector, c: Scalar, v: Vector) -> Vector:
    """target += c·v in place; returns target."""
    for k, val in v.items():
        new = target[k] + c * val if k in target else c * val
        if new:
            target[k] = new
        else:
            target.pop(k, None)
    return target


def vec_add(*vectors: Vector) -> Vector:
    out: Vector = {}
    for v in vectors:
        for k, val in v.items():
            new = out[k] + val if k in out else val
            if new:
                out[k] = new
            else:
                out.pop(k, None)
    return out


def vec_sub(u: Vector, v: Vector) -> Vector:
    return vec_add(u, vec_scale(-1, v))


def vec_scale(c, v: Vector) -> Vector:
    if isinstance(c, (int, Fraction)) and c == 1:
        return dict(v)
    out = {}
    for k, val in v.items():
        new = val * c
        if new:
            out[k] = new
    return out


def vec_equal(u: Vector, v: Vector) -> bool:
    return not vec_sub(u, v)


def tensor_vec(u: Vector, v: Vector, dim_v: int) -> Vector:
    """u ⊗ v on the product basis, index a·dim_v + b."""
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            out[a * dim_v + b] = x * y
    return out


def to_dense(v: Vector, n: int, field: FieldSpec) -> list[Scalar]:
    zero = field.zero()
    return [v.get(i, zero) for i in range(n)]


def from_dense(values: Iterable, field: FieldSpec) -> Vector:
    out = {}
    for i, val in enumerate(values):
        s = scalar(field, val)
        if s:
            out[i] = s
    return out


def render_vector(v: Vector) -> dict[int, str]:
    return {i: str(v[i]) for i in sorted(v)}


def first_mismatch(cases: Iterable[tuple[dict, Vector, Vector]]) -> dict | None:
    """
    Scan (location, lhs, rhs) triples lazily; return a witness for the first
    pair that differs, or None.
    """
    for where, lhs, rhs in cases:
        if not vec_equal(lhs, rhs):
            return {**where, "lhs": render_vector(lhs), "rhs": render_vector(rhs)}
    return None


# ── Matrices ─────────────────────────────────────────────────────────────────

class Matrix:
    """Exact rows×cols matrix; column j is the image of the j-th basis vector."""

    __slots__ = ("rows", "cols", "field", "_columns")

    def __init__(self, rows: int, cols: int, field: FieldSpec, columns: list[Vector] | None = None):
        self.rows = rows
        self.cols = cols
        self.field = field
        self._columns = columns if columns is not None else [{} for _ in range(cols)]
        if len(self._columns) != cols:
            raise InputError(f"Matrix expects {cols} columns, got {len(self._columns)}")

    # -- constructors --
    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "Matrix":
        return cls(rows, cols, field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "Matrix":
        return cls(n, n, field, [{j: field.one()} for j in range(n)])

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Vector], field: FieldSpec) -> "Matrix":
        cols = [{k: v for k, v in c.items() if v} for c in columns]
        for c in cols:
            if any(k < 0 or k >= rows for k in c):
                raise InputError(f"Column entry outside 0..{rows - 1}")
        return cls(rows, len(cols), field, cols)

    @classmethod
    def from_images(cls, rows: int, cols: int, field: FieldSpec,
                    image: Callable[[int], Vector]) -> "Matrix":
        """Matrix of the linear map sending basis vector j to image(j)."""
        return cls(rows, cols, field, [{k: v for k, v in image(j).items() if v} for j in range(cols)])

    @classmethod
    def from_dense(cls, values: list[list], field: FieldSpec) -> "Matrix":
        n_rows = len(values)
        n_cols = len(values[0]) if values else 0
        columns = [{} for _ in range(n_cols)]
        for i, row in enumerate(values):
            if len(row) != n_cols:
                raise InputError(f"Row {i} has {len(row)} entries, expected {n_cols}")
            for j, val in enumerate(row):
                s = scalar(field, val)
                if s:
                    columns[j][i] = s
        return cls(n_rows, n_cols, field, columns)

    @classmethod
    def from_rows(cls, rows: list[Vector], n_cols: int, field: FieldSpec) -> "Matrix":
        columns = [{} for _ in range(n_cols)]
        for i, row in enumerate(rows):
            for j, val in row.items():
                if val:
                    columns[j][i] = val
        return cls(len(rows), n_cols, field, columns)

    # -- access --
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> list[Scalar]:
        """Dense row-major view."""
        zero = self.field.zero()
        out = [zero] * (self.rows * self.cols)
        for j, col in enumerate(self._columns):
            for i, v in col.items():
                out[i * self.cols + j] = v
        return out

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self._columns[j].get(i, self.field.zero())

    def column(self, j: int) -> Vector:
        return self._columns[j]

    def columns(self) -> list[Vector]:
        return self._columns

    def row_vectors(self) -> list[Vector]:
        rows: list[Vector] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self._columns):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def nnz(self) -> int:
        return sum(len(c) for c in self._columns)

    # -- algebra --
    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for j, c in v.items():
            axpy(out, c, self._columns[j])
        return out

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        if self.cols != other.rows:
            raise InputError(f"Cannot compose {self.shape} with {other.shape}")
        return Matrix(self.rows, other.cols, self.field, [self.apply(c) for c in other._columns])

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, self.field,
                      [vec_add(a, b) for a, b in zip(self._columns, other._columns)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, self.field,
                      [vec_sub(a, b) for a, b in zip(self._columns, other._columns)])

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, self.field, [vec_scale(c, col) for col in self._columns])

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise InputError("Only square matrices have powers")
        result, base = Matrix.identity(self.rows, self.field), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self._columns, self.rows, self.field)

    def kron(self, other: "Matrix") -> "Matrix":
        """A ⊗ B on product bases (index a·dim_B + b)."""
        columns = []
        for ca in self._columns:
            for cb in other._columns:
                columns.append(tensor_vec(ca, cb, other.rows))
        return Matrix(self.rows * other.rows, self.cols * other.cols, self.field, columns)

    def submatrix(self, rows: list[int], cols: list[int]) -> "Matrix":
        where = {r: k for k, r in enumerate(rows)}
        columns = [{where[i]: v for i, v in self._columns[j].items() if i in where} for j in cols]
        return Matrix(len(rows), len(cols), self.field, columns)

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise InputError(f"Shape mismatch: {self.shape} vs {other.shape}")

    # -- predicates --
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            not vec_sub(a, b) for a, b in zip(self._columns, other._columns)
        )

    __hash__ = None

    def first_difference(self, other: "Matrix") -> dict | None:
        """Witness (row, col, both values) of the first differing entry, or None."""
        if self.shape != other.shape:
            return {"shape": [list(self.shape), list(other.shape)],
                    "lhs": f"{self.rows}×{self.cols}", "rhs": f"{other.rows}×{other.cols}"}
        for j, (a, b) in enumerate(zip(self._columns, other._columns)):
            diff = vec_sub(a, b)
            if diff:
                i = min(diff)
                return {"row": i, "col": j, "lhs": str(self[i, j]), "rhs": str(other[i, j])}
        return None

    def is_zero(self) -> bool:
        return not any(self._columns)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows, self.field)

    def rank(self) -> int:
        return len(row_reduce(self.row_vectors()))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise InputError("Only square matrices are invertible")
        n = self.rows
        augmented = [dict(row) for row in self.row_vectors()]
        for i in range(n):
            augmented[i][n + i] = self.field.one()
        reduced = row_reduce(augmented)
        if len(reduced) < n or any(p >= n for p, _ in reduced):
            raise ZeroDivisionError("Matrix is singular")
        rows = [{j - n: v for j, v in row.items() if j >= n} for _, row in reduced]
        return Matrix.from_rows(rows, n, self.field)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def to_wire(self) -> list[list]:
        return [[self[i, j].to_wire() for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz()}, {self.field.describe()})"


def direct_sum(*blocks: Matrix) -> Matrix:
    """Block-diagonal matrix."""
    field = blocks[0].field
    columns, offset = [], 0
    for m in blocks:
        for col in m.columns():
            columns.append({i + offset: v for i, v in col.items()})
        offset += m.rows
    return Matrix(offset, len(columns), field, columns)


def block_matrix(grid: list[list[Matrix | None]], row_dims: list[int], col_dims: list[int],
                 field: FieldSpec) -> Matrix:
    """Assemble from blocks; None stands for a zero block."""
    row_offsets = [sum(row_dims[:k]) for k in range(len(row_dims))]
    columns: list[Vector] = []
    for bj, width in enumerate(col_dims):
        for j in range(width):
            col: Vector = {}
            for bi, height in enumerate(row_dims):
                block = grid[bi][bj]
                if block is None:
                    continue
                if block.shape != (height, width):
                    raise InputError(f"Block ({bi},{bj}) has shape {block.shape}, expected {(height, width)}")
                for i, v in block.column(j).items():
                    col[i + row_offsets[bi]] = v
            columns.append(col)
    return Matrix(sum(row_dims), sum(col_dims), field, columns)


# ── Echelon forms ────────────────────────────────────────────────────────────

def row_reduce(rows: Iterable[Vector], reverse: bool = False) -> list[tuple[int, Vector]]:
    """
    Reduced row echelon form of the span of `rows`.

    Returns (pivot, row) pairs sorted by pivot; each row has a 1 at its pivot
    and 0 at every other pivot. With reverse=True columns are ranked from the
    last index down, which gives an independent elimination order.
    """
    pivots: dict[int, Vector] = {}
    lead_of = max if reverse else min
    for row in rows:
        r = dict(row)
        for p in [c for c in r if c in pivots]:
            coef = r.get(p)
            if coef:
                axpy(r, -coef, pivots[p])
        if not r:
            continue
        lead = lead_of(r)
        inv = r[lead].inv()
        r = {c: v * inv for c, v in r.items()}
        for prow in pivots.values():
            coef = prow.get(lead)
            if coef:
                axpy(prow, -coef, r)
        pivots[lead] = r
    return sorted(pivots.items(), reverse=reverse)


def rank_reversed(A: Matrix) -> int:
    """Rank by elimination with the column order reversed (an independent oracle)."""
    return len(row_reduce(A.row_vectors(), reverse=True))


class Subspace:
    """Subspace of field^ambient held in reduced row echelon form."""

    __slots__ = ("ambient", "field", "pivots", "rows")

    def __init__(self, ambient: int, field: FieldSpec, echelon: list[tuple[int, Vector]]):
        self.ambient = ambient
        self.field = field
        self.pivots = tuple(p for p, _ in echelon)
        self.rows = tuple(r for _, r in echelon)

    @classmethod
    def span(cls, ambient: int, field: FieldSpec, vectors: Iterable[Vector]) -> "Subspace":
        return cls(ambient, field, row_reduce(vectors))

    @classmethod
    def zero(cls, ambient: int, field: FieldSpec) -> "Subspace":
        return cls(ambient, field, [])

    @classmethod
    def full(cls, ambient: int, field: FieldSpec) -> "Subspace":
        return cls(ambient, field, [(i, {i: field.one()}) for i in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> list[Vector]:
        return [dict(r) for r in self.rows]

    def reduce(self, v: Vector) -> Vector:
        """Residual of v after eliminating every pivot coordinate."""
        r = dict(v)
        for p, row in zip(self.pivots, self.rows):
            coef = r.get(p)
            if coef:
                axpy(r, -coef, row)
        return r

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def contains_all(self, vectors: Iterable[Vector]) -> bool:
        return all(self.contains(v) for v in vectors)

    def coordinates(self, v: Vector) -> list[Scalar]:
        """Coordinates of v (assumed in the span) w.r.t. the echelon basis."""
        zero = self.field.zero()
        return [v.get(p, zero) for p in self.pivots]

    def combine(self, coords: Iterable[Scalar]) -> Vector:
        out: Vector = {}
        for c, row in zip(coords, self.rows):
            if c:
                axpy(out, c, row)
        return out

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, self.field, list(self.rows) + list(other.rows))

    def as_matrix(self) -> Matrix:
        return Matrix(self.ambient, self.dim, self.field, [dict(r) for r in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.pivots == other.pivots
                and all(vec_equal(a, b) for a, b in zip(self.rows, other.rows)))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.ambient})"


# ── Kernels, images, quotients, solving ──────────────────────────────────────

def kernel(A: Matrix) -> Subspace:
    echelon = row_reduce(A.row_vectors())
    pivot_set = {p for p, _ in echelon}
    vectors = []
    for f in range(A.cols):
        if f in pivot_set:
            continue
        v = {f: A.field.one()}
        for p, row in echelon:
            c = row.get(f)
            if c:
                v[p] = -c
        vectors.append(v)
    # already reduced: each free column contributes exactly one basis vector
    return Subspace.span(A.cols, A.field, vectors)


def image(A: Matrix) -> Subspace:
    return Subspace.span(A.rows, A.field, A.columns())


def quotient_maps(sub: Subspace) -> tuple[Matrix, Matrix]:
    """
    Projection ambient → ambient/sub and a linear lift back.

    Coordinates on the quotient are the non-pivot coordinates of the
    residual after reducing by `sub`; the lift sends coordinate q to the
    corresponding unit vector, so projection ∘ lift = id.
    """
    pivot_set = set(sub.pivots)
    free = [c for c in range(sub.ambient) if c not in pivot_set]
    where = {c: q for q, c in enumerate(free)}
    columns = []
    for c in range(sub.ambient):
        if c in where:
            columns.append({where[c]: sub.field.one()})
        else:
            row = sub.rows[sub.pivots.index(c)]
            columns.append({where[k]: -v for k, v in row.items() if k in where})
    projection = Matrix(len(free), sub.ambient, sub.field, columns)
    lift = Matrix(sub.ambient, len(free), sub.field, [{c: sub.field.one()} for c in free])
    return projection, lift


class KernelImageQuotient(NamedTuple):
    kernel: Subspace
    image: Subspace
    quotient_projection: Matrix
    quotient_lift: Matrix


def kernel_image_quotient(A: Matrix) -> KernelImageQuotient:
    ker, img = kernel(A), image(A)
    projection, lift = quotient_maps(img)
    logger.debug(f"{A!r}: kernel {ker.dim}, image {img.dim}, quotient {projection.rows}")
    return KernelImageQuotient(ker, img, projection, lift)


@dataclass
class AffineSolution:
    particular: Vector
    kernel: Subspace

    @property
    def dim(self) -> int:
        return self.kernel.dim


def solve_linear(A: Matrix, b: Vector | list) -> AffineSolution | None:
    """Full solution set of A·x = b, or None when inconsistent."""
    if isinstance(b, list):
        if len(b) != A.rows:
            raise InputError(f"Right-hand side has length {len(b)}, expected {A.rows}")
        b = from_dense(b, A.field)
    if any(i >= A.rows for i in b):
        raise InputError("Right-hand side longer than the matrix")
    rows = A.row_vectors()
    for i, v in b.items():
        rows[i][A.cols] = v
    echelon = row_reduce(rows)
    if echelon and echelon[-1][0] == A.cols:
        return None
    particular = {p: row[A.cols] for p, row in echelon if A.cols in row}
    pivot_set = {p for p, _ in echelon}
    vectors = []
    for f in range(A.cols):
        if f in pivot_set:
            continue
        v = {f: A.field.one()}
        for p, row in echelon:
            c = row.get(f)
            if c:
                v[p] = -c
        vectors.append(v)
    return AffineSolution(particular, Subspace.span(A.cols, A.field, vectors))


# ── Multilinear data ─────────────────────────────────────────────────────────

class Tensor3:
    """Sparse 3-index array; t[i][j][k] holds structure constants such as m_{ij}^k."""

    __slots__ = ("dims", "field", "_data")

    def __init__(self, dims: tuple[int, int, int], field: FieldSpec,
                 data: dict[int, dict[int, dict[int, Scalar]]] | None = None):
        self.dims = tuple(dims)
        self.field = field
        self._data = data if data is not None else {}

    @classmethod
    def from_entries(cls, dims: tuple[int, int, int], field: FieldSpec,
                     entries: Iterable[tuple[int, int, int, object]]) -> "Tensor3":
        t = cls(dims, field)
        for i, j, k, v in entries:
            if not (0 <= i < dims[0] and 0 <= j < dims[1] and 0 <= k < dims[2]):
                raise InputError(f"Tensor entry ({i},{j},{k}) outside dims {tuple(dims)}")
            s = scalar(field, v)
            if not s:
                continue
            slot = t._data.setdefault(i, {}).setdefault(j, {})
            new = slot[k] + s if k in slot else s
            if new:
                slot[k] = new
            else:
                del slot[k]
        return t

    @classmethod
    def from_bilinear(cls, dims: tuple[int, int, int], field: FieldSpec,
                      fn: Callable[[int, int], Vector]) -> "Tensor3":
        """t[i][j] = fn(i, j) as a sparse vector over the third index."""
        data = {}
        for i in range(dims[0]):
            row = {}
            for j in range(dims[1]):
                v = {k: val for k, val in fn(i, j).items() if val}
                if v:
                    row[j] = v
            if row:
                data[i] = row
        return cls(dims, field, data)

    @property
    def entries(self) -> list[Scalar]:
        d1, d2, d3 = self.dims
        zero = self.field.zero()
        out = [zero] * (d1 * d2 * d3)
        for i, j, k, v in self.items():
            out[(i * d2 + j) * d3 + k] = v
        return out

    def get(self, i: int, j: int, k: int) -> Scalar:
        return self._data.get(i, {}).get(j, {}).get(k, self.field.zero())

    def fiber(self, i: int, j: int) -> Vector:
        return self._data.get(i, {}).get(j, {})

    def items(self):
        for i in sorted(self._data):
            for j in sorted(self._data[i]):
                for k in sorted(self._data[i][j]):
                    yield i, j, k, self._data[i][j][k]

    def with_entry(self, i: int, j: int, k: int, value) -> "Tensor3":
        """Copy with one entry replaced (used by corrupt-and-check harnesses)."""
        entries = [(a, b, c, v) for a, b, c, v in self.items() if (a, b, c) != (i, j, k)]
        entries.append((i, j, k, value))
        return Tensor3.from_entries(self.dims, self.field, entries)

    def apply(self, x: Vector, y: Vector) -> Vector:
        """Σ x_i y_j t[i][j][·]."""
        out: Vector = {}
        for i, xi in x.items():
            row = self._data.get(i)
            if not row:
                continue
            for j, yj in y.items():
                fiber = row.get(j)
                if fiber:
                    axpy(out, xi * yj, fiber)
        return out

    def split(self, x: Vector) -> dict[tuple[int, int], Scalar]:
        """Σ x_i t[i][·][·] as a sparse {(j, k): value} (used for coproducts)."""
        out: dict[tuple[int, int], Scalar] = {}
        for i, xi in x.items():
            for j, fiber in self._data.get(i, {}).items():
                for k, v in fiber.items():
                    key = (j, k)
                    new = out[key] + xi * v if key in out else xi * v
                    if new:
                        out[key] = new
                    else:
                        del out[key]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and list(self.items()) == list(other.items())

    __hash__ = None

    def to_wire(self) -> list[list]:
        return [[i, j, k, v.to_wire()] for i, j, k, v in self.items()]

    def __repr__(self) -> str:
        return f"Tensor3({self.dims}, {self.field.describe()})"


def tensor_contract(t: Tensor3, v: Vector | list, slot: int) -> Matrix:
    """
    Contract slot 1, 2 or 3 of `t` with v. The result is the matrix of the map
    from the first remaining index to the second remaining index.
    """
    if isinstance(v, list):
        v = from_dense(v, t.field)
    d1, d2, d3 = t.dims
    size = {1: d1, 2: d2, 3: d3}.get(slot)
    if size is None:
        raise InputError(f"Slot must be 1, 2 or 3, got {slot}")
    if any(i >= size for i in v):
        raise InputError(f"Vector does not fit slot {slot} of dimension {size}")
    if slot == 1:
        return Matrix.from_images(d3, d2, t.field, lambda j: t.apply(v, {j: t.field.one()}))
    if slot == 2:
        return Matrix.from_images(d3, d1, t.field, lambda i: t.apply({i: t.field.one()}, v))

    def image_of(i: int) -> Vector:
        out: Vector = {}
        for j, fiber in t._data.get(i, {}).items():
            total = t.field.zero()
            for k, c in v.items():
                if k in fiber:
                    total = total + c * fiber[k]
            if total:
                out[j] = total
        return out

    return Matrix.from_images(d2, d1, t.field, image_of)


def proportionality(A: Matrix, B: Matrix) -> Scalar | None:
    """
    The scalar c with A = c·B, or None. Zero patterns must coincide and the
    elementwise ratio must be constant; two zero matrices give c = 1.
    """
    if A.shape != B.shape:
        return None
    ratio = None
    for ca, cb in zip(A.columns(), B.columns()):
        if set(ca) != set(cb):
            return None
        for i, a in ca.items():
            r = a / cb[i]
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
    return ratio if ratio is not None else A.field.one()
