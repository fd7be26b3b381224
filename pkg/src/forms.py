"""
forms.py
--------
Equivariant noncommutative differential forms Ω_H(A) = H ⊗ Ω(A) and everything built on them.

Key behaviors:
- Ω^k(A) = A⁺ ⊗ A^{⊗k} for k ≥ 1 and Ω⁰(A) = A; the basis element a₀da₁…da_k is the
  tuple (a₀, a₁, …, a_k) at index a₀·n^k + Σ a_i n^{k−i}, with a₀ = n standing for 1 ∈ A⁺
- On H ⊗ Ω^k the basis x ⊗ ω sits at x·dim Ω^k + ω; H acts by t·(x⊗ω) = t₃xS(t₁) ⊗ t₂·ω
  and Ĥ by f·(x⊗ω) = (f⇀x) ⊗ ω
- d, b, κ, B, T are assembled as exact matrices; κ and B are built twice (from their
  definitions and from closed formulas) and compared
- Hodge levels θⁿ and the X-complex are returned as ayd.Paracomplex objects
- The truncated tensor algebra T_N A carries the Fedosov product ω∘η = ωη − dωdη
- xdiff_check compares the X-complex of T_N A with the closed ∂₀, ∂₁ formulas on θΩ_H(A)
- stability_trace builds the trace map X_H(l(b; B)) → X_H(B) and its checks
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Callable

import pandas as pd
from dotenv import load_dotenv

from action import (
    HAlgebra,
    HModule,
    PairedSpace,
    admissible_vector,
    bilinear,
    diagonal_action,
    is_linear_map,
    module_from_matrices,
    pairing_algebra,
    scalar_algebra,
    unitarize,
    validate_halgebra,
)
from ayd import (
    AydModule,
    Paracomplex,
    ParamixedComplex,
    ayd_from_matrices,
    ayd_map_witness,
    direct_sum_ayd,
    quotient_module,
    validate_ayd,
    validate_paracomplex,
)
from checks import InputError, ValidationReport, progress
from exactla import (
    Matrix,
    Scalar,
    Subspace,
    Tensor3,
    Vector,
    block_matrix,
    direct_sum,
    first_mismatch,
    image,
    quotient_maps,
    render_vector,
    unit,
)
from hopf import (
    HopfAlgebra,
    antipode,
    antipode_inv,
    comul,
    hit_matrix,
    left_mult_matrix,
    right_mult_matrix,
    sweedler,
)

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_DEGREE = int(os.getenv("HOPFCYC_DEGREE", "3"))

Form = dict[tuple, Scalar]
EqForm = dict[tuple[int, tuple], Scalar]


def _acc(out: dict, key, c) -> None:
    new = out[key] + c if key in out else c
    if new:
        out[key] = new
    else:
        out.pop(key, None)


# ── Forms on the tuple basis ─────────────────────────────────────────────────

class FormCalculus:
    """
    Products, d and the H-action on Ω(A), with forms held as {basis tuple: coefficient}.

    Right multiplication uses (ω′da)c = ω′d(ac) − (ω′a)dc recursively, so every
    product is reduced to the normal form a₀da₁…da_k.
    """

    def __init__(self, A: HAlgebra):
        self.algebra = A
        self.plus = unitarize(A)
        self.hopf = A.hopf
        self.field = A.field
        self.n = A.dim
        self.unit_index = A.dim
        self._rmul_cache: dict[tuple, Form] = {}
        self._act_cache: dict[tuple, Form] = {}
        self._modules: dict[int, HModule] = {}

    # indexing

    def dim(self, k: int) -> int:
        return self.n if k == 0 else (self.n + 1) * self.n ** k

    def encode(self, key: tuple) -> int:
        if len(key) == 1:
            if key[0] >= self.n:
                raise InputError("1 ∈ A⁺ is not a degree-0 form of A")
            return key[0]
        idx = key[0]
        for a in key[1:]:
            idx = idx * self.n + a
        return idx

    def decode(self, k: int, idx: int) -> tuple:
        if k == 0:
            return (idx,)
        digits = []
        for _ in range(k):
            idx, r = divmod(idx, self.n)
            digits.append(r)
        return (idx, *reversed(digits))

    def to_vector(self, form: Form) -> Vector:
        return {self.encode(key): c for key, c in form.items()}

    def from_vector(self, k: int, v: Vector) -> Form:
        return {self.decode(k, i): c for i, c in v.items()}

    # algebra

    def _plus(self, a: int, b: int) -> Vector:
        return self.plus.mult.fiber(a, b)

    def append_d(self, form: Form, b: Vector) -> Form:
        """ω ↦ ω·db for b ∈ A."""
        out: Form = {}
        for key, c in form.items():
            for j, v in b.items():
                _acc(out, key + (j,), c * v)
        return out

    def _rmul_key(self, key: tuple, a: int) -> Form:
        cached = self._rmul_cache.get((key, a))
        if cached is not None:
            return cached
        one = self.field.one()
        if len(key) == 1:
            out = {(p,): v for p, v in self._plus(key[0], a).items()}
        else:
            head, last = key[:-1], key[-1]
            out = self.append_d({head: one}, self.algebra.mult.fiber(last, a))
            for k2, v in self.append_d(self._rmul_key(head, last), {a: one}).items():
                _acc(out, k2, -v)
        self._rmul_cache[(key, a)] = out
        return out

    def right_mul(self, form: Form, a: int) -> Form:
        out: Form = {}
        for key, c in form.items():
            for k2, v in self._rmul_key(key, a).items():
                _acc(out, k2, c * v)
        return out

    def left_mul(self, c: Vector, form: Form) -> Form:
        """c·ω for c ∈ A⁺ given over the A⁺ basis."""
        out: Form = {}
        for key, coef in form.items():
            for ci, cv in c.items():
                for p, pv in self._plus(ci, key[0]).items():
                    _acc(out, (p,) + key[1:], coef * cv * pv)
        return out

    def product(self, left: Form, right: Form) -> Form:
        out: Form = {}
        one = self.field.one()
        for key, c in right.items():
            acc = left if key[0] == self.unit_index else self.right_mul(left, key[0])
            for a in key[1:]:
                acc = self.append_d(acc, {a: one})
            for k2, v in acc.items():
                _acc(out, k2, c * v)
        return out

    def d(self, form: Form) -> Form:
        return {(self.unit_index,) + key: c for key, c in form.items() if key[0] != self.unit_index}

    # H-action, diagonal over the slots

    def _act_key(self, t: int, key: tuple) -> Form:
        cached = self._act_cache.get((t, key))
        if cached is not None:
            return cached
        H = self.hopf
        mats = self.plus.module.matrices
        out: Form = {}
        for legs, c in sweedler(H, H.basis(t), len(key)).items():
            partial: dict[tuple, Scalar] = {(): c}
            for leg, a in zip(legs, key):
                col = mats[leg].column(a)
                partial = {p + (i,): pv * v for p, pv in partial.items() for i, v in col.items()}
                if not partial:
                    break
            for k2, v in partial.items():
                _acc(out, k2, v)
        self._act_cache[(t, key)] = out
        return out

    def act(self, t: Vector, form: Form) -> Form:
        out: Form = {}
        for ti, tc in t.items():
            for key, c in form.items():
                for k2, v in self._act_key(ti, key).items():
                    _acc(out, k2, tc * c * v)
        return out

    def omega_module(self, k: int) -> HModule:
        """Ω^k(A) with the diagonal H-action."""
        if k not in self._modules:
            A = self.algebra
            if k == 0:
                self._modules[k] = A.module
            else:
                self._modules[k] = diagonal_action(self.hopf, [self.plus.module] + [A.module] * k,
                                                   f"Ω^{k}({A.name})")
        return self._modules[k]


# ── Equivariant operators ────────────────────────────────────────────────────

def _equivariant_matrix(calc: FormCalculus, k_src: int, k_tgt: int,
                        image_fn: Callable[[int, tuple], EqForm]) -> Matrix:
    H = calc.hopf
    dim_s, dim_t = calc.dim(k_src), calc.dim(k_tgt)

    def column(j: int) -> Vector:
        x, idx = divmod(j, dim_s)
        out: Vector = {}
        for (y, key), c in image_fn(x, calc.decode(k_src, idx)).items():
            _acc(out, y * dim_t + calc.encode(key), c)
        return out

    return Matrix.from_images(H.dim * dim_t, H.dim * dim_s, calc.field, column)


def _lift(x: int, form: Form, c=None) -> EqForm:
    return {(x, key): (v if c is None else c * v) for key, v in form.items()}


def _twisted(calc: FormCalculus, x: int) -> list[tuple[int, Vector, Scalar]]:
    """Δ(x) as (x₂, S⁻¹(x₁), coefficient) triples."""
    H = calc.hopf
    return [(j, antipode_inv(H, H.basis(i)), c) for (i, j), c in comul(H, H.basis(x)).items()]


def d_image(calc: FormCalculus, x: int, key: tuple) -> EqForm:
    return _lift(x, calc.d({key: calc.field.one()}))


def b_image(calc: FormCalculus, x: int, key: tuple) -> EqForm:
    """b(x⊗ωda) = (−1)^{|ω|}(x⊗ωa − x₂⊗(S⁻¹(x₁)·a)ω)."""
    one = calc.field.one()
    k = len(key) - 1
    sign = 1 if (k - 1) % 2 == 0 else -1
    omega, a = {key[:-1]: one}, key[-1]
    out: EqForm = {}
    for k2, v in calc.right_mul(omega, a).items():
        _acc(out, (x, k2), sign * v)
    for x2, s, c in _twisted(calc, x):
        moved = calc.act(s, {(a,): one})
        coeffs = {kk[0]: v for kk, v in moved.items()}
        for k2, v in calc.left_mul(coeffs, omega).items():
            _acc(out, (x2, k2), -sign * c * v)
    return out


def T_image(calc: FormCalculus, x: int, key: tuple) -> EqForm:
    """T(x⊗ω) = x₂ ⊗ S⁻¹(x₁)·ω."""
    out: EqForm = {}
    for x2, s, c in _twisted(calc, x):
        for k2, v in calc.act(s, {key: calc.field.one()}).items():
            _acc(out, (x2, k2), c * v)
    return out


def kappa_image(calc: FormCalculus, x: int, key: tuple) -> EqForm:
    """Closed form: x₂⊗S⁻¹(x₁)·a on degree 0, (−1)^{k−1} x₂⊗(S⁻¹(x₁)·da)ω on degree k."""
    k = len(key) - 1
    if k == 0:
        return T_image(calc, x, key)
    one = calc.field.one()
    sign = 1 if (k - 1) % 2 == 0 else -1
    omega, a = {key[:-1]: one}, key[-1]
    out: EqForm = {}
    for x2, s, c in _twisted(calc, x):
        moved = calc.act(s, {(a,): one})
        da = {(calc.unit_index, kk[0]): v for kk, v in moved.items()}
        for k2, v in calc.product(da, omega).items():
            _acc(out, (x2, k2), sign * c * v)
    return out


def B_cyclic_image(calc: FormCalculus, x: int, key: tuple) -> EqForm:
    """B(x⊗a₀da₁…da_k) = Σ_i (−1)^{ki} x₂ ⊗ S⁻¹(x₁)·(da_{k+1−i}…da_k) da₀…da_{k−i}."""
    if key[0] == calc.unit_index:
        return {}
    one = calc.field.one()
    k = len(key) - 1
    u = calc.unit_index
    out: EqForm = {(x, (u,) + key): one}
    for i in range(1, k + 1):
        sign = 1 if (k * i) % 2 == 0 else -1
        block = {(u,) + key[k + 1 - i:]: one}
        rest = {(u,) + key[:k + 1 - i]: one}
        for x2, s, c in _twisted(calc, x):
            moved = calc.act(s, block)
            for k2, v in calc.product(moved, rest).items():
                _acc(out, (x2, k2), sign * c * v)
    return out


def operator_matrix(calc: FormCalculus, name: str, k: int) -> Matrix:
    """d, b, T, κ (closed form) or B (cyclic form) on H⊗Ω^k."""
    image_fn, shift = {
        "d": (d_image, 1),
        "b": (b_image, -1),
        "T": (T_image, 0),
        "kappa": (kappa_image, 0),
        "B": (B_cyclic_image, 1),
    }[name]
    if name == "b" and k == 0:
        raise InputError("b is not defined on degree 0")
    return _equivariant_matrix(calc, k, k + shift, lambda x, key: image_fn(calc, x, key))


def equivariant_module(calc: FormCalculus, k: int) -> AydModule:
    """Ω^k_H(A) with t·(x⊗ω) = t₃xS(t₁)⊗t₂·ω and f·(x⊗ω) = (f⇀x)⊗ω."""
    H = calc.hopf
    rho = calc.omega_module(k).matrices
    dim = calc.dim(k)
    h_mats = []
    for t in range(H.dim):
        acc = Matrix.zeros(H.dim * dim, H.dim * dim, calc.field)
        for (i, j, l), c in sweedler(H, H.basis(t), 3).items():
            conj = left_mult_matrix(H, H.basis(l)) @ right_mult_matrix(H, antipode(H, H.basis(i)))
            acc = acc + conj.kron(rho[j]).scale(c)
        h_mats.append(acc)
    ident = Matrix.identity(dim, calc.field)
    hhat_mats = [hit_matrix(H, H.basis(f), "left").kron(ident) for f in range(H.dim)]
    return ayd_from_matrices(H, h_mats, hhat_mats, f"Ω^{k}_H({calc.algebra.name})")


# ── Equivariant forms ────────────────────────────────────────────────────────

@dataclass(eq=False)
class EquivariantForms:
    """Ω^k_H(A) for k = 0..top with operator matrices keyed by source degree."""

    calculus: FormCalculus
    top: int
    d: dict[int, Matrix] = field(default_factory=dict)
    b: dict[int, Matrix] = field(default_factory=dict)
    T: dict[int, Matrix] = field(default_factory=dict)
    kappa: dict[int, Matrix] = field(default_factory=dict)
    kappa_def: dict[int, Matrix] = field(default_factory=dict)
    B: dict[int, Matrix] = field(default_factory=dict)
    B_cyclic: dict[int, Matrix] = field(default_factory=dict)
    report: ValidationReport = field(default_factory=lambda: ValidationReport("Equivariant forms"))
    _modules: dict[int, AydModule] = field(default_factory=dict)

    @property
    def algebra(self) -> HAlgebra:
        return self.calculus.algebra

    @property
    def hopf(self) -> HopfAlgebra:
        return self.calculus.hopf

    @property
    def degree(self) -> int:
        return self.top - 1

    def module(self, k: int) -> AydModule:
        if k not in self._modules:
            self._modules[k] = equivariant_module(self.calculus, k)
        return self._modules[k]

    def identity(self, k: int) -> Matrix:
        return Matrix.identity(self.hopf.dim * self.calculus.dim(k), self.calculus.field)


def build_forms(A: HAlgebra, degree: int | None = None, full: bool = True) -> EquivariantForms:
    """
    Spaces Ω⁰_H … Ω^{degree+1}_H with d, b on all of them.

    With `full`, also T, κ (closed form everywhere, from 1 − (bd + db) below the top) and
    B (Σ_j κ^j d and the cyclic formula) on degrees ≤ `degree`.
    """
    degree = DEFAULT_DEGREE if degree is None else degree
    if degree < 1:
        raise InputError(f"Forms need degree ≥ 1, got {degree}")
    calc = FormCalculus(A)
    top = degree + 1
    F = EquivariantForms(calc, top, report=ValidationReport(f"Equivariant forms · {A.name} over {A.hopf.name}"))
    logger.info(f"Ω_H({A.name}) up to degree {top}: dims "
                f"{[A.hopf.dim * calc.dim(k) for k in range(top + 1)]}")

    for k in progress(range(top), "d, b"):
        F.d[k] = operator_matrix(calc, "d", k)
        F.b[k + 1] = operator_matrix(calc, "b", k + 1)
    for k in range(top - 1):
        sq = F.d[k + 1] @ F.d[k]
        F.report.add_equal(f"d² = 0 on degree {k}", sq, Matrix.zeros(sq.rows, sq.cols, sq.field))
    if not full:
        return F

    for k in progress(range(top + 1), "T, κ"):
        F.T[k] = operator_matrix(calc, "T", k)
        F.kappa[k] = operator_matrix(calc, "kappa", k)
    for k in range(top):
        homotopy = F.b[k + 1] @ F.d[k]
        if k >= 1:
            homotopy = homotopy + F.d[k - 1] @ F.b[k]
        F.kappa_def[k] = F.identity(k) - homotopy
        F.report.add(f"κ = 1 − (bd + db) matches the closed form on degree {k}",
                     F.kappa_def[k] == F.kappa[k], "", F.kappa_def[k].first_difference(F.kappa[k]))
    for k in progress(range(top), "B"):
        kappa_next = F.kappa[k + 1]
        acc, power = F.d[k], F.d[k]
        for _ in range(k):
            power = kappa_next @ power
            acc = acc + power
        F.B[k] = acc
        F.B_cyclic[k] = operator_matrix(calc, "B", k)
        F.report.add(f"Σ κ^j d matches the cyclic formula for B on degree {k}",
                     F.B[k] == F.B_cyclic[k], "", F.B[k].first_difference(F.B_cyclic[k]))
    logger.info(F.report.summary())
    return F


def forms_ayd_report(F: EquivariantForms, degrees: range | None = None) -> ValidationReport:
    """Every Ω^k_H is an AYD module, every operator is an AYD map, and T matches the coaction."""
    report = ValidationReport(f"Ω_H as AYD modules · {F.algebra.name}")
    degrees = degrees if degrees is not None else range(F.top)
    for k in degrees:
        M = F.module(k)
        report.extend(validate_ayd(M), prefix=f"Ω^{k}_H")
        if k in F.T:
            report.add(f"T formula matches the coaction T on degree {k}", F.T[k] == M.T, "",
                       F.T[k].first_difference(M.T))
        for label, ops, shift in (("d", F.d, 1), ("b", F.b, -1), ("κ", F.kappa, 0), ("B", F.B, 1)):
            if k in ops and k + shift in degrees:
                witness = ayd_map_witness(ops[k], M, F.module(k + shift))
                report.add(f"{label} on degree {k} is an AYD map", witness is None, "", witness)
    return report


def kappa_identities(F: EquivariantForms, degrees: range | None = None) -> ValidationReport:
    """
    The κ-identity suite, degree by degree:
      κ^{n+1}d = Td,  κ^n = T + bκ^n d,  κ^n b = bT,  κ^{n+1} = (id − db)T,
      (κ^{n+1} − T)(κ^n − T) = 0,  Bb + bB = id − T,
    plus b² = 0, B² = 0 and commutation of d, b, κ, B with T.
    """
    report = ValidationReport(f"κ identities · {F.algebra.name} over {F.hopf.name}")
    if not F.kappa:
        raise InputError("κ identities need forms built with full=True")
    degrees = degrees if degrees is not None else range(F.top)

    def check(name: str, lhs: Matrix, rhs: Matrix) -> None:
        report.add(name, lhs == rhs, "", lhs.first_difference(rhs))

    for n in degrees:
        T, kap, ident = F.T[n], F.kappa[n], F.identity(n)
        check(f"κ^(n+1) d = T d on degree {n}", (F.kappa[n + 1] ** (n + 1)) @ F.d[n], F.T[n + 1] @ F.d[n])
        check(f"κ^n = T + b κ^n d on degree {n}", kap ** n, T + F.b[n + 1] @ (F.kappa[n + 1] ** n) @ F.d[n])
        if n >= 1:
            check(f"κ^n b = b T on degree {n}", (F.kappa[n - 1] ** n) @ F.b[n], F.b[n] @ T)
            check(f"κ^(n+1) = (id − db) T on degree {n}", kap ** (n + 1), (ident - F.d[n - 1] @ F.b[n]) @ T)
        else:
            check("κ^(n+1) = (id − db) T on degree 0", kap, T)
        product = ((kap ** (n + 1)) - T) @ ((kap ** n) - T)
        check(f"(κ^(n+1) − T)(κ^n − T) = 0 on degree {n}", product, Matrix.zeros(ident.rows, ident.cols, ident.field))
        lhs = F.b[n + 1] @ F.B[n]
        if n >= 1:
            lhs = lhs + F.B[n - 1] @ F.b[n]
        check(f"Bb + bB = id − T on degree {n}", lhs, ident - T)
        if n >= 2:
            sq = F.b[n - 1] @ F.b[n]
            report.add_equal(f"b² = 0 on degree {n}", sq, Matrix.zeros(sq.rows, sq.cols, sq.field))
        if n + 1 in F.B:
            sq = F.B[n + 1] @ F.B[n]
            report.add_equal(f"B² = 0 on degree {n}", sq, Matrix.zeros(sq.rows, sq.cols, sq.field))
        for label, ops, shift in (("d", F.d, 1), ("b", F.b, -1), ("κ", F.kappa, 0), ("B", F.B, 1)):
            if n in ops and n + shift in F.T:
                check(f"{label} commutes with T on degree {n}", F.T[n + shift] @ ops[n], ops[n] @ T)
    logger.info(report.summary())
    return report


def paramixed(F: EquivariantForms) -> ParamixedComplex:
    """(Ω_H(A), b, B) as a paramixed complex on degrees 0..top."""
    return ParamixedComplex([F.module(k) for k in range(F.top + 1)], dict(F.b), dict(F.B),
                            name=f"Ω_H({F.algebra.name})")


def dimension_table(F: EquivariantForms) -> pd.DataFrame:
    calc = F.calculus
    rows = []
    for k in range(F.top + 1):
        rows.append({
            "degree": k,
            "dim Ω^n(A)": calc.dim(k),
            "dim Ω^n_H(A)": F.hopf.dim * calc.dim(k),
            "rank d": F.d[k].rank() if k in F.d else None,
            "rank b": F.b[k].rank() if k in F.b else None,
            "rank B": F.B[k].rank() if k in F.B else None,
            "T = id": F.T[k].is_identity() if k in F.T else None,
        })
    return pd.DataFrame(rows)


# ── Hodge tower and X-complex ────────────────────────────────────────────────

@dataclass(eq=False)
class HodgeLevel:
    level: int
    paracomplex: Paracomplex
    even_degrees: list[int]
    odd_degrees: list[int]
    projection: Matrix      # Ω^n_H → Ω^n_H / b(Ω^{n+1}_H)
    lift: Matrix
    report: ValidationReport

    @property
    def even(self) -> AydModule:
        return self.paracomplex.even

    @property
    def odd(self) -> AydModule:
        return self.paracomplex.odd


def hodge_level(F: EquivariantForms, n: int) -> HodgeLevel:
    """θⁿ = Ω⁰_H ⊕ … ⊕ Ω^{n−1}_H ⊕ Ω^n_H/b(Ω^{n+1}_H) with differential B + b."""
    if not 1 <= n <= F.top - 1:
        raise InputError(f"Hodge level {n} needs forms up to degree {n + 1} (have {F.top})")
    report = ValidationReport(f"Hodge level θ^{n} · {F.algebra.name} over {F.hopf.name}")
    boundaries = image(F.b[n + 1])
    projection, lift = quotient_maps(boundaries)
    sq = F.b[n] @ F.b[n + 1]
    report.add_equal("B + b descends to the quotient", sq, Matrix.zeros(sq.rows, sq.cols, sq.field),
                      "b vanishes on b(Ω^{n+1})")
    report.values["dim Ω^n_H / b(Ω^{n+1}_H)"] = projection.rows

    pieces = {j: F.module(j) for j in range(n)}
    pieces[n] = quotient_module(F.module(n), boundaries)

    def up(j: int) -> Matrix:
        return projection @ F.B[j] if j + 1 == n else F.B[j]

    def down(j: int) -> Matrix:
        return F.b[n] @ lift if j == n else F.b[j]

    even = [j for j in range(n + 1) if j % 2 == 0]
    odd = [j for j in range(n + 1) if j % 2 == 1]
    even_dims = [pieces[j].dim for j in even]
    odd_dims = [pieces[j].dim for j in odd]

    def assemble(sources: list[int], targets: list[int]) -> Matrix:
        grid: list[list[Matrix | None]] = []
        for tj in targets:
            row: list[Matrix | None] = []
            for sj in sources:
                if tj == sj + 1:
                    row.append(up(sj))
                elif tj == sj - 1:
                    row.append(down(sj))
                else:
                    row.append(None)
            grid.append(row)
        return block_matrix(grid, [pieces[j].dim for j in targets], [pieces[j].dim for j in sources], F.hopf.field)

    P = Paracomplex(
        even=direct_sum_ayd(*(pieces[j] for j in even)),
        odd=direct_sum_ayd(*(pieces[j] for j in odd)),
        d0=assemble(even, odd),
        d1=assemble(odd, even),
        name=f"θ^{n}Ω_H({F.algebra.name})",
    )
    report.extend(validate_paracomplex(P), prefix="")
    report.values["even dims"] = even_dims
    report.values["odd dims"] = odd_dims
    logger.info(report.summary())
    return HodgeLevel(n, P, even, odd, projection, lift, report)


def x_complex(A: HAlgebra, F: EquivariantForms | None = None) -> HodgeLevel:
    """X_H(A) = θ¹: Ω⁰_H(A) ⇄ Ω¹_H(A)/b(Ω²_H(A)), d upward and b downward."""
    F = F or build_forms(A, degree=1)
    return hodge_level(F, 1)


# ── Functoriality ────────────────────────────────────────────────────────────

def algebra_hom_forms(phi: Matrix, A: HAlgebra, B: HAlgebra, k: int) -> Matrix:
    """Ω_H(φ) = id_H ⊗ Ω(φ) on degree k, with φ⁺ fixing the adjoined unit."""
    if phi.shape != (B.dim, A.dim):
        raise InputError(f"Map shape {phi.shape} does not match {A.name} → {B.name}")
    H = A.hopf
    plus = direct_sum(phi, Matrix.identity(1, A.field))
    acc = phi if k == 0 else plus
    for _ in range(k):
        acc = acc.kron(phi)
    return Matrix.identity(H.dim, A.field).kron(acc)


def algebra_hom_theta(phi: Matrix, FA: EquivariantForms, FB: EquivariantForms,
                      LA: HodgeLevel, LB: HodgeLevel) -> tuple[Matrix, Matrix]:
    """The induced map θⁿΩ_H(A) → θⁿΩ_H(B) as (even, odd) block matrices."""
    n = LA.level
    if LB.level != n:
        raise InputError(f"Hodge levels differ: {n} vs {LB.level}")

    def piece(j: int) -> Matrix:
        m = algebra_hom_forms(phi, FA.algebra, FB.algebra, j)
        return LB.projection @ m @ LA.lift if j == n else m

    even = direct_sum(*(piece(j) for j in LA.even_degrees))
    odd = direct_sum(*(piece(j) for j in LA.odd_degrees))
    return even, odd


# ── Truncated tensor algebra ─────────────────────────────────────────────────

@dataclass(eq=False)
class TruncatedTensorAlgebra:
    algebra: HAlgebra
    base: HAlgebra
    level: int
    calculus: FormCalculus
    offsets: dict[int, int]     # form degree 2j → first basis index
    tau: Matrix                 # T_N A → A
    sigma: Matrix               # A → T_N A
    report: ValidationReport

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def index(self, key: tuple) -> int:
        return self.offsets[len(key) - 1] + self.calculus.encode(key)

    def key(self, i: int) -> tuple:
        for deg in sorted(self.offsets, reverse=True):
            if i >= self.offsets[deg]:
                return self.calculus.decode(deg, i - self.offsets[deg])
        raise InputError(f"Index {i} outside T_{self.level}")


def fedosov(calc: FormCalculus, left: Form, right: Form, cap: int) -> Form:
    """ω∘η = ωη − dωdη on even forms, dropping components above degree `cap`."""
    out: Form = {}
    for k2, v in calc.product(left, right).items():
        if len(k2) - 1 <= cap:
            _acc(out, k2, v)
    for k2, v in calc.product(calc.d(left), calc.d(right)).items():
        if len(k2) - 1 <= cap:
            _acc(out, k2, -v)
    return out


def tensor_algebra(A: HAlgebra, N: int, check: bool = True) -> TruncatedTensorAlgebra:
    """T_N A = ⊕_{j≤N} Ω^{2j}(A) with the Fedosov product truncated above degree 2N."""
    if N < 0:
        raise InputError(f"Truncation level must be ≥ 0, got {N}")
    calc = FormCalculus(A)
    H, fld, n = A.hopf, A.field, A.dim
    offsets, total = {}, 0
    for j in range(N + 1):
        offsets[2 * j] = total
        total += calc.dim(2 * j)
    keys = [calc.decode(deg, i) for deg in sorted(offsets) for i in range(calc.dim(deg))]
    where = {key: i for i, key in enumerate(keys)}
    one = fld.one()

    entries = []
    for p in progress(range(total), "Fedosov product"):
        for q in range(total):
            if len(keys[p]) + len(keys[q]) - 2 > 2 * N:
                continue
            for k2, v in fedosov(calc, {keys[p]: one}, {keys[q]: one}, 2 * N).items():
                entries.append((p, q, where[k2], v))
    mult = Tensor3.from_entries((total, total, total), fld, entries)
    mats = [direct_sum(*(calc.omega_module(deg).matrices[t] for deg in sorted(offsets))) for t in range(H.dim)]
    module = module_from_matrices(H, mats, f"T_{N}({A.name})")
    TA = HAlgebra(module, mult, None, name=f"T_{N}({A.name})")

    tau = Matrix.from_images(n, total, fld, lambda i: {i: one} if i < n else {})
    sigma = Matrix.from_images(total, n, fld, lambda a: {a: one})
    report = ValidationReport(f"Truncated tensor algebra T_{N}({A.name})")
    result = TruncatedTensorAlgebra(TA, A, N, calc, offsets, tau, sigma, report)
    report.values["dim"] = total
    if check:
        _check_tensor_algebra(result)
    logger.info(f"T_{N}({A.name}): dim {total}")
    return result


def _check_tensor_algebra(T: TruncatedTensorAlgebra) -> None:
    A, TA, report = T.base, T.algebra, T.report
    fld, n, N = A.field, A.dim, T.level
    report.extend(validate_halgebra(TA), prefix="")

    witness = first_mismatch(
        ({"p": p, "q": q}, T.tau.apply(TA.mult.fiber(p, q)),
         A.mult.apply(T.tau.column(p), T.tau.column(q)))
        for p in range(T.dim) for q in range(T.dim)
    )
    report.add("τ is multiplicative", witness is None, "τ(ω∘η) = τ(ω)τ(η)", witness)
    report.add_equal("σ is a section of τ", T.tau @ T.sigma, Matrix.identity(T.tau.rows, fld))
    tau_linear = is_linear_map(T.tau, TA.module, A.module)
    report.add("τ is H-linear", tau_linear is None, "", tau_linear)

    J = Subspace.span(T.dim, fld, (unit(i, fld) for i in range(n, T.dim)))
    power, dims = J, [J.dim]
    for _ in range(N):
        vectors = [TA.mult.apply(u, v) for u in power.basis for v in J.basis]
        power = Subspace.span(T.dim, fld, vectors)
        dims.append(power.dim)
    report.values["dims of J^k"] = dims
    report.add_count(f"J^{N + 1} = 0", power.dim, 0, f"dims of J, J², …: {dims}")

    if N >= 1:
        one = fld.one()
        bad = None
        for a in range(n):
            for b in range(n):
                curvature = dict(T.sigma.apply(A.mult.fiber(a, b)))
                for k2, v in TA.mult.fiber(a, b).items():
                    _acc(curvature, k2, -v)
                expected = {T.index((T.calculus.unit_index, a, b)): one}
                if curvature != expected or T.tau.apply(curvature):
                    bad = {"a": a, "b": b, "lhs": render_vector(curvature), "rhs": render_vector(expected)}
                    break
            if bad:
                break
        report.add("curvature σ(ab) − σ(a)∘σ(b) = da db lies in J", bad is None, "", bad)


# ── X_H(T_N A) against θΩ_H(A) ───────────────────────────────────────────────

def xdiff_check(A: HAlgebra, N: int) -> ValidationReport:
    """
    Pull the X-complex differentials of T_N A back along
      x⊗ω ↦ x⊗ω (even forms) and x⊗ωda ↦ x⊗ω·Da (odd forms, D the differential of T_N A)
    and compare with ∂₁ = b − (1+κ)d on odd forms and ∂₀ = −Σ_{j<m} κ^{2j}b + B on Ω^{2m}.
    Degrees up to 2N − 2 are compared; 2N − 1 and 2N are reported as unchecked.
    """
    if N < 1:
        raise InputError(f"xdiff_check needs N ≥ 1, got {N}")
    H, fld = A.hopf, A.field
    d = H.dim
    report = ValidationReport(f"X-complex of T_{N}({A.name}) against θΩ_H over {H.name}")
    T = tensor_algebra(A, N, check=False)
    FA = build_forms(A, degree=2 * N)
    FT = build_forms(T.algebra, degree=1, full=False)
    calc, D = FA.calculus, T.dim
    one = fld.one()
    omega1_dim = FT.calculus.dim(1)

    def iota_even(k: int) -> Matrix:
        dim_k = calc.dim(k)
        return Matrix.from_images(d * D, d * dim_k, fld,
                                  lambda j: {(j // dim_k) * D + T.offsets[k] + j % dim_k: one})

    def iota_odd(k: int) -> Matrix:
        dim_k = calc.dim(k)

        def column(j: int) -> Vector:
            x, idx = divmod(j, dim_k)
            key = calc.decode(k, idx)
            nu, a = key[:-1], key[-1]
            nu_idx = D if (len(nu) == 1 and nu[0] == calc.unit_index) else T.index(nu)
            return {x * omega1_dim + nu_idx * D + a: one}

        return Matrix.from_images(d * omega1_dim, d * dim_k, fld, column)

    boundaries = image(FT.b[2])
    projection, _ = quotient_maps(boundaries)
    safe = 2 * N - 2
    for k in range(safe + 1):
        if k % 2 == 1:
            lhs = FT.b[1] @ iota_odd(k)
            correction = FA.d[k] + FA.kappa[k + 1] @ FA.d[k]
            rhs = iota_even(k - 1) @ FA.b[k] - iota_even(k + 1) @ correction
            report.add(f"∂₁ = b − (1+κ)d on degree {k}", lhs == rhs, "", lhs.first_difference(rhs))
            iota = iota_odd(k)
            report.add_count(f"odd embedding injective on degree {k}", iota.rank(), iota.cols)
            report.values[f"rank modulo b on degree {k}"] = (projection @ iota).rank()
        else:
            m = k // 2
            diff = FT.d[0] @ iota_even(k) - iota_odd(k + 1) @ FA.B[k]
            if m >= 1:
                chain = FA.b[k]
                acc = chain
                kap2 = FA.kappa[k - 1] @ FA.kappa[k - 1]
                for _ in range(m - 1):
                    chain = kap2 @ chain
                    acc = acc + chain
                diff = diff + iota_odd(k - 1) @ acc
            bad = next((j for j, col in enumerate(diff.columns()) if not boundaries.contains(col)), None)
            report.add(f"∂₀ = −Σ κ^(2j) b + B on degree {k}", bad is None, "modulo b(Ω²_H(T_N A))",
                       None if bad is None else {"column": bad, "lhs": render_vector(diff.column(bad)),
                                                 "rhs": "an element of b(Ω²_H(T_N A))"})
            iota = iota_even(k)
            report.add_count(f"even embedding injective on degree {k}", iota.rank(), iota.cols)
    report.values["unchecked degrees"] = [2 * N - 1, 2 * N]
    logger.info(report.summary())
    return report


# ── Stability trace ──────────────────────────────────────────────────────────

@dataclass(eq=False)
class StabilityTrace:
    tr0: Matrix              # Ω⁰_H(l) → Ω⁰_H(B)
    tr1: Matrix              # Ω¹_H(l) → Ω¹_H(B)
    source: HAlgebra         # l(b; B)
    target: HAlgebra
    iota: Matrix | None      # B → l(b; B), a ↦ u⊗a⊗u
    report: ValidationReport

    def on_x_complex(self, X_source: HodgeLevel, X_target: HodgeLevel) -> tuple[Matrix, Matrix]:
        """The chain map X_H(l(b; B)) → X_H(B) as (even, odd) matrices."""
        return self.tr0, X_target.projection @ self.tr1 @ X_source.lift


def stability_trace(P: PairedSpace, B_alg: HAlgebra, u: Vector | None = None,
                    quotient_check: bool = True) -> StabilityTrace:
    """
    tr(x⊗(v₀⊗a₀⊗w₀)) = b(S⁻¹(x₁)·w₀, v₀) x₂⊗a₀ on degree 0, and on degree 1
      tr(x⊗T₀dT₁) = b(S⁻¹(x₁)·w₁, v₀) b(w₀, v₁) x₂⊗a₀da₁,  tr(x⊗dT₁) = b(S⁻¹(x₁)·w₁, v₁) x₂⊗da₁.
    """
    H, fld = B_alg.hopf, B_alg.field
    d, m, nb = H.dim, P.dim, B_alg.dim
    one = fld.one()
    l = pairing_algebra(P, B_alg)
    cl, cb = FormCalculus(l), FormCalculus(B_alg)
    dl = l.dim
    report = ValidationReport(f"Stability trace · {P.name} with {B_alg.name}")

    def split(T: int) -> tuple[int, int, int]:
        v, rest = divmod(T, nb * m)
        a, w = divmod(rest, m)
        return v, a, w

    def twisted_pairing(s: Vector, w: int, v: int) -> Scalar:
        moved: Vector = {}
        for t, c in s.items():
            for i, val in P.module.matrices[t].column(w).items():
                _acc(moved, i, c * val)
        return bilinear(P, moved, unit(v, fld))

    def tr0_column(j: int) -> Vector:
        x, T = divmod(j, dl)
        v0, a0, w0 = split(T)
        out: Vector = {}
        for (i, x2), c in comul(H, H.basis(x)).items():
            val = twisted_pairing(antipode_inv(H, H.basis(i)), w0, v0)
            if val:
                _acc(out, x2 * nb + a0, c * val)
        return out

    dim_l1, dim_b1 = cl.dim(1), cb.dim(1)

    def tr1_column(j: int) -> Vector:
        x, idx = divmod(j, dim_l1)
        T0, T1 = cl.decode(1, idx)
        v1, a1, w1 = split(T1)
        out: Vector = {}
        for (i, x2), c in comul(H, H.basis(x)).items():
            s = antipode_inv(H, H.basis(i))
            if T0 == cl.unit_index:
                val, a0 = twisted_pairing(s, w1, v1), cb.unit_index
            else:
                v0, a0, w0 = split(T0)
                val = twisted_pairing(s, w1, v0) * P.pairing[w0, v1]
            if val:
                _acc(out, x2 * dim_b1 + a0 * nb + a1, c * val)
        return out

    tr0 = Matrix.from_images(d * nb, d * dl, fld, tr0_column)
    tr1 = Matrix.from_images(d * dim_b1, d * dim_l1, fld, tr1_column)

    b_l, b_b = operator_matrix(cl, "b", 1), operator_matrix(cb, "b", 1)
    lhs, rhs = tr0 @ b_l, b_b @ tr1
    report.add("tr commutes with b", lhs == rhs, "", lhs.first_difference(rhs))
    lhs, rhs = tr1 @ operator_matrix(cl, "d", 0), operator_matrix(cb, "d", 0) @ tr0
    report.add("tr commutes with d", lhs == rhs, "", lhs.first_difference(rhs))

    if quotient_check:
        boundaries = image(operator_matrix(cb, "b", 2))
        b2 = lambda x, key: b_image(cl, x, key)  # noqa: E731
        dim_l2 = cl.dim(2)
        bad = None
        for j in progress(range(d * dim_l2), "tr on b(Ω²)"):
            x, idx = divmod(j, dim_l2)
            col: Vector = {}
            for (y, key), c in b2(x, cl.decode(2, idx)).items():
                _acc(col, y * dim_l1 + cl.encode(key), c)
            image_col = tr1.apply(col)
            if not boundaries.contains(image_col):
                bad = {"column": j, "lhs": render_vector(image_col), "rhs": "an element of b(Ω²_H(B))"}
                break
        report.add("tr maps b(Ω²_H(l)) into b(Ω²_H(B))", bad is None, "", bad)

    for k, mat in ((0, tr0), (1, tr1)):
        witness = ayd_map_witness(mat, equivariant_module(cl, k), equivariant_module(cb, k))
        report.add(f"tr is H- and Ĥ-linear on degree {k}", witness is None, "", witness)

    report.extend(twisted_trace_report(P), prefix="")

    u = u if u is not None else admissible_vector(P)
    iota = None
    if u is None:
        report.values["admissible vector"] = None
    else:
        report.values["admissible vector"] = {str(i): str(c) for i, c in u.items()}

        def iota_column(a: int) -> Vector:
            out: Vector = {}
            for v, cv in u.items():
                for w, cw in u.items():
                    _acc(out, (v * nb + a) * m + w, cv * cw)
            return out

        iota = Matrix.from_images(dl, nb, fld, iota_column)
        x0 = algebra_hom_forms(iota, B_alg, l, 0)
        x1 = algebra_hom_forms(iota, B_alg, l, 1)
        report.add_equal("tr ∘ X_H(ι) = id on degree 0", tr0 @ x0, Matrix.identity(tr0.rows, fld))
        report.add_equal("tr ∘ X_H(ι) = id on degree 1", tr1 @ x1, Matrix.identity(tr1.rows, fld))
    logger.info(report.summary())
    return StabilityTrace(tr0, tr1, l, B_alg, iota, report)


def twisted_trace_report(P: PairedSpace) -> ValidationReport:
    """tr_x(T₀T₁) = tr_{x₂}((S⁻¹(x₁)·T₁)T₀) on l(b) = l(b; ℂ), with tr_x(v⊗w) = b(S⁻¹(x₁)·w, v) x₂."""
    H = P.module.hopf
    fld = H.field
    lb = pairing_algebra(P, scalar_algebra(H))
    m = P.dim
    report = ValidationReport(f"Twisted trace · {P.name}")

    def tr(x: int, T: Vector) -> Vector:
        out: Vector = {}
        for idx, c in T.items():
            v, w = divmod(idx, m)
            for (i, x2), cx in comul(H, H.basis(x)).items():
                moved: Vector = {}
                for t, s in antipode_inv(H, H.basis(i)).items():
                    for k2, val in P.module.matrices[t].column(w).items():
                        _acc(moved, k2, s * val)
                val = bilinear(P, moved, unit(v, fld))
                if val:
                    _acc(out, x2, c * cx * val)
        return out

    def rhs(x: int, T0: int, T1: int) -> Vector:
        out: Vector = {}
        for (i, x2), c in comul(H, H.basis(x)).items():
            moved: Vector = {}
            for t, s in antipode_inv(H, H.basis(i)).items():
                for k2, val in lb.module.matrices[t].column(T1).items():
                    _acc(moved, k2, s * val)
            for k2, val in tr(x2, lb.mult.apply(moved, unit(T0, fld))).items():
                _acc(out, k2, c * val)
        return out

    witness = first_mismatch(
        ({"x": x, "T0": T0, "T1": T1}, tr(x, lb.mult.fiber(T0, T1)), rhs(x, T0, T1))
        for x in range(H.dim) for T0 in range(lb.dim) for T1 in range(lb.dim)
    )
    report.add("twisted trace", witness is None, "tr_x(T₀T₁) = tr_{x₂}((S⁻¹(x₁)·T₁)T₀)", witness)
    return report
