"""
hopf.py
-------
Finite-dimensional Hopf algebras as structure-constant tensors.

Key behaviors:
- Structure tensors: mult[i][j][k] = coefficient of e_k in e_i·e_j,
  comult[k][i][j] = coefficient of e_i ⊗ e_j in Δ(e_k)
- Elements are sparse vectors; functionals are sparse vectors of dual-basis coordinates
- The dual Ĥ uses the dual basis, so the double dual has literally the same tensors
  as H; dual_hopf(dual_hopf(H)) returns H itself
- Haar functionals are solved from their invariance systems, never assumed
- Identities that hold "up to a scalar" are checked with exactla.proportionality and
  the scalar is reported, not asserted
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

from checks import InconsistencyError, InputError, ValidationReport
from exactla import (
    FieldSpec,
    Matrix,
    Scalar,
    Tensor3,
    Vector,
    axpy,
    kernel,
    proportionality,
    render_vector,
    unit,
    vec_equal,
    vec_scale,
)

logger = logging.getLogger(__name__)

Functional = dict  # dual-basis coordinates {i: f(e_i)}


@dataclass(eq=False)
class HopfAlgebra:
    field: FieldSpec
    dim: int
    mult: Tensor3
    unit: Vector
    comult: Tensor3
    counit: Functional
    antipode: Matrix
    name: str = ""
    labels: list[str] | None = None
    cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def antipode_inv(self) -> Matrix:
        try:
            return self.antipode.inverse()
        except ZeroDivisionError:
            raise InputError(f"Antipode of {self.name or 'H'} is not invertible") from None

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i}"

    def one(self) -> Vector:
        return dict(self.unit)

    def basis(self, i: int) -> Vector:
        return unit(i, self.field)

    def same_structure(self, other: "HopfAlgebra") -> bool:
        return (
            self is other
            or (self.dim == other.dim and self.field == other.field
                and self.mult == other.mult and self.comult == other.comult
                and vec_equal(self.unit, other.unit) and vec_equal(self.counit, other.counit)
                and self.antipode == other.antipode)
        )

    def __repr__(self) -> str:
        return f"HopfAlgebra({self.name or '?'}, dim={self.dim}, {self.field.describe()})"


# ── Sweedler legs ────────────────────────────────────────────────────────────

def mul(H: HopfAlgebra, x: Vector, y: Vector) -> Vector:
    return H.mult.apply(x, y)


def mul_all(H: HopfAlgebra, *factors: Vector) -> Vector:
    out = factors[0]
    for f in factors[1:]:
        out = H.mult.apply(out, f)
    return out


def comul(H: HopfAlgebra, x: Vector) -> dict[tuple[int, int], Scalar]:
    return H.comult.split(x)


def sweedler(H: HopfAlgebra, x: Vector, legs: int) -> dict[tuple, Scalar]:
    """Iterated coproduct x ↦ x_(1) ⊗ … ⊗ x_(legs) as {index tuple: coefficient}."""
    terms: dict[tuple, Scalar] = {(i,): c for i, c in x.items()}
    for _ in range(legs - 1):
        nxt: dict[tuple, Scalar] = {}
        for key, c in terms.items():
            for (i, j), v in H.comult.split({key[-1]: c}).items():
                k = key[:-1] + (i, j)
                new = nxt[k] + v if k in nxt else v
                if new:
                    nxt[k] = new
                else:
                    del nxt[k]
        terms = nxt
    return terms


def eps(H: HopfAlgebra, x: Vector) -> Scalar:
    return pair(H.counit, x, H.field)


def pair(f: Functional, x: Vector, fld: FieldSpec) -> Scalar:
    total = fld.zero()
    small, large = (f, x) if len(f) <= len(x) else (x, f)
    for i, v in small.items():
        w = large.get(i)
        if w:
            total = total + v * w
    return total


def antipode(H: HopfAlgebra, x: Vector) -> Vector:
    return H.antipode.apply(x)


def antipode_inv(H: HopfAlgebra, x: Vector) -> Vector:
    return H.antipode_inv.apply(x)


def hit_left(H: HopfAlgebra, f: Functional, x: Vector) -> Vector:
    """f ⇀ x = x_(1) f(x_(2))."""
    out: Vector = {}
    for (i, j), c in comul(H, x).items():
        fj = f.get(j)
        if fj:
            axpy(out, c * fj, {i: H.field.one()})
    return out


def hit_right(H: HopfAlgebra, x: Vector, f: Functional) -> Vector:
    """x ↼ f = f(x_(1)) x_(2)."""
    out: Vector = {}
    for (i, j), c in comul(H, x).items():
        fi = f.get(i)
        if fi:
            axpy(out, c * fi, {j: H.field.one()})
    return out


def dual_hit_left(H: HopfAlgebra, t: Vector, f: Functional) -> Functional:
    """(t ⇀ f)(h) = f(h t)."""
    out: Functional = {}
    for i in range(H.dim):
        v = pair(f, mul(H, H.basis(i), t), H.field)
        if v:
            out[i] = v
    return out


def dual_hit_right(H: HopfAlgebra, f: Functional, t: Vector) -> Functional:
    """(f ↼ t)(h) = f(t h)."""
    out: Functional = {}
    for i in range(H.dim):
        v = pair(f, mul(H, t, H.basis(i)), H.field)
        if v:
            out[i] = v
    return out


def convolve(H: HopfAlgebra, f: Functional, g: Functional) -> Functional:
    """(f g)(h) = f(h_(1)) g(h_(2)), the product of Ĥ."""
    out: Functional = {}
    for k in range(H.dim):
        total = H.field.zero()
        for (i, j), c in comul(H, H.basis(k)).items():
            fi, gj = f.get(i), g.get(j)
            if fi and gj:
                total = total + c * fi * gj
        if total:
            out[k] = total
    return out


def compose_functional(f: Functional, A: Matrix) -> Functional:
    """f ∘ A as dual coordinates."""
    out: Functional = {}
    for j in range(A.cols):
        v = pair(f, A.column(j), A.field)
        if v:
            out[j] = v
    return out


def left_mult_matrix(H: HopfAlgebra, x: Vector) -> Matrix:
    return Matrix.from_images(H.dim, H.dim, H.field, lambda j: mul(H, x, H.basis(j)))


def right_mult_matrix(H: HopfAlgebra, x: Vector) -> Matrix:
    return Matrix.from_images(H.dim, H.dim, H.field, lambda j: mul(H, H.basis(j), x))


def pair_index(i: int, j: int, d: int) -> int:
    return i * d + j


def pairs_to_vector(terms: dict[tuple[int, int], Scalar], d: int) -> Vector:
    return {i * d + j: c for (i, j), c in terms.items() if c}


def mul_pairs(H: HopfAlgebra, u: Vector, v: Vector) -> Vector:
    """Product in H ⊗ H of vectors on the pair basis i·d + j."""
    d = H.dim
    out: Vector = {}
    for a, ca in u.items():
        i1, j1 = divmod(a, d)
        for b, cb in v.items():
            i2, j2 = divmod(b, d)
            left = mul(H, {i1: ca}, {i2: cb})
            right = mul(H, H.basis(j1), H.basis(j2))
            for k, x in left.items():
                for l, y in right.items():
                    axpy(out, x * y, {k * d + l: H.field.one()})
    return out


# ── Galois maps ──────────────────────────────────────────────────────────────

def galois_maps(H: HopfAlgebra) -> dict[str, Matrix]:
    """
    γ_l(x⊗y) = Δ(x)(y⊗1), γ_r(x⊗y) = Δ(x)(1⊗y),
    ρ_l(x⊗y) = (x⊗1)Δ(y), ρ_r(x⊗y) = (1⊗x)Δ(y) as d²×d² matrices.
    """
    d, one = H.dim, H.one()

    def build(fn) -> Matrix:
        return Matrix.from_images(d * d, d * d, H.field, lambda n: fn(*divmod(n, d)))

    def delta(i: int) -> Vector:
        return pairs_to_vector(comul(H, H.basis(i)), d)

    def tens(x: Vector, y: Vector) -> Vector:
        return {a * d + b: cx * cy for a, cx in x.items() for b, cy in y.items()}

    return {
        "gamma_l": build(lambda i, j: mul_pairs(H, delta(i), tens(H.basis(j), one))),
        "gamma_r": build(lambda i, j: mul_pairs(H, delta(i), tens(one, H.basis(j)))),
        "rho_l": build(lambda i, j: mul_pairs(H, tens(H.basis(i), one), delta(j))),
        "rho_r": build(lambda i, j: mul_pairs(H, tens(one, H.basis(i)), delta(j))),
    }


# ── Validation ───────────────────────────────────────────────────────────────

def check_structure(H: HopfAlgebra) -> None:
    d = H.dim
    if H.mult.dims != (d, d, d):
        raise InputError(f"mult has dims {H.mult.dims}, expected {(d, d, d)}", "mult")
    if H.comult.dims != (d, d, d):
        raise InputError(f"comult has dims {H.comult.dims}, expected {(d, d, d)}", "comult")
    if H.antipode.shape != (d, d):
        raise InputError(f"antipode has shape {H.antipode.shape}, expected {(d, d)}", "antipode")
    for key, vec in (("unit", H.unit), ("counit", H.counit)):
        if any(i < 0 or i >= d for i in vec):
            raise InputError(f"{key} has coordinates outside 0..{d - 1}", key)
    for obj in (H.mult, H.comult, H.antipode):
        if obj.field != H.field:
            raise InputError(f"Structure tensors over {obj.field.describe()} in a Hopf algebra "
                             f"over {H.field.describe()}")


def _witness(**kw) -> dict:
    return {k: render_vector(v) if isinstance(v, dict) else v for k, v in kw.items()}


def _render_triples(coeffs: dict) -> str:
    return "{" + ", ".join(f"{key}: {v}" for key, v in sorted(coeffs.items())) + "}"


def validate_hopf(H: HopfAlgebra) -> ValidationReport:
    """Every Hopf axiom, the antipode characterization and the four Galois maps."""
    check_structure(H)
    report = ValidationReport(f"Hopf axioms · {H.name or 'H'}")
    d, fld = H.dim, H.field
    e = H.basis
    one = H.one()

    # associativity
    witness = None
    for i in range(d):
        for j in range(d):
            ij = mul(H, e(i), e(j))
            for k in range(d):
                lhs, rhs = mul(H, ij, e(k)), mul(H, e(i), mul(H, e(j), e(k)))
                if not vec_equal(lhs, rhs):
                    witness = _witness(i=i, j=j, k=k, lhs=lhs, rhs=rhs)
                    break
            if witness:
                break
        if witness:
            break
    report.add("associativity", witness is None, "(e_i e_j) e_k = e_i (e_j e_k)", witness)

    witness = next((_witness(i=i, lhs=mul(H, one, e(i)), rhs=mul(H, e(i), one))
                    for i in range(d)
                    if not (vec_equal(mul(H, one, e(i)), e(i)) and vec_equal(mul(H, e(i), one), e(i)))),
                   None)
    report.add("unitality", witness is None, "1 e_i = e_i = e_i 1", witness)

    # coassociativity
    witness = None
    for k in range(d):
        left: dict = {}
        right: dict = {}
        for (i, j), c in comul(H, e(k)).items():
            for (a, b), v in comul(H, e(i)).items():
                key = (a, b, j)
                left[key] = left.get(key, fld.zero()) + c * v
            for (a, b), v in comul(H, e(j)).items():
                key = (i, a, b)
                right[key] = right.get(key, fld.zero()) + c * v
        left = {key: v for key, v in left.items() if v}
        right = {key: v for key, v in right.items() if v}
        if left != right:
            witness = {"k": k, "lhs": _render_triples(left), "rhs": _render_triples(right)}
            break
    report.add("coassociativity", witness is None, "(Δ⊗id)Δ = (id⊗Δ)Δ", witness)

    witness = None
    for k in range(d):
        via_first: Vector = {}
        via_second: Vector = {}
        for (i, j), c in comul(H, e(k)).items():
            ei, ej = H.counit.get(i), H.counit.get(j)
            if ei:
                axpy(via_first, c * ei, e(j))
            if ej:
                axpy(via_second, c * ej, e(i))
        if not (vec_equal(via_first, e(k)) and vec_equal(via_second, e(k))):
            witness = _witness(k=k, lhs=via_first, rhs=via_second)
            break
    report.add("counitality", witness is None, "(ε⊗id)Δ = id = (id⊗ε)Δ", witness)

    delta = {i: pairs_to_vector(comul(H, e(i)), d) for i in range(d)}
    witness = None
    for i in range(d):
        for j in range(d):
            lhs = pairs_to_vector(comul(H, mul(H, e(i), e(j))), d)
            rhs = mul_pairs(H, delta[i], delta[j])
            if not vec_equal(lhs, rhs):
                witness = _witness(i=i, j=j, lhs=lhs, rhs=rhs)
                break
        if witness:
            break
    report.add("comultiplication multiplicative", witness is None, "Δ(xy) = Δ(x)Δ(y)", witness)
    delta_one = pairs_to_vector(comul(H, one), d)
    one_one = {pair_index(a, b, d): ca * cb for a, ca in one.items() for b, cb in one.items()}
    report.add("comultiplication unital", vec_equal(delta_one, one_one), "Δ(1) = 1⊗1",
               None if vec_equal(delta_one, one_one) else _witness(lhs=delta_one, rhs=one_one))

    witness = None
    for i in range(d):
        for j in range(d):
            lhs = eps(H, mul(H, e(i), e(j)))
            rhs = eps(H, e(i)) * eps(H, e(j))
            if lhs != rhs:
                witness = {"i": i, "j": j, "lhs": str(lhs), "rhs": str(rhs)}
                break
        if witness:
            break
    report.add("counit multiplicative", witness is None, "ε(xy) = ε(x)ε(y)", witness)
    eps_one = eps(H, one)
    report.add("counit unital", eps_one == 1, "ε(1) = 1",
               None if eps_one == 1 else {"lhs": str(eps_one), "rhs": "1"})

    # antipode axioms
    for label, side in (("μ(S⊗id)Δ = ηε", "left"), ("μ(id⊗S)Δ = ηε", "right")):
        witness = None
        for k in range(d):
            total: Vector = {}
            for (i, j), c in comul(H, e(k)).items():
                if side == "left":
                    axpy(total, c, mul(H, antipode(H, e(i)), e(j)))
                else:
                    axpy(total, c, mul(H, e(i), antipode(H, e(j))))
            expected = vec_scale(eps(H, e(k)), one)
            if not vec_equal(total, expected):
                witness = _witness(k=k, lhs=total, rhs=expected)
                break
        report.add(f"antipode {side}", witness is None, label, witness)

    witness = None
    for i in range(d):
        for j in range(d):
            lhs = antipode(H, mul(H, e(i), e(j)))
            rhs = mul(H, antipode(H, e(j)), antipode(H, e(i)))
            if not vec_equal(lhs, rhs):
                witness = _witness(i=i, j=j, lhs=lhs, rhs=rhs)
                break
        if witness:
            break
    report.add("antipode anti-multiplicative", witness is None, "S(xy) = S(y)S(x)", witness)

    witness = None
    for k in range(d):
        lhs = pairs_to_vector(comul(H, antipode(H, e(k))), d)
        rhs: Vector = {}
        for (i, j), c in comul(H, e(k)).items():
            for a, ca in antipode(H, e(j)).items():
                for b, cb in antipode(H, e(i)).items():
                    axpy(rhs, c * ca * cb, {pair_index(a, b, d): fld.one()})
        if not vec_equal(lhs, rhs):
            witness = _witness(k=k, lhs=lhs, rhs=rhs)
            break
    report.add("antipode anti-comultiplicative", witness is None, "Δ(S x) = S(x_(2)) ⊗ S(x_(1))", witness)

    s_rank = H.antipode.rank()
    report.add("antipode invertible", s_rank == d, "S has an inverse",
               None if s_rank == d else {"lhs": s_rank, "rhs": d})

    for name, matrix in galois_maps(H).items():
        rank = matrix.rank()
        report.add(f"Galois map {name} bijective", rank == d * d,
                   f"rank {rank} of {d * d}" if rank != d * d else "",
                   None if rank == d * d else {"lhs": rank, "rhs": d * d})

    # μ(S⊗id)γ_r = ε⊗id and μ(id⊗S)ρ_l = id⊗ε on all basis pairs
    witness = None
    for i in range(d):
        for j in range(d):
            total: Vector = {}
            for (a, b), c in comul(H, e(i)).items():
                axpy(total, c, mul(H, antipode(H, e(a)), mul(H, e(b), e(j))))
            expected = vec_scale(eps(H, e(i)), e(j))
            if not vec_equal(total, expected):
                witness = _witness(i=i, j=j, lhs=total, rhs=expected)
                break
            total = {}
            for (a, b), c in comul(H, e(j)).items():
                axpy(total, c, mul(H, mul(H, e(i), e(a)), antipode(H, e(b))))
            expected = vec_scale(eps(H, e(j)), e(i))
            if not vec_equal(total, expected):
                witness = _witness(i=i, j=j, lhs=total, rhs=expected)
                break
        if witness:
            break
    report.add("antipode via Galois maps", witness is None,
               "μ(S⊗id)γ_r = ε⊗id and μ(id⊗S)ρ_l = id⊗ε", witness)

    logger.info(report.summary())
    return report


# ── Haar functionals and modular elements ────────────────────────────────────

@dataclass
class HaarData:
    phi: Functional
    psi: Functional
    delta: Vector
    delta_inv: Vector
    delta_hat: Functional
    delta_hat_inv: Functional
    phi_hat: Vector
    psi_hat: Vector
    values: dict = field(default_factory=dict)


def _invariance_system(H: HopfAlgebra, right: bool = False) -> Matrix:
    """
    Rows encode (id⊗φ)Δ(e_k) − φ(e_k)1 = 0 (left) or (φ⊗id)Δ(e_k) − φ(e_k)1 = 0 (right),
    one row per (k, i) coordinate.
    """
    d = H.dim
    rows: list[Vector] = []
    for k in range(d):
        per_i: dict[int, Vector] = {}
        for (i, j), c in comul(H, H.basis(k)).items():
            out_idx, var = (j, i) if right else (i, j)
            axpy(per_i.setdefault(out_idx, {}), c, {var: H.field.one()})
        for i, coef in H.unit.items():
            axpy(per_i.setdefault(i, {}), -coef, {k: H.field.one()})
        rows.extend(r for r in per_i.values() if r)
    return Matrix.from_rows(rows, d, H.field)


def invariant_functionals(H: HopfAlgebra, right: bool = False):
    """Solution space of the left (or right) invariance system."""
    return kernel(_invariance_system(H, right=right))


def left_integral(H: HopfAlgebra) -> Functional:
    """
    The left invariant functional φ, normalized so its first nonzero
    coordinate is 1. Raises InputError unless unique and faithful.
    """
    cached = H.cache.get("phi")
    if cached is not None:
        return dict(cached)
    solutions = invariant_functionals(H)
    if solutions.dim != 1:
        raise InputError(
            f"No unique Haar functional on {H.name or 'H'}: invariance solution space has dimension {solutions.dim}"
        )
    phi = solutions.basis[0]  # echelon form: leading coordinate already 1
    form = Matrix.from_dense(
        [[pair(phi, mul(H, H.basis(x), H.basis(y)), H.field) for y in range(H.dim)]
         for x in range(H.dim)],
        H.field,
    )
    if not form.is_invertible():
        raise InputError(f"Integral on {H.name or 'H'} is not faithful: φ(xy) is degenerate")
    logger.debug(f"φ on {H.name}: {render_vector(phi)}")
    H.cache["phi"] = phi
    return dict(phi)


def _modular_element(H: HopfAlgebra, phi: Functional) -> Vector:
    """δ with (φ⊗id)Δ(x) = φ(x)δ, solved at the first x with φ(x) ≠ 0 and verified on all of H."""
    def right_leg(x: Vector) -> Vector:
        out: Vector = {}
        for (i, j), c in comul(H, x).items():
            p = phi.get(i)
            if p:
                axpy(out, c * p, H.basis(j))
        return out

    k0 = min(phi)
    delta = vec_scale(phi[k0].inv(), right_leg(H.basis(k0)))
    for k in range(H.dim):
        expected = vec_scale(phi.get(k, H.field.zero()), delta)
        if not vec_equal(right_leg(H.basis(k)), expected):
            raise InconsistencyError(f"(φ⊗id)Δ(e_{k}) ≠ φ(e_{k})δ on {H.name}", {"k": k})
    return delta


def _check_grouplike(H: HopfAlgebra, g: Vector, label: str) -> Vector:
    d = H.dim
    if eps(H, g) != 1:
        raise InconsistencyError(f"ε({label}) = {eps(H, g)} ≠ 1 on {H.name}")
    if not vec_equal(pairs_to_vector(comul(H, g), d),
                     {a * d + b: ca * cb for a, ca in g.items() for b, cb in g.items()}):
        raise InconsistencyError(f"{label} is not group-like on {H.name}")
    inverse = antipode(H, g)
    if not (vec_equal(mul(H, g, inverse), H.one()) and vec_equal(antipode_inv(H, g), inverse)):
        raise InconsistencyError(f"S({label}) = S⁻¹({label}) = {label}⁻¹ fails on {H.name}")
    return inverse


def haar_data(H: HopfAlgebra) -> HaarData:
    """φ, ψ = φ∘S⁻¹, δ, δ̂ and their inverses, with every invariant asserted."""
    cached = H.cache.get("haar")
    if cached is not None:
        return cached
    phi = left_integral(H)
    psi = compose_functional(phi, H.antipode_inv)

    for k in range(H.dim):
        right: Vector = {}
        for (i, j), c in comul(H, H.basis(k)).items():
            p = psi.get(i)
            if p:
                axpy(right, c * p, H.basis(j))
        if not vec_equal(right, vec_scale(psi.get(k, H.field.zero()), H.one())):
            raise InconsistencyError(f"ψ = φ∘S⁻¹ is not right invariant on {H.name}", {"k": k})

    delta = _modular_element(H, phi)
    delta_inv = _check_grouplike(H, delta, "δ")

    Hd = dual_hopf(H)
    phi_hat = left_integral(Hd)
    psi_hat = compose_functional(phi_hat, Hd.antipode_inv)
    delta_hat = _modular_element(Hd, phi_hat)
    delta_hat_inv = _check_grouplike(Hd, delta_hat, "δ̂")

    data = HaarData(phi=phi, psi=psi, delta=delta, delta_inv=delta_inv,
                    delta_hat=delta_hat, delta_hat_inv=delta_hat_inv,
                    phi_hat=phi_hat, psi_hat=psi_hat)
    data.values = {
        "phi": render_vector(phi), "psi": render_vector(psi),
        "delta": render_vector(delta), "delta_hat": render_vector(delta_hat),
        "phi_hat": render_vector(phi_hat),
    }
    logger.info(f"Haar data for {H.name}: δ = {render_vector(delta)}, δ̂ = {render_vector(delta_hat)}")
    H.cache["haar"] = data
    return data


# ── Duality ──────────────────────────────────────────────────────────────────

def dual_hopf(H: HopfAlgebra) -> HopfAlgebra:
    """Ĥ on the dual basis: convolution product, Δ̂f(a⊗b) = f(ab), unit ε, counit f ↦ f(1), Ŝ = Sᵀ."""
    cached = H.cache.get("dual")
    if cached is not None:
        return cached
    d = H.dim
    mult = Tensor3.from_entries((d, d, d), H.field, ((i, j, k, v) for k, i, j, v in H.comult.items()))
    comult = Tensor3.from_entries((d, d, d), H.field, ((k, i, j, v) for i, j, k, v in H.mult.items()))
    labels = [f"{lab}*" if not lab.endswith("*") else lab[:-1] for lab in H.labels] if H.labels else None
    name = H.name[:-1] if H.name.endswith("^") else f"{H.name}^"
    D = HopfAlgebra(field=H.field, dim=d, mult=mult, unit=dict(H.counit), comult=comult,
                    counit=dict(H.unit), antipode=H.antipode.transpose(), name=name, labels=labels)
    D.cache["dual"] = H
    H.cache["dual"] = D
    return D


# ── Fourier transforms ───────────────────────────────────────────────────────

@dataclass
class FourierMaps:
    Fl: Matrix
    Fr: Matrix
    Gl: Matrix
    Gr: Matrix
    scalars: dict[str, Scalar] = field(default_factory=dict)


def _functional_map(H: HopfAlgebra, weight: Functional, left: bool) -> Matrix:
    """x ↦ (h ↦ w(h x)) if left else x ↦ (h ↦ w(x h))."""
    def image(x: int) -> Vector:
        out: Vector = {}
        for h in range(H.dim):
            prod = mul(H, H.basis(h), H.basis(x)) if left else mul(H, H.basis(x), H.basis(h))
            v = pair(weight, prod, H.field)
            if v:
                out[h] = v
        return out
    return Matrix.from_images(H.dim, H.dim, H.field, image)


def fourier(H: HopfAlgebra, haar: HaarData | None = None) -> FourierMaps:
    """F_l(x)(h) = φ(hx), F_r(x)(h) = φ(xh), G_l(x)(h) = ψ(hx), G_r(x)(h) = ψ(xh)."""
    cached = H.cache.get("fourier")
    if cached is not None:
        return cached
    haar = haar or haar_data(H)
    maps = FourierMaps(
        Fl=_functional_map(H, haar.phi, left=True),
        Fr=_functional_map(H, haar.phi, left=False),
        Gl=_functional_map(H, haar.psi, left=True),
        Gr=_functional_map(H, haar.psi, left=False),
    )
    for name in ("Fl", "Fr", "Gl", "Gr"):
        if not getattr(maps, name).is_invertible():
            raise InconsistencyError(f"Fourier map {name} is singular on {H.name}")

    c_left = proportionality(maps.Fl @ right_mult_matrix(H, haar.delta), maps.Gl)
    c_right = proportionality(maps.Fr @ left_mult_matrix(H, haar.delta), maps.Gr)
    if c_left is None or c_right is None:
        raise InconsistencyError(f"F_l(xδ) ≡ G_l(x) or F_r(δx) ≡ G_r(x) fails on {H.name}")
    maps.scalars = {"F_l(xδ) = c·G_l(x)": c_left, "F_r(δx) = c·G_r(x)": c_right}
    H.cache["fourier"] = maps
    return maps


def hit_matrix(H: HopfAlgebra, f: Functional, side: str) -> Matrix:
    if side == "left":
        return Matrix.from_images(H.dim, H.dim, H.field, lambda j: hit_left(H, f, H.basis(j)))
    return Matrix.from_images(H.dim, H.dim, H.field, lambda j: hit_right(H, H.basis(j), f))


def fourier_chain(H: HopfAlgebra) -> ValidationReport:
    """
    The up-to-scalar identities linking the Fourier transforms of H and Ĥ
    with S², δ and δ̂. Each check reports its scalar.
    """
    report = ValidationReport(f"Fourier identities · {H.name or 'H'}")
    haar = haar_data(H)
    F = fourier(H, haar)
    Hd = dual_hopf(H)
    Fd = fourier(Hd)
    S, S_inv = H.antipode, H.antipode_inv
    S2 = S @ S
    hit_l = hit_matrix(H, haar.delta_hat, "left")
    hit_r = hit_matrix(H, haar.delta_hat, "right")
    hit_r_inv = hit_matrix(H, haar.delta_hat_inv, "right")
    L_delta_inv = left_mult_matrix(H, haar.delta_inv)
    R_delta, R_delta_inv = right_mult_matrix(H, haar.delta), right_mult_matrix(H, haar.delta_inv)

    identities = {
        "F_l(xδ) ≡ G_l(x)": (F.Fl @ R_delta, F.Gl),
        "F_r(δx) ≡ G_r(x)": (F.Fr @ left_mult_matrix(H, haar.delta), F.Gr),
        "F_l(S²x) ≡ F_r(δ̂⇀x)": (F.Fl @ S2, F.Fr @ hit_l),
        "F̂_l F_l(x) ≡ S⁻¹(δ̂⇀x)": (Fd.Fl @ F.Fl, S_inv @ hit_l),
        "F̂_r F_l(x) ≡ S((xδ⁻¹)↼δ̂)": (Fd.Fr @ F.Fl, S @ hit_r @ R_delta_inv),
        "F̂_r F_r(S x) ≡ xδ": (Fd.Fr @ F.Fr @ S, R_delta),
        "F_r(S²x) ≡ F_l(δ⁻¹(x↼δ̂⁻¹)δ)": (F.Fr @ S2, F.Fl @ L_delta_inv @ R_delta @ hit_r_inv),
    }
    for name, (lhs, rhs) in identities.items():
        c = proportionality(lhs, rhs)
        report.add(name, c is not None, "elementwise ratio constant, zero patterns equal",
                   lhs.first_difference(rhs))
        if c is not None:
            report.values[name] = str(c)
    return report


def pontrjagin(H: HopfAlgebra) -> tuple[Matrix, ValidationReport]:
    """
    P = Ĝ_l F_l S : H → (Ĥ)^ and the alternative F̂_r G_r S.

    Both are proportional to the canonical evaluation map; P is rescaled so
    that P(1) = 1 before the Hopf-isomorphism transport checks.
    """
    report = ValidationReport(f"Pontrjagin duality · {H.name or 'H'}")
    F = fourier(H)
    Fd = fourier(dual_hopf(H))
    P_raw = Fd.Gl @ F.Fl @ H.antipode
    Q_raw = Fd.Fr @ F.Gr @ H.antipode
    c_alt = proportionality(P_raw, Q_raw)
    report.add("Ĝ_l F_l S ≡ F̂_r G_r S", c_alt is not None, "", P_raw.first_difference(Q_raw))
    if c_alt is not None:
        report.values["Ĝ_l F_l S = c·F̂_r G_r S"] = str(c_alt)

    identity = Matrix.identity(H.dim, H.field)
    c_eval = proportionality(P_raw, identity)
    report.add("P ≡ canonical evaluation", c_eval is not None, "", P_raw.first_difference(identity))
    if c_eval is None:
        raise InconsistencyError(f"Pontrjagin map is not proportional to evaluation on {H.name}")
    report.values["P = c·evaluation"] = str(c_eval)
    P = P_raw.scale(c_eval.inv())

    DD = dual_hopf(dual_hopf(H))
    report.extend(hopf_equal_report(H, DD, P), prefix="P")
    if not report.ok:
        raise InconsistencyError(f"Pontrjagin transport failed on {H.name}",
                                 {c.name: c.witness for c in report.failures()})
    return P, report


# ── Radford's formula ────────────────────────────────────────────────────────

def radford_check(H: HopfAlgebra) -> dict:
    """
    S⁴(x) = δ⁻¹ (δ̂ ⇀ x ↼ δ̂⁻¹) δ on every basis element, with
    δ̂ ⇀ x ↼ δ̂⁻¹ = δ̂⁻¹(x_(1)) x_(2) δ̂(x_(3)).
    """
    haar = haar_data(H)
    S4 = H.antipode @ H.antipode @ H.antipode @ H.antipode
    for k in range(H.dim):
        lhs = S4.column(k)
        twisted: Vector = {}
        for (a, b, c), coef in sweedler(H, H.basis(k), 3).items():
            left, right = haar.delta_hat_inv.get(a), haar.delta_hat.get(c)
            if left and right:
                axpy(twisted, coef * left * right, H.basis(b))
        rhs = mul_all(H, haar.delta_inv, twisted, haar.delta)
        if not vec_equal(lhs, rhs):
            logger.warning(f"Radford's formula fails on {H.name} at e_{k}")
            return {"holds": False, "s4_is_identity": S4.is_identity(),
                    "witness": _witness(k=k, lhs=lhs, rhs=rhs)}
    return {"holds": True, "s4_is_identity": S4.is_identity(), "witness": None}


def hopf_equal_report(H: HopfAlgebra, K: HopfAlgebra, iso: Matrix) -> ValidationReport:
    """Transport check: iso : H → K preserves all structure maps."""
    report = ValidationReport(f"Hopf isomorphism {H.name} → {K.name}")
    d = H.dim
    rank = iso.rank()
    report.add("bijective", rank == d, f"rank {rank} of {d}",
               None if rank == d else {"lhs": rank, "rhs": d})

    witness = None
    for i in range(d):
        for j in range(d):
            lhs = iso.apply(mul(H, H.basis(i), H.basis(j)))
            rhs = mul(K, iso.column(i), iso.column(j))
            if not vec_equal(lhs, rhs):
                witness = _witness(i=i, j=j, lhs=lhs, rhs=rhs)
                break
        if witness:
            break
    report.add("multiplicative", witness is None, "φ(xy) = φ(x)φ(y)", witness)

    lhs, rhs = iso.apply(H.one()), K.one()
    report.add("unital", vec_equal(lhs, rhs), "φ(1) = 1",
               None if vec_equal(lhs, rhs) else _witness(lhs=lhs, rhs=rhs))

    witness = None
    square = iso.kron(iso)
    for k in range(d):
        lhs = pairs_to_vector(comul(K, iso.column(k)), d)
        rhs = square.apply(pairs_to_vector(comul(H, H.basis(k)), d))
        if not vec_equal(lhs, rhs):
            witness = _witness(k=k, lhs=lhs, rhs=rhs)
            break
    report.add("comultiplicative", witness is None, "Δ(φx) = (φ⊗φ)Δ(x)", witness)

    witness = next(({"k": k, "lhs": str(eps(K, iso.column(k))), "rhs": str(eps(H, H.basis(k)))}
                    for k in range(d) if eps(K, iso.column(k)) != eps(H, H.basis(k))), None)
    report.add("counital", witness is None, "ε(φx) = ε(x)", witness)

    lhs_m, rhs_m = K.antipode @ iso, iso @ H.antipode
    report.add("intertwines antipodes", lhs_m == rhs_m, "S φ = φ S", lhs_m.first_difference(rhs_m))
    return report


def s_power(H: HopfAlgebra, n: int) -> Matrix:
    """S^n as a matrix; negative n uses S⁻¹."""
    return H.antipode ** n if n >= 0 else H.antipode_inv ** (-n)
