"""
action.py
---------
Modules, comodules and module algebras over a Hopf algebra, crossed products,
the pairing algebras l(b; A), and the Takesaki–Takai isomorphism.

Key behaviors:
- An HModule stores its action as a Tensor3 action[t][v][w] (coefficient of e_w in e_t·e_v);
  per-basis action matrices are derived once and cached
- Modules over Ĥ and right comodules over H convert into each other through dual bases
- Tensor products carry the diagonal action t·(v⊗w) = t_(1)·v ⊗ t_(2)·w
- Crossed products A⋊H carry the dual Ĥ-action f·(a⋊x) = a⋊(f⇀x), so applying the
  construction twice gives A⋊H⋊Ĥ as an H-algebra again
- l(b; A) lives on V⊗A⊗V with (v₁⊗a₁⊗w₁)(v₂⊗a₂⊗w₂) = b(w₁,v₂) v₁⊗a₁a₂⊗w₂
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from checks import InputError, ValidationReport, progress
from exactla import (
    Matrix,
    Scalar,
    Subspace,
    Tensor3,
    Vector,
    axpy,
    first_mismatch,
    kernel,
    solve_linear,
    sqrt,
    tensor_contract,
    tensor_vec,
    unit,
    vec_equal,
    vec_scale,
)
from hopf import (
    HopfAlgebra,
    antipode,
    antipode_inv,
    comul,
    convolve,
    dual_hit_left,
    dual_hopf,
    eps,
    fourier,
    haar_data,
    hit_matrix,
    mul,
    pair,
    sweedler,
)

logger = logging.getLogger(__name__)


# ── Modules ──────────────────────────────────────────────────────────────────

@dataclass(eq=False)
class HModule:
    hopf: HopfAlgebra
    dim: int
    action: Tensor3
    name: str = ""

    @cached_property
    def matrices(self) -> list[Matrix]:
        """Action matrix of each basis element of the Hopf algebra."""
        return [tensor_contract(self.action, unit(t, self.hopf.field), 1) for t in range(self.hopf.dim)]

    @property
    def field(self):
        return self.hopf.field

    def __repr__(self) -> str:
        return f"HModule({self.name or '?'}, dim={self.dim} over {self.hopf.name})"


def module_from_matrices(H: HopfAlgebra, mats: list[Matrix], name: str = "") -> HModule:
    if len(mats) != H.dim:
        raise InputError(f"Need {H.dim} action matrices, got {len(mats)}")
    dim = mats[0].rows if mats else 0
    entries = ((t, v, w, c) for t, m in enumerate(mats) for v in range(m.cols) for w, c in m.column(v).items())
    module = HModule(hopf=H, dim=dim, action=Tensor3.from_entries((H.dim, dim, dim), H.field, entries), name=name)
    module.__dict__["matrices"] = list(mats)
    return module


def action_matrix(M: HModule, t: Vector) -> Matrix:
    out = Matrix.zeros(M.dim, M.dim, M.field)
    for i, c in t.items():
        out = out + M.matrices[i].scale(c)
    return out


def act(M: HModule, t: Vector, v: Vector) -> Vector:
    return M.action.apply(t, v)


def trivial_module(H: HopfAlgebra, dim: int = 1, name: str = "") -> HModule:
    """t·v = ε(t)v."""
    ident = Matrix.identity(dim, H.field)
    return module_from_matrices(H, [ident.scale(eps(H, H.basis(t))) for t in range(H.dim)],
                                name or f"trivial^{dim}")


def regular_module(H: HopfAlgebra) -> HModule:
    """H acting on itself by left multiplication."""
    mats = [Matrix.from_images(H.dim, H.dim, H.field, lambda j, t=t: mul(H, H.basis(t), H.basis(j)))
            for t in range(H.dim)]
    return module_from_matrices(H, mats, f"{H.name} (left regular)")


def dual_regular_module(H: HopfAlgebra) -> HModule:
    """Ĥ as an H-module through (t ⇀ f)(x) = f(xt)."""
    mats = [Matrix.from_images(H.dim, H.dim, H.field,
                               lambda f, t=t: dual_hit_left(H, H.basis(t), H.basis(f)))
            for t in range(H.dim)]
    return module_from_matrices(H, mats, f"{dual_hopf(H).name} (t⇀f)")


def diagonal_action(H: HopfAlgebra, factors: list[HModule], name: str = "") -> HModule:
    """Tensor product of modules with t·(v₁⊗…⊗v_n) = t_(1)·v₁ ⊗ … ⊗ t_(n)·v_n."""
    dims = [M.dim for M in factors]
    total = 1
    for n in dims:
        total *= n
    mats = []
    for t in range(H.dim):
        acc = Matrix.zeros(total, total, H.field)
        for legs, c in sweedler(H, H.basis(t), len(factors)).items():
            block = factors[0].matrices[legs[0]]
            for M, leg in zip(factors[1:], legs[1:]):
                block = block.kron(M.matrices[leg])
            acc = acc + block.scale(c)
        mats.append(acc)
    return module_from_matrices(H, mats, name or " ⊗ ".join(M.name or "?" for M in factors))


def validate_module(M: HModule) -> ValidationReport:
    report = ValidationReport(f"Module axioms · {M.name or 'M'}")
    H = M.hopf
    report.add_equal("unital", action_matrix(M, H.one()), Matrix.identity(M.dim, M.field), "1·v = v")
    witness = None
    for s in range(H.dim):
        for t in range(H.dim):
            lhs = action_matrix(M, mul(H, H.basis(s), H.basis(t)))
            rhs = M.matrices[s] @ M.matrices[t]
            diff = lhs.first_difference(rhs)
            if diff:
                witness = {"s": s, "t": t, **diff}
                break
        if witness:
            break
    report.add("associative", witness is None, "(st)·v = s·(t·v)", witness)
    return report


def invariant_subspace(M: HModule) -> Subspace:
    """{v : t·v = ε(t)v for all t}."""
    H = M.hopf
    rows: list[Vector] = []
    for t in range(H.dim):
        shifted = M.matrices[t] - Matrix.identity(M.dim, M.field).scale(eps(H, H.basis(t)))
        rows.extend(r for r in shifted.row_vectors() if r)
    return kernel(Matrix.from_rows(rows, M.dim, M.field))


def is_linear_map(phi: Matrix, M: HModule, N: HModule) -> dict | None:
    """Witness that φ: M → N fails to commute with some basis action, or None."""
    for t in range(M.hopf.dim):
        diff = (phi @ M.matrices[t]).first_difference(N.matrices[t] @ phi)
        if diff:
            return {"t": t, **diff}
    return None


def action_difference(M: HModule, N: HModule) -> dict | None:
    """Witness of the first basis element acting differently on M and N, or None."""
    for t, (a, b) in enumerate(zip(M.matrices, N.matrices)):
        diff = a.first_difference(b)
        if diff:
            return {"t": t, **diff}
    return None


# ── Comodules ────────────────────────────────────────────────────────────────

@dataclass(eq=False)
class HComodule:
    """Right comodule V → V⊗H; coaction column v lives on the basis w·d + i."""

    hopf: HopfAlgebra
    dim: int
    coaction: Matrix
    name: str = ""


def module_to_comodule(V: HModule) -> HComodule:
    """An Ĥ-module V becomes an H-comodule: η(v) = Σ_i (fⁱ·v) ⊗ e_i."""
    Hd = V.hopf
    if not action_matrix(V, Hd.one()).is_identity():
        raise InputError(f"Module {V.name} is not unital; no coaction corresponds to it")
    H = dual_hopf(Hd)
    d = H.dim
    columns = []
    for v in range(V.dim):
        col: Vector = {}
        for i in range(d):
            for w, c in V.matrices[i].column(v).items():
                col[w * d + i] = c
        columns.append(col)
    return HComodule(hopf=H, dim=V.dim, coaction=Matrix(V.dim * d, V.dim, H.field, columns),
                     name=V.name)


def comodule_to_module(C: HComodule) -> HModule:
    """f·v = v_(0) f(v_(1))."""
    H = C.hopf
    d = H.dim
    entries = []
    for v in range(C.dim):
        for idx, c in C.coaction.column(v).items():
            w, i = divmod(idx, d)
            entries.append((i, v, w, c))
    Hd = dual_hopf(H)
    return HModule(hopf=Hd, dim=C.dim, action=Tensor3.from_entries((d, C.dim, C.dim), H.field, entries),
                   name=C.name)


def validate_comodule(C: HComodule) -> ValidationReport:
    report = ValidationReport(f"Comodule axioms · {C.name or 'V'}")
    H, d = C.hopf, C.hopf.dim

    def coassoc(v: int) -> tuple[Vector, Vector]:
        lhs: Vector = {}
        rhs: Vector = {}
        for idx, c in C.coaction.column(v).items():
            w, i = divmod(idx, d)
            for idx2, c2 in C.coaction.column(w).items():
                axpy(lhs, c * c2, {idx2 * d + i: H.field.one()})
            for (a, b), c3 in comul(H, H.basis(i)).items():
                axpy(rhs, c * c3, {(w * d + a) * d + b: H.field.one()})
        return lhs, rhs

    report.add("coassociative", (w := first_mismatch(({"v": v}, *coassoc(v)) for v in range(C.dim))) is None,
               "(η⊗id)η = (id⊗Δ)η", w)

    def counit_side(v: int) -> Vector:
        out: Vector = {}
        for idx, c in C.coaction.column(v).items():
            w, i = divmod(idx, d)
            e = H.counit.get(i)
            if e:
                axpy(out, c * e, {w: H.field.one()})
        return out

    report.add("counital", (w := first_mismatch(({"v": v}, counit_side(v), unit(v, H.field))
                                                 for v in range(C.dim))) is None,
               "(id⊗ε)η = id", w)
    return report


def tensor_comodules(C: HComodule, D: HComodule) -> HComodule:
    """η(v⊗w) = v_(0) ⊗ w_(0) ⊗ v_(1)w_(1)."""
    H, d = C.hopf, C.hopf.dim
    columns = []
    for v in range(C.dim):
        for w in range(D.dim):
            col: Vector = {}
            for i1, c1 in C.coaction.column(v).items():
                v0, x = divmod(i1, d)
                for i2, c2 in D.coaction.column(w).items():
                    w0, y = divmod(i2, d)
                    for k, c3 in mul(H, H.basis(x), H.basis(y)).items():
                        axpy(col, c1 * c2 * c3, {(v0 * D.dim + w0) * d + k: H.field.one()})
            columns.append(col)
    n = C.dim * D.dim
    return HComodule(hopf=H, dim=n, coaction=Matrix(n * d, n, H.field, columns),
                     name=f"{C.name} ⊗ {D.name}")


def check_module_comodule(V: HModule) -> ValidationReport:
    """Module ↔ comodule round trip and compatibility with tensor products."""
    report = ValidationReport(f"Module/comodule correspondence · {V.name or 'V'}")
    C = module_to_comodule(V)
    report.extend(validate_comodule(C))
    back = comodule_to_module(C)
    witness = action_difference(back, V)
    report.add("round trip module → comodule → module", witness is None, "", witness)
    again = module_to_comodule(back)
    report.add_equal("round trip comodule → module → comodule", again.coaction, C.coaction)
    VV = diagonal_action(V.hopf, [V, V])
    lhs = module_to_comodule(VV).coaction
    rhs = tensor_comodules(C, C).coaction
    report.add("tensor products correspond", lhs == rhs, "η(V⊗V) = η(V) ⊗ η(V)", lhs.first_difference(rhs))
    return report


# ── Module algebras ──────────────────────────────────────────────────────────

@dataclass(eq=False)
class HAlgebra:
    module: HModule
    mult: Tensor3
    unit: Vector | None = None
    name: str = ""

    @property
    def hopf(self) -> HopfAlgebra:
        return self.module.hopf

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def field(self):
        return self.module.hopf.field

    def __repr__(self) -> str:
        return f"HAlgebra({self.name or '?'}, dim={self.dim} over {self.hopf.name})"


def amul(A: HAlgebra, a: Vector, b: Vector) -> Vector:
    return A.mult.apply(a, b)


def find_unit(mult: Tensor3, field) -> Vector | None:
    """Solve u·e_j = e_j = e_j·u; None when the algebra is not unital."""
    n = mult.dims[0]
    rows: list[Vector] = []
    rhs: list = []
    for j in range(n):
        for k in range(n):
            left = {i: mult.get(i, j, k) for i in range(n) if mult.get(i, j, k)}
            right = {i: mult.get(j, i, k) for i in range(n) if mult.get(j, i, k)}
            target = field.one() if j == k else field.zero()
            rows.extend([left, right])
            rhs.extend([target, target])
    solution = solve_linear(Matrix.from_rows(rows, n, field), rhs)
    return None if solution is None else solution.particular


def scalar_algebra(H: HopfAlgebra) -> HAlgebra:
    """ℂ with the trivial action."""
    mult = Tensor3.from_entries((1, 1, 1), H.field, [(0, 0, 0, 1)])
    return HAlgebra(trivial_module(H, 1, "C"), mult, {0: H.field.one()}, name="C")


def trivial_algebra(H: HopfAlgebra, mult: Tensor3, unit_vec: Vector | None = None, name: str = "") -> HAlgebra:
    """Any algebra with the trivial action t·a = ε(t)a."""
    n = mult.dims[0]
    return HAlgebra(trivial_module(H, n, name), mult, unit_vec, name=name)


def underlying_algebra(H: HopfAlgebra, K: HopfAlgebra) -> HAlgebra:
    """The algebra of K (e.g. ℂ[C₂] ≅ ℂ²) as an H-algebra with trivial action."""
    return trivial_algebra(H, K.mult, dict(K.unit), name=K.name)


def dual_regular_algebra(H: HopfAlgebra) -> HAlgebra:
    """Ĥ with convolution product and the action t ⇀ f."""
    Hd = dual_hopf(H)
    return HAlgebra(dual_regular_module(H), Hd.mult, dict(Hd.unit), name=Hd.name)


def validate_halgebra(A: HAlgebra) -> ValidationReport:
    """Associativity, H-linearity t·(ab) = (t_(1)·a)(t_(2)·b), unit compatibility."""
    report = ValidationReport(f"H-algebra axioms · {A.name or 'A'}")
    report.extend(validate_module(A.module), prefix="module")
    H, n, fld = A.hopf, A.dim, A.field
    e = lambda i: unit(i, fld)  # noqa: E731

    products = {(i, j): amul(A, e(i), e(j)) for i in range(n) for j in range(n)}
    witness = first_mismatch(
        ({"i": i, "j": j, "k": k}, amul(A, products[i, j], e(k)), amul(A, e(i), products[j, k]))
        for i in progress(range(n), "associativity") for j in range(n) for k in range(n)
    )
    report.add("associativity", witness is None, "(ab)c = a(bc)", witness)

    def split_product(t: int, i: int, j: int) -> Vector:
        out: Vector = {}
        for (p, q), c in comul(H, H.basis(t)).items():
            axpy(out, c, amul(A, A.module.matrices[p].column(i), A.module.matrices[q].column(j)))
        return out

    witness = first_mismatch(
        ({"t": t, "a": i, "b": j}, A.module.matrices[t].apply(products[i, j]), split_product(t, i, j))
        for t in range(H.dim) for i in progress(range(n), "H-linearity") for j in range(n)
    )
    report.add("H-linearity", witness is None, "t·(ab) = (t_(1)·a)(t_(2)·b)", witness)

    if A.unit is not None:
        witness = first_mismatch(
            ({"a": i}, amul(A, A.unit, e(i)), e(i)) for i in range(n)
        ) or first_mismatch(({"a": i}, amul(A, e(i), A.unit), e(i)) for i in range(n))
        report.add("unit", witness is None, "1a = a = a1", witness)
        witness = first_mismatch(
            ({"t": t}, A.module.matrices[t].apply(A.unit), vec_scale(eps(H, H.basis(t)), A.unit))
            for t in range(H.dim)
        )
        report.add("unit invariant", witness is None, "t·1 = ε(t)1", witness)
    return report


def unitarize(A: HAlgebra) -> HAlgebra:
    """A⁺ = A ⊕ ℂ with the adjoined unit at index dim A, acted on trivially."""
    H, n, fld = A.hopf, A.dim, A.field
    entries = [(i, j, k, v) for i, j, k, v in A.mult.items()]
    for i in range(n):
        entries.append((n, i, i, 1))
        entries.append((i, n, i, 1))
    entries.append((n, n, n, 1))
    mult = Tensor3.from_entries((n + 1, n + 1, n + 1), fld, entries)
    mats = []
    for t in range(H.dim):
        m = A.module.matrices[t]
        columns = [dict(m.column(j)) for j in range(n)]
        e_t = eps(H, H.basis(t))
        columns.append({n: e_t} if e_t else {})
        mats.append(Matrix(n + 1, n + 1, fld, columns))
    module = module_from_matrices(H, mats, f"{A.module.name}⁺")
    return HAlgebra(module, mult, {n: fld.one()}, name=f"{A.name}⁺")


def algebra_map_check(phi: Matrix, A: HAlgebra, B: HAlgebra, title: str = "",
                      equivariant: bool = True) -> ValidationReport:
    """φ: A → B multiplicative, unital when both are unital, and H-linear."""
    report = ValidationReport(title or f"Algebra map {A.name} → {B.name}")
    n = A.dim
    e = lambda i: unit(i, A.field)  # noqa: E731
    witness = first_mismatch(
        ({"a": i, "b": j}, phi.apply(amul(A, e(i), e(j))), amul(B, phi.column(i), phi.column(j)))
        for i in progress(range(n), "multiplicativity") for j in range(n)
    )
    report.add("multiplicative", witness is None, "φ(ab) = φ(a)φ(b)", witness)
    if A.unit is not None and B.unit is not None:
        report.add("unital", vec_equal(phi.apply(A.unit), B.unit), "φ(1) = 1",
                   first_mismatch([({}, phi.apply(A.unit), B.unit)]))
    if equivariant:
        witness = is_linear_map(phi, A.module, B.module)
        report.add("equivariant", witness is None, "φ(t·a) = t·φ(a)", witness)
    return report


# ── Crossed products ─────────────────────────────────────────────────────────

@dataclass(eq=False)
class CrossedProduct:
    algebra: HAlgebra       # A⋊H as an Ĥ-algebra, basis a·d + x
    base: HAlgebra
    hopf: HopfAlgebra
    report: ValidationReport | None = None


def crossed_product(A: HAlgebra, validate: bool = False) -> CrossedProduct:
    """(a⋊x)(b⋊y) = a(x_(1)·b) ⋊ x_(2)y with the dual action f·(a⋊x) = a⋊(f⇀x)."""
    H, n, fld = A.hopf, A.dim, A.field
    d = H.dim
    Hd = dual_hopf(H)

    def product(p: int, q: int) -> Vector:
        a, x = divmod(p, d)
        b, y = divmod(q, d)
        out: Vector = {}
        for (i, j), c in comul(H, H.basis(x)).items():
            left = amul(A, unit(a, fld), A.module.matrices[i].column(b))
            right = mul(H, H.basis(j), H.basis(y))
            if left and right:
                axpy(out, c, tensor_vec(left, right, d))
        return out

    mult = Tensor3.from_bilinear((n * d, n * d, n * d), fld, product)
    ident = Matrix.identity(n, fld)
    mats = [ident.kron(hit_matrix(H, Hd.basis(f), "left")) for f in range(d)]
    module = module_from_matrices(Hd, mats, f"{A.name}⋊{H.name}")
    unit_vec = tensor_vec(A.unit, H.one(), d) if A.unit is not None else None
    algebra = HAlgebra(module, mult, unit_vec, name=f"{A.name}⋊{H.name}")
    result = CrossedProduct(algebra=algebra, base=A, hopf=H)
    if validate:
        result.report = validate_halgebra(algebra)
    logger.info(f"Crossed product {algebra.name}: dim {algebra.dim}")
    return result


def double_crossed_product(A: HAlgebra) -> HAlgebra:
    """A⋊H⋊Ĥ on the basis (a·d + x)·d + f, an H-algebra through t·(a⋊x⋊f) = a⋊x⋊(t⇀f)."""
    inner = crossed_product(A).algebra
    return crossed_product(inner).algebra


# ── Pairings ─────────────────────────────────────────────────────────────────

@dataclass(eq=False)
class PairedSpace:
    module: HModule
    pairing: Matrix        # pairing[i, j] = b(v_i, v_j)
    name: str = ""

    @property
    def dim(self) -> int:
        return self.module.dim


def bilinear(P: PairedSpace, v: Vector, w: Vector) -> Scalar:
    return pair(v, P.pairing.apply(w), P.module.field)


def validate_pairing(P: PairedSpace) -> ValidationReport:
    report = ValidationReport(f"Pairing · {P.name or 'b'}")
    M, H = P.module, P.module.hopf
    B = P.pairing
    report.add("nonzero", not B.is_zero(), "b ≠ 0", {"lhs": "0", "rhs": "a nonzero pairing"})
    witness = None
    for t in range(H.dim):
        acc = Matrix.zeros(M.dim, M.dim, M.field)
        for (i, j), c in comul(H, H.basis(t)).items():
            acc = acc + (M.matrices[i].transpose() @ B @ M.matrices[j]).scale(c)
        expected = B.scale(eps(H, H.basis(t)))
        diff = acc.first_difference(expected)
        if diff:
            witness = {"t": t, **diff}
            break
    report.add("equivariant", witness is None, "b(t_(1)·v, t_(2)·w) = ε(t) b(v, w)", witness)
    return report


def regular_pairing(H: HopfAlgebra) -> PairedSpace:
    """V = H with left multiplication, β(x, y) = ψ(S(x) y)."""
    psi = haar_data(H).psi
    B = Matrix.from_dense(
        [[pair(psi, mul(H, antipode(H, H.basis(x)), H.basis(y)), H.field) for y in range(H.dim)]
         for x in range(H.dim)],
        H.field,
    )
    return PairedSpace(regular_module(H), B, name=f"β on {H.name}")


def dual_regular_pairing(H: HopfAlgebra) -> PairedSpace:
    """V = Ĥ with (t⇀f)(x) = f(xt), β(f, g) = ψ̂(fg)."""
    psi_hat = haar_data(H).psi_hat
    B = Matrix.from_dense(
        [[pair(psi_hat, convolve(H, H.basis(f), H.basis(g)), H.field) for g in range(H.dim)]
         for f in range(H.dim)],
        H.field,
    )
    return PairedSpace(dual_regular_module(H), B, name=f"β on {dual_hopf(H).name}")


def trivialized(P: PairedSpace) -> PairedSpace:
    """V_τ: the same space and pairing with the trivial action."""
    return PairedSpace(trivial_module(P.module.hopf, P.dim, f"{P.module.name}_τ"), P.pairing,
                       name=f"{P.name}_τ")


def pairing_algebra(P: PairedSpace, A: HAlgebra) -> HAlgebra:
    """l(b; A) on V⊗A⊗V (basis (v·n + a)·m + w) with the diagonal H-action."""
    if not P.module.hopf.same_structure(A.hopf):
        raise InputError(f"Pairing over {P.module.hopf.name} but algebra over {A.hopf.name}")
    check = validate_pairing(P)
    if not check.ok:
        raise InputError(f"Pairing {P.name} is not equivariant", "pairing")
    m, n, fld = P.dim, A.dim, A.field
    size = m * n * m
    B = P.pairing
    fibers: dict[int, dict[int, Vector]] = {}
    for v2 in range(m):
        for w1, bval in B.column(v2).items():
            for a1 in range(n):
                for a2 in range(n):
                    prod = amul(A, unit(a1, fld), unit(a2, fld))
                    if not prod:
                        continue
                    for v1 in range(m):
                        for w2 in range(m):
                            left = (v1 * n + a1) * m + w1
                            right = (v2 * n + a2) * m + w2
                            target = fibers.setdefault(left, {}).setdefault(right, {})
                            for a, c in prod.items():
                                axpy(target, bval * c, {(v1 * n + a) * m + w2: fld.one()})
    mult = Tensor3(
        (size, size, size), fld,
        {i: {j: v for j, v in row.items() if v} for i, row in fibers.items()},
    )
    module = diagonal_action(A.hopf, [P.module, A.module, P.module], f"l({P.name}; {A.name})")
    unit_vec = None
    if A.unit is not None and B.is_invertible():
        C = B.inverse()
        unit_vec = {}
        for j in range(m):
            for i, c in C.column(j).items():
                for a, u in A.unit.items():
                    axpy(unit_vec, c * u, {(i * n + a) * m + j: fld.one()})
    return HAlgebra(module, mult, unit_vec, name=f"l({P.name}; {A.name})")


def kernel_algebra(H: HopfAlgebra) -> HAlgebra:
    """K_H = l(β; ℂ) on Ĥ ⊗ ℂ ⊗ Ĥ."""
    return pairing_algebra(dual_regular_pairing(H), scalar_algebra(H))


def anisotropic_invariant(P: PairedSpace) -> tuple[Vector, Scalar] | None:
    """An invariant u with b(u, u) ≠ 0, searched over the invariant basis and a fixed grid."""
    inv = invariant_subspace(P.module)
    basis = inv.basis
    candidates = list(basis)
    grid = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(3)]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for c in grid:
                candidates.append(_combine(basis[i], c, basis[j]))
    for u in candidates:
        value = bilinear(P, u, u)
        if value:
            return u, value
    return None


def _combine(u: Vector, c: Fraction, v: Vector) -> Vector:
    out = dict(u)
    return axpy(out, c, v)


def admissible_vector(P: PairedSpace) -> Vector | None:
    """Invariant u with b(u, u) = 1, or None (also when b(u, u) has no square root in the field)."""
    found = anisotropic_invariant(P)
    if found is None:
        return None
    u, value = found
    root = sqrt(value)
    if root is None:
        logger.info(f"{P.name}: invariant u has b(u,u) = {value}, not a square in {P.module.field.describe()}")
        return None
    return vec_scale(root.inv(), u)


def normalize_pairing(P: PairedSpace) -> tuple[PairedSpace, Vector] | None:
    """Rescale b so that an anisotropic invariant u has b(u, u) = 1."""
    found = anisotropic_invariant(P)
    if found is None:
        return None
    u, value = found
    root = sqrt(value)
    if root is not None:
        return P, vec_scale(root.inv(), u)
    return PairedSpace(P.module, P.pairing.scale(value.inv()), name=f"{P.name}/{value}"), u


# ── Takesaki–Takai duality ───────────────────────────────────────────────────

@dataclass
class TakesakiTakai:
    matrix: Matrix
    domain: HAlgebra
    target: HAlgebra
    report: ValidationReport = field(default_factory=lambda: ValidationReport("Takesaki–Takai"))


def takesaki_takai(A: HAlgebra, check_multiplicative: bool = True) -> TakesakiTakai:
    """
    γ_A: A⋊H⋊Ĥ → l(β; A) on H⊗A⊗H,
    γ_A(a⋊x⋊F_l(y)) = y_(1)S(x_(2)) ⊗ y_(2)S(x_(1))·a ⊗ y_(3),
    with β(p, q) = ψ(S(p)q) and the diagonal action on the target.
    """
    H, n, fld = A.hopf, A.dim, A.field
    d = H.dim
    domain = double_crossed_product(A)
    target = pairing_algebra(regular_pairing(H), A)

    def image(idx: int) -> Vector:
        rest, y = divmod(idx, d)
        a, x = divmod(rest, d)
        out: Vector = {}
        for (p, q), c1 in comul(H, H.basis(x)).items():
            s_q, s_p = antipode(H, H.basis(q)), antipode(H, H.basis(p))
            for (i, j, k), c2 in sweedler(H, H.basis(y), 3).items():
                first = mul(H, H.basis(i), s_q)
                middle = A.module.action.apply(mul(H, H.basis(j), s_p), unit(a, fld))
                for u, cu in first.items():
                    for b, cb in middle.items():
                        axpy(out, c1 * c2 * cu * cb, {(u * n + b) * d + k: fld.one()})
        return out

    size = n * d * d
    gamma_y = Matrix.from_images(size, size, fld, image)
    Fl_inv = fourier(H).Fl.inverse()
    gamma = gamma_y @ Matrix.identity(n * d, fld).kron(Fl_inv)

    report = ValidationReport(f"Takesaki–Takai · {A.name} over {H.name}")
    report.add_count("bijective", gamma.rank(), size)
    witness = is_linear_map(gamma, domain.module, target.module)
    report.add("equivariant (diagonal action on H⊗A⊗H)", witness is None, "", witness)
    if domain.unit is not None and target.unit is not None:
        report.add("unital", vec_equal(gamma.apply(domain.unit), target.unit), "γ(1) = 1",
                   first_mismatch([({}, gamma.apply(domain.unit), target.unit)]))
    if check_multiplicative:
        e = lambda i: unit(i, fld)  # noqa: E731
        witness = first_mismatch(
            ({"u": i, "v": j}, gamma.apply(amul(domain, e(i), e(j))),
             amul(target, gamma.column(i), gamma.column(j)))
            for i in progress(range(size), "γ_A multiplicativity") for j in range(size)
        )
        report.add("multiplicative", witness is None, "γ(uv) = γ(u)γ(v)", witness)
    logger.info(report.summary())
    return TakesakiTakai(matrix=gamma, domain=domain, target=target, report=report)


# ── Trivializations and stability ────────────────────────────────────────────

def alpha_maps(M: HModule) -> ValidationReport:
    """
    α_l(x⊗v) = x_(1) ⊗ S(x_(2))·v : H⊗V → H⊗V_τ and
    α_r(v⊗x) = S⁻¹(x_(1))·v ⊗ x_(2) : V⊗H → V_τ⊗H, both H-linear bijections.
    """
    H, m, fld = M.hopf, M.dim, M.field
    d = H.dim
    report = ValidationReport(f"Trivializations · {M.name or 'V'}")
    regular = regular_module(H)
    flat = trivial_module(H, m)

    def alpha_l(idx: int) -> Vector:
        x, v = divmod(idx, m)
        out: Vector = {}
        for (i, j), c in comul(H, H.basis(x)).items():
            axpy(out, c, tensor_vec(H.basis(i), act(M, antipode(H, H.basis(j)), unit(v, fld)), m))
        return out

    def alpha_r(idx: int) -> Vector:
        v, x = divmod(idx, d)
        out: Vector = {}
        for (i, j), c in comul(H, H.basis(x)).items():
            axpy(out, c, tensor_vec(act(M, antipode_inv(H, H.basis(i)), unit(v, fld)), H.basis(j), d))
        return out

    left = Matrix.from_images(d * m, d * m, fld, alpha_l)
    right = Matrix.from_images(m * d, m * d, fld, alpha_r)
    report.add_count("α_l bijective", left.rank(), left.cols)
    report.add_count("α_r bijective", right.rank(), right.cols)
    report.add("α_l H-linear", (w := is_linear_map(left, diagonal_action(H, [regular, M]),
                                                   diagonal_action(H, [regular, flat]))) is None, "", w)
    report.add("α_r H-linear", (w := is_linear_map(right, diagonal_action(H, [M, regular]),
                                                   diagonal_action(H, [flat, regular]))) is None, "", w)
    return report


def stability_isomorphism(P: PairedSpace, A: HAlgebra) -> tuple[Matrix, ValidationReport]:
    """
    γ: l(b_τ; l(β; A)) → l(β; l(b; A)),
    v⊗(x⊗a⊗y)⊗w ↦ x_(1) ⊗ (x_(2)·v ⊗ a ⊗ y_(1)·w) ⊗ y_(2).
    """
    H, m, n, fld = A.hopf, P.dim, A.dim, A.field
    d = H.dim
    beta = regular_pairing(H)
    domain = pairing_algebra(trivialized(P), pairing_algebra(beta, A))
    target = pairing_algebra(beta, pairing_algebra(P, A))
    inner_k = d * n * d
    inner_l = m * n * m

    def image(idx: int) -> Vector:
        rest, w = divmod(idx, m)
        v, k = divmod(rest, inner_k)
        rest2, y = divmod(k, d)
        x, a = divmod(rest2, n)
        out: Vector = {}
        for (x1, x2), cx in comul(H, H.basis(x)).items():
            moved_v = P.module.matrices[x2].column(v)
            for (y1, y2), cy in comul(H, H.basis(y)).items():
                moved_w = P.module.matrices[y1].column(w)
                for vv, c1 in moved_v.items():
                    for ww, c2 in moved_w.items():
                        inner = (vv * n + a) * m + ww
                        axpy(out, cx * cy * c1 * c2, {(x1 * inner_l + inner) * d + y2: fld.one()})
        return out

    size = m * inner_k * m
    gamma = Matrix.from_images(size, size, fld, image)
    report = ValidationReport(f"Stability isomorphism · {P.name}, {A.name}")
    report.add_count("bijective", gamma.rank(), size)
    report.extend(algebra_map_check(gamma, domain, target, "γ"), prefix="")
    return gamma, report


