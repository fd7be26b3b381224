"""
homology.py
-----------
Hom-complexes between paracomplexes of AYD modules and their homology.

Key behaviors:
- A Hom-complex element is a block matrix on P_even ⊕ P_odd → Q_even ⊕ Q_odd whose blocks
  are AYD maps; even elements are block-diagonal, odd ones block-antidiagonal
- ∂f = ∂_Q f − (−1)^{|f|} f ∂_P; ∂² = 0 is asserted, never assumed
- Only Hom-complexes have homology here; a paracomplex on its own has none
- hp_equivariant runs the θ-level model in three modes (full / semisimple / theta) and
  labels every result as a finite-level approximation
- A dimension cap (HOPFCYC_DIM_CAP) aborts before any oversized space is built
"""

import json
import logging
import os
from dataclasses import dataclass, field

import pandas as pd
from dotenv import load_dotenv

from action import HAlgebra, double_crossed_product
from ayd import Paracomplex, hom_ayd
from checks import DimensionCapError, InconsistencyError, InputError, ValidationReport, progress
from exactla import Matrix, Subspace, Vector, axpy, block_matrix, image, kernel
from forms import build_forms, hodge_level
from hopf import HopfAlgebra, dual_hopf, haar_data, invariant_functionals, pair

load_dotenv()

logger = logging.getLogger(__name__)

DIM_CAP = int(os.getenv("HOPFCYC_DIM_CAP", "5000"))

MODES = ("full", "semisimple", "theta")


# ── Hom-complexes ────────────────────────────────────────────────────────────

@dataclass(eq=False)
class HomComplex:
    source: Paracomplex
    target: Paracomplex
    even: Subspace           # flattened block matrices, echelon basis
    odd: Subspace
    d_even: Matrix           # Hom_even → Hom_odd in echelon coordinates
    d_odd: Matrix            # Hom_odd → Hom_even
    report: ValidationReport

    @property
    def shape(self) -> tuple[int, int]:
        """(rows, cols) of a Hom element as a block matrix."""
        return (self.target.even.dim + self.target.odd.dim, self.source.even.dim + self.source.odd.dim)

    def space(self, parity: int) -> Subspace:
        return self.even if parity == 0 else self.odd

    def to_matrix(self, parity: int, coords: Vector) -> Matrix:
        rows, cols = self.shape
        flat = self.space(parity).combine(coords.get(i, self.space(parity).field.zero())
                                          for i in range(self.space(parity).dim))
        return _unflatten(flat, rows, cols, self.space(parity).field)

    def coordinates(self, parity: int, f: Matrix) -> Vector:
        """Echelon coordinates of a Hom element; InputError if f is not in the space."""
        space = self.space(parity)
        flat = _flatten(f)
        if not space.contains(flat):
            raise InputError(f"Map is not a degree-{parity} element of the Hom-complex")
        return {i: c for i, c in enumerate(space.coordinates(flat)) if c}

    def differential(self, parity: int) -> Matrix:
        return self.d_even if parity == 0 else self.d_odd


def _flatten(f: Matrix) -> Vector:
    out: Vector = {}
    for c in range(f.cols):
        for r, v in f.column(c).items():
            out[r * f.cols + c] = v
    return out


def _unflatten(v: Vector, rows: int, cols: int, fld) -> Matrix:
    columns: list[Vector] = [{} for _ in range(cols)]
    for idx, c in v.items():
        r, col = divmod(idx, cols)
        columns[col][r] = c
    return Matrix(rows, cols, fld, columns)


def _total_differential(P: Paracomplex) -> Matrix:
    e, o = P.even.dim, P.odd.dim
    return block_matrix([[None, P.d1], [P.d0, None]], [e, o], [e, o], P.even.field)


def hom_complex(P: Paracomplex, Q: Paracomplex) -> HomComplex:
    """Hom_{A(H)}(P, Q) with ∂f = ∂_Q f − (−1)^{|f|} f ∂_P."""
    if not P.even.hopf.same_structure(Q.even.hopf):
        raise InputError(f"Paracomplexes over {P.even.hopf.name} and {Q.even.hopf.name}")
    fld = P.even.field
    pe, po, qe, qo = P.even.dim, P.odd.dim, Q.even.dim, Q.odd.dim
    report = ValidationReport(f"Hom({P.name}, {Q.name})")

    def placed(blocks: list[tuple[int, int, Matrix]]) -> Matrix:
        grid: list[list[Matrix | None]] = [[None, None], [None, None]]
        for r, c, m in blocks:
            grid[r][c] = m
        return block_matrix(grid, [qe, qo], [pe, po], fld)

    even_maps = [placed([(0, 0, X)]) for X in hom_ayd(P.even, Q.even)]
    even_maps += [placed([(1, 1, X)]) for X in hom_ayd(P.odd, Q.odd)]
    odd_maps = [placed([(1, 0, X)]) for X in hom_ayd(P.even, Q.odd)]
    odd_maps += [placed([(0, 1, X)]) for X in hom_ayd(P.odd, Q.even)]
    even = Subspace.span((qe + qo) * (pe + po), fld, (_flatten(f) for f in even_maps))
    odd = Subspace.span((qe + qo) * (pe + po), fld, (_flatten(f) for f in odd_maps))

    dP, dQ = _total_differential(P), _total_differential(Q)
    rows, cols = qe + qo, pe + po

    def boundary(parity: int, space: Subspace, target: Subspace) -> Matrix:
        sign = 1 if parity == 0 else -1
        columns = []
        for flat in progress(space.basis, f"∂ on Hom degree {parity}"):
            f = _unflatten(flat, rows, cols, fld)
            df = dQ @ f - (f @ dP).scale(sign)
            image_flat = _flatten(df)
            if not target.contains(image_flat):
                raise InconsistencyError(f"∂ of a degree-{parity} Hom element left the Hom space",
                                         {"parity": parity})
            columns.append({i: c for i, c in enumerate(target.coordinates(image_flat)) if c})
        return Matrix(target.dim, space.dim, fld, columns)

    d_even, d_odd = boundary(0, even, odd), boundary(1, odd, even)
    for label, sq in (("∂² = 0 on even", d_odd @ d_even), ("∂² = 0 on odd", d_even @ d_odd)):
        report.add(label, sq.is_zero(), "", sq.first_difference(Matrix.zeros(sq.rows, sq.cols, fld)))
    report.values["dim Hom even"] = even.dim
    report.values["dim Hom odd"] = odd.dim
    logger.info(f"Hom({P.name}, {Q.name}): dims ({even.dim}, {odd.dim})")
    if not report.ok:
        raise InconsistencyError(f"∂² ≠ 0 on Hom({P.name}, {Q.name})", report.failures()[0].witness)
    return HomComplex(P, Q, even, odd, d_even, d_odd, report)


# ── Homology ─────────────────────────────────────────────────────────────────

@dataclass
class HomologyRanks:
    h0: int
    h1: int
    representatives: dict[int, list[Vector]] = field(default_factory=dict)   # parity → cycle coordinates

    @property
    def ranks(self) -> tuple[int, int]:
        return self.h0, self.h1


def homology_ranks(C: HomComplex) -> HomologyRanks:
    """rank H_p = dim ker ∂_p − rank ∂_{p+1}, with representatives completing im ∂ inside ker ∂."""
    reps: dict[int, list[Vector]] = {}
    ranks = []
    for parity in (0, 1):
        cycles = kernel(C.differential(parity))
        boundaries = image(C.differential(1 - parity))
        span, chosen = boundaries, []
        for z in cycles.basis:
            if not span.contains(z):
                chosen.append(z)
                span = span.sum(Subspace.span(span.ambient, span.field, [z]))
        reps[parity] = chosen
        ranks.append(cycles.dim - boundaries.dim)
        if len(chosen) != ranks[-1]:
            raise InconsistencyError(f"Representative count {len(chosen)} ≠ rank {ranks[-1]}")
    return HomologyRanks(ranks[0], ranks[1], reps)


def is_cycle(C: HomComplex, parity: int, coords: Vector) -> bool:
    return not C.differential(parity).apply(coords)


def same_class(C: HomComplex, parity: int, x: Vector, y: Vector) -> bool:
    """x − y ∈ ∂(Hom_{1−parity})."""
    diff = dict(x)
    axpy(diff, -C.space(parity).field.one(), y)
    return image(C.differential(1 - parity)).contains(diff)


def hom_cycle_from_chain_map(C: HomComplex, even_map: Matrix, odd_map: Matrix) -> Vector:
    """Coordinates of the degree-0 element diag(even_map, odd_map); InputError unless it is a cycle."""
    fld = C.even.field
    f = block_matrix([[even_map, None], [None, odd_map]],
                     [C.target.even.dim, C.target.odd.dim], [C.source.even.dim, C.source.odd.dim], fld)
    coords = C.coordinates(0, f)
    if not is_cycle(C, 0, coords):
        raise InputError("Map does not commute with the differentials")
    return coords


def identity_class(C: HomComplex) -> Vector:
    if C.source is not C.target:
        raise InputError("[id] needs Hom(P, P)")
    P = C.source
    fld = P.even.field
    return hom_cycle_from_chain_map(C, Matrix.identity(P.even.dim, fld), Matrix.identity(P.odd.dim, fld))


def compose_classes(C_ab: HomComplex, x: Vector, px: int, C_bc: HomComplex, y: Vector, py: int,
                    C_ac: HomComplex) -> tuple[Vector, int]:
    """x·y: the composition y∘x of representatives, as a cycle of Hom(A, C) of degree px + py."""
    if C_ab.target is not C_bc.source or C_ab.source is not C_ac.source or C_bc.target is not C_ac.target:
        raise InputError("Hom-complexes do not compose")
    if not (is_cycle(C_ab, px, x) and is_cycle(C_bc, py, y)):
        raise InputError("compose_classes needs cycles")
    composite = C_bc.to_matrix(py, y) @ C_ab.to_matrix(px, x)
    parity = (px + py) % 2
    coords = C_ac.coordinates(parity, composite)
    if not is_cycle(C_ac, parity, coords):
        raise InconsistencyError("Composition of cycles is not a cycle")
    return coords, parity


# ── Finite-level HP ──────────────────────────────────────────────────────────

def semisimple_type(H: HopfAlgebra) -> bool:
    """φ̂(1) ≠ 0, cross-checked against a second solve of the invariance system on Ĥ."""
    Hd = dual_hopf(H)
    value = pair(haar_data(H).phi_hat, Hd.unit, H.field)
    second = invariant_functionals(Hd).basis[0]
    if bool(pair(second, Hd.unit, H.field)) != bool(value):
        raise InconsistencyError(f"Two solves disagree on φ̂(1) for {H.name}")
    logger.debug(f"{H.name}: φ̂(1) = {value}")
    return bool(value)


@dataclass
class HPResult:
    mode: str
    level: int
    ranks: tuple[int, int]
    table: pd.DataFrame
    note: str = "finite-level approximation; no limit is claimed"
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "level": self.level,
            "ranks": list(self.ranks),
            "note": self.note,
            "table": json.loads(self.table.to_json(orient="records")),
            "values": self.values,
        }


def forecast(alg: HAlgebra, level: int, other: HAlgebra | None = None) -> dict:
    """
    Upper bounds on the spaces a level-ℓ run builds: dim Ω^k_H for k ≤ ℓ + 1,
    dim θ^ℓ ≤ Σ_{k≤ℓ} dim Ω^k_H, and the flattened Hom(θ^ℓ, θ^ℓ(other))
    ambient the equivariance solve runs in.
    """
    d, n = alg.hopf.dim, alg.dim
    dims = [d * (n if k == 0 else (n + 1) * n ** k) for k in range(level + 2)]
    theta = sum(dims[:level + 1])
    other_theta = theta if other is None else forecast(other, level)["dim θ bound"]
    return {"algebra": alg.name, "level": level, "dim Ω^k_H": dims, "largest": max(dims),
            "dim θ bound": theta, "dim Hom ambient": theta * other_theta}


def _coefficients(A: HAlgebra, mode: str) -> HAlgebra:
    if mode == "full":
        return double_crossed_product(A)
    if mode == "semisimple" and not semisimple_type(A.hopf):
        raise InputError(f"{A.hopf.name} is not of semisimple type; use mode 'full'", "mode")
    return A


def hp_equivariant(A: HAlgebra, B: HAlgebra, mode: str = "theta", level: int = 1,
                   cap: int | None = None) -> HPResult:
    """
    Ranks of H_*(Hom(θ^ℓΩ_H(A'), θ^ℓΩ_H(B'))) for ℓ = 1..level, where A' = A⋊H⋊Ĥ in
    mode 'full' and A' = A otherwise. The last row of the table is the result.
    """
    if mode not in MODES:
        raise InputError(f"Unknown mode '{mode}' (expected one of {MODES})", "mode")
    if level < 1:
        raise InputError(f"Level must be ≥ 1, got {level}", "level")
    if not A.hopf.same_structure(B.hopf):
        raise InputError(f"Algebras over different Hopf algebras: {A.hopf.name}, {B.hopf.name}")
    cap = DIM_CAP if cap is None else cap
    A2, B2 = _coefficients(A, mode), _coefficients(B, mode)
    for alg in (A2, B2):
        size = forecast(alg, level)
        if size["largest"] > cap:
            raise DimensionCapError(f"{alg.name} at level {level} needs dim {size['largest']} > cap {cap}", size)
    size = forecast(A2, level, B2)
    if size["dim Hom ambient"] > cap:
        raise DimensionCapError(f"Hom({A2.name}, {B2.name}) at level {level} needs ambient dim "
                                f"{size['dim Hom ambient']} > cap {cap}", size)

    FA = build_forms(A2, degree=level, full=True)
    FB = FA if B2 is A2 else build_forms(B2, degree=level, full=True)
    rows = []
    ranks = (0, 0)
    for ell in range(1, level + 1):
        LA = hodge_level(FA, ell)
        LB = LA if FB is FA else hodge_level(FB, ell)
        C = hom_complex(LA.paracomplex, LB.paracomplex)
        ranks = homology_ranks(C).ranks
        rows.append({"level": ell, "HP_0": ranks[0], "HP_1": ranks[1],
                     "dim Hom even": C.even.dim, "dim Hom odd": C.odd.dim})
        logger.info(f"[{mode}] level {ell}: ranks {ranks}")
    result = HPResult(mode, level, ranks, stabilization_table(rows))
    result.values["algebras"] = [A2.name, B2.name]
    if A.hopf.dim > 1 and A.dim == 1 and B.dim == 1:
        result.values["exploratory"] = f"rank HP_0 = {ranks[0]} for one-dimensional coefficients"
    return result


def stabilization_table(rows: list[dict]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=["level", "HP_0", "HP_1", "dim Hom even", "dim Hom odd"])
