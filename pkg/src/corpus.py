"""
corpus.py
---------
Catalog of the standard finite-dimensional Hopf algebras used as test inputs.

Key behaviors:
- Group tables for cyclic groups C_n and symmetric groups S_n, validated before use
- Group algebras ℂ[G] (Δ(g) = g⊗g, S(g) = g⁻¹) and function algebras ℂ^G
- Sweedler's H₄ and the Taft algebras T_n generated from their presentations:
  basis g^i x^j at index j·n + i, products reduced to normal form
- Every entry point returns a HopfAlgebra; validation is left to hopf.validate_hopf
"""

import itertools
import logging
import re

from checks import InputError
from exactla import FieldSpec, Matrix, Tensor3, Vector, axpy, zeta
from hopf import HopfAlgebra, dual_hopf

logger = logging.getLogger(__name__)

# name → one-line description, also used for `main.py corpus --list`
CORPUS_DESCRIPTIONS = {
    "trivial": "ℂ, the one-dimensional Hopf algebra",
    "group_algebra": "ℂ[G] for G = C<n> or S<n>",
    "function_algebra": "ℂ^G, pointwise product, Δ dual to the group law",
    "sweedler": "Sweedler's 4-dimensional H₄: g² = 1, x² = 0, xg = −gx",
    "taft": "Taft algebra T_n over ℚ(ζ_n): gⁿ = 1, xⁿ = 0, xg = ζ gx",
}


# ── Groups ───────────────────────────────────────────────────────────────────

def cyclic_group(n: int) -> list[list[int]]:
    if n < 1:
        raise InputError(f"Cyclic group order must be ≥ 1, got {n}")
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_group(n: int) -> list[list[int]]:
    """S_n with elements in lexicographic order; (p·q)(i) = p(q(i))."""
    if n < 1 or n > 5:
        raise InputError(f"Symmetric group degree must be in 1..5, got {n}")
    perms = list(itertools.permutations(range(n)))
    where = {p: k for k, p in enumerate(perms)}
    return [[where[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]


def group_table(spec: str) -> list[list[int]]:
    """Parse 'C4' / 'S3' into a multiplication table."""
    match = re.fullmatch(r"\s*([CcSs])\s*(\d+)\s*", spec or "")
    if not match:
        raise InputError(f"Unknown group '{spec}' (expected C<n> or S<n>)")
    kind, n = match.group(1).upper(), int(match.group(2))
    return cyclic_group(n) if kind == "C" else symmetric_group(n)


def validate_group_table(table: list[list[int]]) -> tuple[int, list[int]]:
    """Check closure, associativity, identity and inverses; return (identity, inverses)."""
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise InputError("Group table must be a nonempty square table")
    if any(not isinstance(v, int) or v < 0 or v >= n for row in table for v in row):
        raise InputError(f"Group table entries must lie in 0..{n - 1}")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise InputError(f"Group table is not associative at ({a},{b},{c})")
    identity = next((e for e in range(n) if all(table[e][a] == a == table[a][e] for a in range(n))), None)
    if identity is None:
        raise InputError("Group table has no identity element")
    inverses = []
    for a in range(n):
        inv = next((b for b in range(n) if table[a][b] == identity == table[b][a]), None)
        if inv is None:
            raise InputError(f"Element {a} has no inverse")
        inverses.append(inv)
    return identity, inverses


# ── Hopf algebras ────────────────────────────────────────────────────────────

def trivial(field: FieldSpec | None = None) -> HopfAlgebra:
    field = field or FieldSpec.rationals()
    one = Tensor3.from_entries((1, 1, 1), field, [(0, 0, 0, 1)])
    return HopfAlgebra(field=field, dim=1, mult=one, unit={0: field.one()},
                       comult=Tensor3.from_entries((1, 1, 1), field, [(0, 0, 0, 1)]),
                       counit={0: field.one()}, antipode=Matrix.identity(1, field),
                       name="C", labels=["1"])


def group_algebra(table: list[list[int]], field: FieldSpec | None = None, name: str = "G") -> HopfAlgebra:
    field = field or FieldSpec.rationals()
    identity, inverses = validate_group_table(table)
    n = len(table)
    mult = Tensor3.from_entries((n, n, n), field,
                                ((a, b, table[a][b], 1) for a in range(n) for b in range(n)))
    comult = Tensor3.from_entries((n, n, n), field, ((g, g, g, 1) for g in range(n)))
    antipode = Matrix.from_images(n, n, field, lambda g: {inverses[g]: field.one()})
    return HopfAlgebra(field=field, dim=n, mult=mult, unit={identity: field.one()}, comult=comult,
                       counit={g: field.one() for g in range(n)}, antipode=antipode,
                       name=f"C[{name}]", labels=[f"g{g}" for g in range(n)])


def function_algebra(table: list[list[int]], field: FieldSpec | None = None, name: str = "G") -> HopfAlgebra:
    """ℂ^G on the point-mass basis δ_g."""
    field = field or FieldSpec.rationals()
    identity, inverses = validate_group_table(table)
    n = len(table)
    mult = Tensor3.from_entries((n, n, n), field, ((g, g, g, 1) for g in range(n)))
    comult = Tensor3.from_entries((n, n, n), field,
                                  ((table[a][b], a, b, 1) for a in range(n) for b in range(n)))
    antipode = Matrix.from_images(n, n, field, lambda g: {inverses[g]: field.one()})
    return HopfAlgebra(field=field, dim=n, mult=mult, unit={g: field.one() for g in range(n)},
                       comult=comult, counit={identity: field.one()}, antipode=antipode,
                       name=f"C^{name}", labels=[f"δ{g}" for g in range(n)])


def _pair_product(mult: Tensor3, d: int, u: Vector, v: Vector) -> Vector:
    out: Vector = {}
    for a, ca in u.items():
        i1, j1 = divmod(a, d)
        for b, cb in v.items():
            i2, j2 = divmod(b, d)
            left, right = mult.fiber(i1, i2), mult.fiber(j1, j2)
            for k, x in left.items():
                for l, y in right.items():
                    axpy(out, ca * cb * x * y, {k * d + l: mult.field.one()})
    return out


def taft(n: int, field: FieldSpec | None = None) -> HopfAlgebra:
    """
    T_n = ⟨g, x | gⁿ = 1, xⁿ = 0, xg = ζ gx⟩ with Δ(g) = g⊗g, Δ(x) = x⊗1 + g⊗x,
    S(g) = g⁻¹, S(x) = −g⁻¹x. Basis g^i x^j at index j·n + i.
    """
    if n < 2:
        raise InputError(f"Taft algebras need n ≥ 2, got {n}")
    field = field or FieldSpec.cyclotomic(n)
    z = zeta(field, n)
    d = n * n

    def idx(i: int, j: int) -> int:
        return j * n + i

    entries = []
    for (i, j), (k, l) in itertools.product(itertools.product(range(n), repeat=2), repeat=2):
        if j + l < n:
            entries.append((idx(i, j), idx(k, l), idx((i + k) % n, j + l), z ** (j * k)))
    mult = Tensor3.from_entries((d, d, d), field, entries)
    one = field.one()

    def hmul(u: Vector, v: Vector) -> Vector:
        return mult.apply(u, v)

    unit_vec = {idx(0, 0): one}
    delta_g = {idx(1, 0) * d + idx(1, 0): one}
    delta_x = {idx(0, 1) * d + idx(0, 0): one, idx(1, 0) * d + idx(0, 1): one}
    g_inv = {idx(n - 1, 0): one}
    s_g, s_x = g_inv, {idx(n - 1, 1): -one}

    comult_entries = []
    antipode_columns = []
    for j in range(n):
        for i in range(n):
            delta: Vector = {0: one}
            s_val: Vector = dict(unit_vec)
            for _ in range(i):
                delta = _pair_product(mult, d, delta, delta_g)
                s_val = hmul(s_g, s_val)
            for _ in range(j):
                delta = _pair_product(mult, d, delta, delta_x)
                s_val = hmul(s_x, s_val)
            for key, c in delta.items():
                comult_entries.append((idx(i, j), *divmod(key, d), c))
            antipode_columns.append(s_val)
    comult = Tensor3.from_entries((d, d, d), field, comult_entries)
    antipode = Matrix.from_columns(d, antipode_columns, field)
    labels = [_monomial(i, j) for j in range(n) for i in range(n)]
    name = "H4" if n == 2 else f"T{n}"
    logger.debug(f"Built {name}: dim {d} over {field.describe()}, ζ = {z}")
    return HopfAlgebra(field=field, dim=d, mult=mult, unit=unit_vec, comult=comult,
                       counit={idx(i, 0): one for i in range(n)}, antipode=antipode,
                       name=name, labels=labels)


def _monomial(i: int, j: int) -> str:
    parts = [("g" if i == 1 else f"g^{i}") if i else "", ("x" if j == 1 else f"x^{j}") if j else ""]
    return "".join(parts) or "1"


def sweedler(field: FieldSpec | None = None) -> HopfAlgebra:
    """H₄ = T₂ with basis [1, g, x, gx]."""
    return taft(2, field or FieldSpec.rationals())


# ── Dispatch ─────────────────────────────────────────────────────────────────

def load_corpus(name: str, group: str | None = None, order: int | None = None,
                field: FieldSpec | None = None, dual: bool = False) -> HopfAlgebra:
    """Build a corpus algebra by name; `dual=True` returns its dual Ĥ."""
    key = name.strip().lower().replace("-", "_")
    if key == "trivial":
        H = trivial(field)
    elif key in ("group_algebra", "function_algebra"):
        if not group:
            raise InputError(f"{key} needs a group, e.g. group='S3'")
        table = group_table(group)
        build = group_algebra if key == "group_algebra" else function_algebra
        H = build(table, field, name=group.strip().upper())
    elif key == "sweedler":
        H = sweedler(field)
    elif key == "taft":
        if order is None:
            raise InputError("taft needs an order n")
        H = taft(order, field)
    else:
        raise InputError(f"Unknown corpus algebra '{name}'. Known: {sorted(CORPUS_DESCRIPTIONS)}")
    logger.info(f"Corpus algebra {H.name}: dim {H.dim} over {H.field.describe()}")
    return dual_hopf(H) if dual else H


def acceptance_corpus() -> list[HopfAlgebra]:
    """ℂ, ℂ[C₂], ℂ[C₄], ℂ[S₃], ℂ^{S₃}, H₄, T₃."""
    return [
        load_corpus("trivial"),
        load_corpus("group_algebra", group="C2"),
        load_corpus("group_algebra", group="C4"),
        load_corpus("group_algebra", group="S3"),
        load_corpus("function_algebra", group="S3"),
        load_corpus("sweedler"),
        load_corpus("taft", order=3),
    ]
