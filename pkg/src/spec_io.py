"""
spec_io.py
----------
Reads and writes the structure-constant JSON files every verb consumes.

Format:
- One self-describing object per file, discriminated by "kind": hopf | halgebra | pairing
- "field": {"kind": "rationals"} or {"kind": "cyclotomic", "order": n}
- Tensors are sparse entry lists [i, j, k, value]; vectors are [i, value]; matrices [row, col, value]
- Values are exact strings "p/q" (or lists of them, one per power of ζ_n); floats are rejected
- halgebra and pairing objects embed their Hopf algebra under "hopf"

Key behaviors:
- Every parse error is an InputError naming the file and the JSON path of the bad entry
- Serialization is canonical (sorted entries), so parse → serialize → parse is the identity
"""

import json
import logging
from pathlib import Path
from typing import Any

from action import HAlgebra, HModule, PairedSpace, module_from_matrices
from checks import InputError
from exactla import FieldSpec, Matrix, Scalar, Tensor3, Vector, scalar
from hopf import HopfAlgebra

logger = logging.getLogger(__name__)

KINDS = ("hopf", "halgebra", "pairing")

SpecObject = HopfAlgebra | HAlgebra | PairedSpace


# ── Parsing ──────────────────────────────────────────────────────────────────

def _require(data: dict, key: str, where: str) -> Any:
    if not isinstance(data, dict):
        raise InputError("Expected a JSON object", where)
    if key not in data:
        raise InputError(f"Missing key '{key}'", where)
    return data[key]


def _value(fld: FieldSpec, raw: Any, where: str) -> Scalar:
    if isinstance(raw, float):
        raise InputError(f"Inexact number {raw!r}; write values as \"p/q\" strings", where)
    try:
        return scalar(fld, raw)
    except InputError as exc:
        raise InputError(exc.reason, where) from None


def _index(raw: Any, bound: int, where: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or not 0 <= raw < bound:
        raise InputError(f"Index {raw!r} outside 0..{bound - 1}", where)
    return raw


def parse_field(raw: Any, where: str = "$.field") -> FieldSpec:
    if raw is None:
        return FieldSpec.rationals()
    kind = _require(raw, "kind", where)
    try:
        return FieldSpec(kind, raw.get("order", 1))
    except InputError as exc:
        raise InputError(exc.reason, where) from None


def parse_tensor(raw: Any, dims: tuple[int, int, int], fld: FieldSpec, where: str) -> Tensor3:
    if not isinstance(raw, list):
        raise InputError("Tensor must be a list of [i, j, k, value] entries", where)
    entries = []
    for n, entry in enumerate(raw):
        at = f"{where}[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise InputError("Tensor entry must be [i, j, k, value]", at)
        i, j, k = (_index(entry[p], dims[p], at) for p in range(3))
        entries.append((i, j, k, _value(fld, entry[3], at)))
    return Tensor3.from_entries(dims, fld, entries)


def parse_vector(raw: Any, dim: int, fld: FieldSpec, where: str) -> Vector:
    if not isinstance(raw, list):
        raise InputError("Vector must be a list of [i, value] entries", where)
    out: Vector = {}
    for n, entry in enumerate(raw):
        at = f"{where}[{n}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise InputError("Vector entry must be [i, value]", at)
        i = _index(entry[0], dim, at)
        if i in out:
            raise InputError(f"Duplicate index {i}", at)
        v = _value(fld, entry[1], at)
        if v:
            out[i] = v
    return out


def parse_matrix(raw: Any, rows: int, cols: int, fld: FieldSpec, where: str) -> Matrix:
    if not isinstance(raw, list):
        raise InputError("Matrix must be a list of [row, col, value] entries", where)
    columns: list[Vector] = [{} for _ in range(cols)]
    for n, entry in enumerate(raw):
        at = f"{where}[{n}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError("Matrix entry must be [row, col, value]", at)
        r, c = _index(entry[0], rows, at), _index(entry[1], cols, at)
        v = _value(fld, entry[2], at)
        if v:
            columns[c][r] = v
    return Matrix(rows, cols, fld, columns)


def _dim(data: dict, where: str) -> int:
    dim = _require(data, "dim", where)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise InputError(f"Dimension must be a nonnegative integer, got {dim!r}", f"{where}.dim")
    return dim


def parse_hopf(data: dict, where: str = "$") -> HopfAlgebra:
    fld = parse_field(data.get("field"), f"{where}.field")
    d = _dim(data, where)
    if d == 0:
        raise InputError("A Hopf algebra has dimension ≥ 1", f"{where}.dim")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != d):
        raise InputError(f"Need {d} labels", f"{where}.labels")
    return HopfAlgebra(
        field=fld,
        dim=d,
        mult=parse_tensor(_require(data, "mult", where), (d, d, d), fld, f"{where}.mult"),
        unit=parse_vector(_require(data, "unit", where), d, fld, f"{where}.unit"),
        comult=parse_tensor(_require(data, "comult", where), (d, d, d), fld, f"{where}.comult"),
        counit=parse_vector(_require(data, "counit", where), d, fld, f"{where}.counit"),
        antipode=parse_matrix(_require(data, "antipode", where), d, d, fld, f"{where}.antipode"),
        name=str(data.get("name", "")),
        labels=[str(x) for x in labels] if labels else None,
    )


def parse_module(H: HopfAlgebra, data: dict, dim: int, where: str, name: str = "") -> HModule:
    action = parse_tensor(_require(data, "action", where), (H.dim, dim, dim), H.field, f"{where}.action")
    columns: list[list[Vector]] = [[{} for _ in range(dim)] for _ in range(H.dim)]
    for t, v, w, c in action.items():
        columns[t][v][w] = c
    return module_from_matrices(H, [Matrix(dim, dim, H.field, cols) for cols in columns], name)


def parse_halgebra(data: dict, where: str = "$") -> HAlgebra:
    H = parse_hopf(_require(data, "hopf", where), f"{where}.hopf")
    n = _dim(data, where)
    name = str(data.get("name", ""))
    module = parse_module(H, data, n, where, name)
    mult = parse_tensor(_require(data, "mult", where), (n, n, n), H.field, f"{where}.mult")
    unit_raw = data.get("unit")
    unit_vec = None if unit_raw is None else parse_vector(unit_raw, n, H.field, f"{where}.unit")
    return HAlgebra(module, mult, unit_vec, name=name)


def parse_pairing(data: dict, where: str = "$") -> PairedSpace:
    H = parse_hopf(_require(data, "hopf", where), f"{where}.hopf")
    m = _dim(data, where)
    name = str(data.get("name", ""))
    module = parse_module(H, data, m, where, name)
    B = parse_matrix(_require(data, "pairing", where), m, m, H.field, f"{where}.pairing")
    return PairedSpace(module, B, name=name)


def parse_spec(data: Any, where: str = "$") -> SpecObject:
    kind = _require(data, "kind", where)
    if kind == "hopf":
        return parse_hopf(data, where)
    if kind == "halgebra":
        return parse_halgebra(data, where)
    if kind == "pairing":
        return parse_pairing(data, where)
    raise InputError(f"Unknown kind '{kind}' (expected one of {KINDS})", f"{where}.kind")


def load_spec(path: str | Path) -> SpecObject:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc.strerror}", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"Invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None
    try:
        obj = parse_spec(data)
    except InputError as exc:
        raise InputError(exc.reason, f"{path} {exc.location or '$'}") from None
    logger.info(f"Loaded {data['kind']} '{getattr(obj, 'name', '')}' from {path}")
    return obj


# ── Serialization ────────────────────────────────────────────────────────────

def _vector_wire(v: Vector) -> list:
    return [[i, v[i].to_wire()] for i in sorted(v)]


def _matrix_wire(m: Matrix) -> list:
    return [[r, c, m.column(c)[r].to_wire()] for c in range(m.cols) for r in sorted(m.column(c))]


def _module_wire(M: HModule) -> list:
    return [[t, v, w, c.to_wire()]
            for t, m in enumerate(M.matrices) for v in range(m.cols) for w, c in sorted(m.column(v).items())]


def hopf_to_spec(H: HopfAlgebra) -> dict:
    out = {
        "kind": "hopf",
        "name": H.name,
        "field": H.field.to_wire(),
        "dim": H.dim,
        "mult": H.mult.to_wire(),
        "unit": _vector_wire(H.unit),
        "comult": H.comult.to_wire(),
        "counit": _vector_wire(H.counit),
        "antipode": _matrix_wire(H.antipode),
    }
    if H.labels:
        out["labels"] = list(H.labels)
    return out


def to_spec(obj: SpecObject) -> dict:
    if isinstance(obj, HopfAlgebra):
        return hopf_to_spec(obj)
    if isinstance(obj, HAlgebra):
        return {
            "kind": "halgebra",
            "name": obj.name,
            "hopf": hopf_to_spec(obj.hopf),
            "dim": obj.dim,
            "mult": obj.mult.to_wire(),
            "unit": None if obj.unit is None else _vector_wire(obj.unit),
            "action": _module_wire(obj.module),
        }
    if isinstance(obj, PairedSpace):
        return {
            "kind": "pairing",
            "name": obj.name,
            "hopf": hopf_to_spec(obj.module.hopf),
            "dim": obj.dim,
            "pairing": _matrix_wire(obj.pairing),
            "action": _module_wire(obj.module),
        }
    raise InputError(f"Cannot serialize {type(obj).__name__}")


def save_spec(obj: SpecObject, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_spec(obj), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    logger.info(f"Wrote {path}")
    return path
