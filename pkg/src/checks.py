"""
checks.py
---------
Verdict records and the exception hierarchy shared by every module.

Key behaviors:
- Axiom and identity checks never raise: they append Check records to a ValidationReport
- A failed Check always carries a witness (basis indices plus both sides as exact strings)
- Structural problems with the input raise InputError; "impossible for valid input"
  failures raise InconsistencyError; the dimension guard raises DimensionCapError
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Iterable

from dotenv import load_dotenv
from tqdm import tqdm

load_dotenv()

logger = logging.getLogger(__name__)

# Force progress bars on long brute-force loops (they are otherwise shown only at DEBUG)
SHOW_PROGRESS = os.getenv("HOPFCYC_PROGRESS", "0") == "1"


def progress(iterable: Iterable, desc: str, total: int | None = None) -> Iterable:
    """Wrap a long loop in a tqdm bar, silent unless DEBUG logging or HOPFCYC_PROGRESS=1."""
    show = SHOW_PROGRESS or logging.getLogger().isEnabledFor(logging.DEBUG)
    return tqdm(iterable, desc=desc, total=total, disable=not show, leave=False)


# ── Exceptions ────────────────────────────────────────────────────────────────

class HopfCycError(Exception):
    """Base class for every error raised by the engine."""


class InputError(HopfCycError, ValueError):
    """Malformed or structurally inconsistent input (files, tensors, parameters)."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        self.reason = message
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class InconsistencyError(HopfCycError, AssertionError):
    """An internal identity failed on input that passed validation."""

    def __init__(self, message: str, witness: dict | None = None):
        self.witness = witness or {}
        super().__init__(message)


class DimensionCapError(HopfCycError):
    """Raised before building a space larger than the configured cap."""

    def __init__(self, message: str, forecast: dict):
        self.forecast = forecast
        super().__init__(message)


# ── Records ──────────────────────────────────────────────────────────────────

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    witness: dict | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "ok": self.ok}
        if self.detail:
            out["detail"] = self.detail
        if self.witness:
            out["witness"] = {k: _plain(v) for k, v in self.witness.items()}
        return out


@dataclass
class ValidationReport:
    """
    Ordered list of Check records with an overall verdict.

    `values` holds computed quantities worth reporting (dimensions, scalars,
    ranks) that are not pass/fail themselves.
    """

    title: str
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "", witness: dict | None = None) -> Check:
        check = Check(name=name, ok=bool(ok), detail=detail, witness=None if ok else witness)
        self.checks.append(check)
        if check.ok:
            logger.debug(f"[{self.title}] ✓ {name}")
        else:
            logger.warning(f"[{self.title}] ✗ {name}: {detail} {check.witness or ''}")
        return check

    def add_equal(self, name: str, lhs, rhs, detail: str = "") -> Check:
        """Matrix equality check; a failure carries the first differing entry."""
        witness = lhs.first_difference(rhs)
        return self.add(name, witness is None, detail, witness)

    def add_count(self, name: str, got: int, expected: int, detail: str = "") -> Check:
        """Rank or dimension check; a failure carries both counts."""
        return self.add(name, got == expected, detail or f"{got} of {expected}", {"lhs": got, "rhs": expected})

    def extend(self, other: "ValidationReport", prefix: str | None = None) -> None:
        prefix = other.title if prefix is None else prefix
        for c in other.checks:
            name = f"{prefix}: {c.name}" if prefix else c.name
            self.checks.append(Check(name=name, ok=c.ok, detail=c.detail, witness=c.witness))
        for k, v in other.values.items():
            self.values[f"{prefix}: {k}" if prefix else k] = v

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def get(self, name: str) -> Check | None:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "values": {k: _plain(v) for k, v in self.values.items()},
        }

    def summary(self) -> str:
        n_fail = len(self.failures())
        return f"{self.title}: {len(self.checks) - n_fail}/{len(self.checks)} checks passed"


def _plain(value: Any) -> Any:
    """Render witness values as JSON-friendly data; scalars become exact strings."""
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)
