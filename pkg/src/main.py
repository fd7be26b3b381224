"""
main.py
-------
CLI orchestrator for the hopfcyc engine.

Usage:
    python src/main.py corpus sweedler --out data/
    python src/main.py validate data/H4.json
    python src/main.py verify data/H4.json radford
    python src/main.py hp data/C_trivial.json data/C_trivial.json --level 3

Every verb writes <stem>.json and <stem>.md (plus CSV tables) to --out.
Exit status: 0 all checks pass, 1 a check failed, 2 bad input or dimension cap.
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from dotenv import load_dotenv

# ── Local modules ────────────────────────────────────────────────────────────
sys.path.insert(0, str(Path(__file__).parent))

from action import (HAlgebra, PairedSpace, alpha_maps, dual_regular_algebra, regular_pairing,
                    scalar_algebra, stability_isomorphism, takesaki_takai, validate_halgebra,
                    validate_pairing)
from ayd import build_AH, lambda_picture, regular_ayd, round_trip_report, t_operator_report, \
    trivial_ayd, validate_AH, validate_ayd
from checks import DimensionCapError, HopfCycError, InconsistencyError, InputError, ValidationReport
from corpus import CORPUS_DESCRIPTIONS, load_corpus
from exactla import FieldSpec, Matrix
from forms import build_forms, dimension_table, forms_ayd_report, kappa_identities, stability_trace, \
    xdiff_check
from homology import DIM_CAP, MODES, hp_equivariant
from hopf import (HopfAlgebra, fourier_chain, haar_data, invariant_functionals, mul, pair,
                  pontrjagin, radford_check, validate_hopf)
from report_generator import build_document, report_stem, save_all
from spec_io import load_spec, save_spec

load_dotenv()

OUTPUT_DIR = os.getenv("HOPFCYC_OUTPUT_DIR", "output/")
SLOW = os.getenv("HOPFCYC_SLOW", "0") == "1"
DEFAULT_DEGREE = int(os.getenv("HOPFCYC_DEGREE", "3"))

SUITES = ("haar", "radford", "pontrjagin", "taktak", "ayd", "forms", "stability")
COEFFICIENTS = ("trivial", "dual-regular")

# Brute-force multiplicativity checks above this many basis elements run only with --slow
FAST_SIZE = 64

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


# ── Logging setup ─────────────────────────────────────────────────────────────
def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )


def _banner(msg: str) -> None:
    width = 60
    print(f"\n{'─' * width}")
    print(f"  {msg}")
    print(f"{'─' * width}")


def _print_report(report: ValidationReport) -> None:
    mark = "✓" if report.ok else "⚠"
    print(f"  {mark} {report.summary()}")
    for check in report.failures():
        print(f"      ✗ {check.name}: {check.detail} {check.witness or ''}")


def parse_field(text: str | None) -> FieldSpec | None:
    """'rationals' or 'cyclotomic:<n>'."""
    if text is None:
        return None
    kind, _, order = text.partition(":")
    if kind == "rationals" and not order:
        return FieldSpec.rationals()
    if kind == "cyclotomic" and order.isdigit():
        return FieldSpec.cyclotomic(int(order))
    raise InputError(f"Bad field '{text}'; use 'rationals' or 'cyclotomic:<n>'", "--field")


def _hopf_of(obj) -> HopfAlgebra:
    if isinstance(obj, HopfAlgebra):
        return obj
    if isinstance(obj, HAlgebra):
        return obj.hopf
    return obj.module.hopf


def _coefficient_algebra(obj, H: HopfAlgebra, which: str) -> HAlgebra:
    """The H-algebra a suite runs on: the file's own, or the one chosen by --coefficients."""
    if isinstance(obj, HAlgebra):
        return obj
    return scalar_algebra(H) if which == "trivial" else dual_regular_algebra(H)


# ── Stage functions ───────────────────────────────────────────────────────────

def stage_load(args, path: str):
    """Stage 1: Parse a structure-constant file."""
    _banner(f"Stage 1 · Load {path}")
    obj = load_spec(path)
    H = _hopf_of(obj)
    field = parse_field(args.field)
    if field is not None and field != H.field:
        raise InputError(f"File is over {H.field.describe()}, --field asks for {field.describe()}", path)
    print(f"  ✓ {type(obj).__name__} '{getattr(obj, 'name', '')}' over {H.name} (dim {H.dim}, {H.field.describe()})")
    return obj


def stage_validate(obj) -> list[ValidationReport]:
    """Stage 2: Structural axioms of the input object."""
    _banner("Stage 2 · Axioms")
    reports = [validate_hopf(_hopf_of(obj))]
    if isinstance(obj, HAlgebra):
        reports.append(validate_halgebra(obj))
    elif isinstance(obj, PairedSpace):
        reports.append(validate_pairing(obj))
    for r in reports:
        _print_report(r)
    return reports


def suite_haar(H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    report = ValidationReport(f"Haar integrals · {H.name}")
    report.add_count("left invariant functionals span dim 1", invariant_functionals(H).dim, 1)
    report.add_count("right invariant functionals span dim 1", invariant_functionals(H, right=True).dim, 1)
    haar = haar_data(H)

    def phi_column(j: int) -> dict:
        return {i: pair(haar.phi, mul(H, H.basis(i), H.basis(j)), H.field) for i in range(H.dim)}

    form = Matrix.from_images(H.dim, H.dim, H.field, phi_column)
    report.add_count("φ(xy) nondegenerate", form.rank(), H.dim)
    report.values.update(haar.values)
    return [report], {}


def suite_radford(H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    result = radford_check(H)
    report = ValidationReport(f"Radford's formula · {H.name}")
    report.add("S⁴(x) = δ⁻¹(δ̂⇀x↼δ̂⁻¹)δ on every basis element", result["holds"], "", result["witness"])
    report.values["S⁴ = id"] = result["s4_is_identity"]
    return [report], {}


def suite_pontrjagin(H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    _, report = pontrjagin(H)
    return [report, fourier_chain(H)], {}


def suite_taktak(obj, H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    A = _coefficient_algebra(obj, H, args.coefficients)
    size = A.dim * H.dim * H.dim
    multiplicative = args.slow or size <= FAST_SIZE
    if not multiplicative:
        print(f"  ⚠ γ_A multiplicativity over {size}² basis pairs skipped (pass --slow)")
    tt = takesaki_takai(A, check_multiplicative=multiplicative)
    return [tt.report], {"dim": size, "multiplicativity checked": multiplicative}


def suite_ayd(H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    AH = build_AH(H)
    regular = regular_ayd(AH)
    reports = [validate_AH(AH), validate_ayd(trivial_ayd(H)), validate_ayd(regular),
               t_operator_report(regular), round_trip_report(regular), lambda_picture(AH)]
    return reports, {"dim A(H)": AH.dim}


def suite_forms(obj, H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    A = _coefficient_algebra(obj, H, args.coefficients)
    F = build_forms(A, degree=args.degree)
    reports = [F.report, kappa_identities(F), forms_ayd_report(F)]
    if args.slow:
        reports.append(xdiff_check(A, 1))
    else:
        print("  ⚠ X-complex comparison against T₁A skipped (pass --slow)")
    return reports, {"degree": F.degree, "tables": {"forms dimensions": dimension_table(F)}}


def suite_stability(obj, H: HopfAlgebra, args) -> tuple[list[ValidationReport], dict]:
    P = obj if isinstance(obj, PairedSpace) else regular_pairing(H)
    B = scalar_algebra(H) if args.coefficients == "trivial" else dual_regular_algebra(H)
    reports = [validate_pairing(P), alpha_maps(P.module)]
    size = P.dim * H.dim * B.dim * H.dim * P.dim
    if args.slow or size <= FAST_SIZE:
        reports.append(stability_isomorphism(P, B)[1])
    else:
        print(f"  ⚠ stability isomorphism on dim {size} skipped (pass --slow)")
    reports.append(stability_trace(P, B, quotient_check=args.slow).report)
    return reports, {"pairing": P.name, "coefficients": B.name}


def stage_suite(args, obj) -> tuple[list[ValidationReport], dict]:
    """Stage 3: Run the requested verification suite."""
    _banner(f"Stage 3 · Suite '{args.suite}'")
    H = _hopf_of(obj)
    if args.suite in ("taktak", "forms", "stability"):
        reports, results = globals()[f"suite_{args.suite}"](obj, H, args)
    else:
        reports, results = globals()[f"suite_{args.suite}"](H, args)
    for r in reports:
        _print_report(r)
    return reports, results


def stage_report(args, doc: dict, stem: str, tables=None, elapsed: float | None = None) -> None:
    """Final stage: JSON + Markdown (+ CSV) reports."""
    _banner("Report")
    for path in save_all(doc, args.out, stem, tables, elapsed):
        print(f"  ✓ {path}")


# ── Verbs ─────────────────────────────────────────────────────────────────────

def cmd_validate(args) -> int:
    t0 = time.time()
    obj = stage_load(args, args.file)
    reports = stage_validate(obj)
    doc = build_document("validate", getattr(obj, "name", ""), reports)
    stem = report_stem("validate", Path(args.file).stem)
    stage_report(args, doc, stem, elapsed=time.time() - t0)
    return EXIT_OK if doc["ok"] else EXIT_FAILED


def cmd_corpus(args) -> int:
    if args.list:
        for name, desc in CORPUS_DESCRIPTIONS.items():
            print(f"  {name:<18} {desc}")
        return EXIT_OK
    if not args.name:
        raise InputError("corpus needs an algebra name (see --list)")
    _banner(f"Corpus · {args.name}")
    H = load_corpus(args.name, group=args.group, order=args.order, field=parse_field(args.field), dual=args.dual)
    obj = H
    if args.algebra == "trivial":
        obj = scalar_algebra(H)
    elif args.algebra == "dual-regular":
        obj = dual_regular_algebra(H)
    stem = report_stem(H.name, "" if args.algebra == "none" else args.algebra)
    path = save_spec(obj, Path(args.out) / f"{stem}.json")
    print(f"  ✓ {H.name}: dim {H.dim} over {H.field.describe()} → {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.time()
    obj = stage_load(args, args.file)
    sections = stage_validate(obj)
    stem = report_stem("verify", args.suite, Path(args.file).stem)
    if not all(r.ok for r in sections):
        print("  ⚠ Input fails its axioms; suite not run")
        doc = build_document("verify", args.suite, sections, stage_failed="axioms")
        stage_report(args, doc, stem, elapsed=time.time() - t0)
        return EXIT_FAILED
    try:
        reports, results = stage_suite(args, obj)
    except InconsistencyError as exc:
        failed = ValidationReport(f"{args.suite} prerequisites")
        failed.add(str(exc), False, "internal identity failed", exc.witness or {"stage": args.suite})
        doc = build_document("verify", args.suite, sections + [failed], stage_failed=args.suite)
        stage_report(args, doc, stem, elapsed=time.time() - t0)
        return EXIT_FAILED
    tables = results.pop("tables", None)
    doc = build_document("verify", args.suite, sections + reports, results)
    stage_report(args, doc, stem, tables, time.time() - t0)
    return EXIT_OK if doc["ok"] else EXIT_FAILED


def cmd_hp(args) -> int:
    t0 = time.time()
    A = stage_load(args, args.file_a)
    B = stage_load(args, args.file_b)
    for path, obj in ((args.file_a, A), (args.file_b, B)):
        if not isinstance(obj, HAlgebra):
            raise InputError(f"hp needs H-algebra files, got kind '{type(obj).__name__}'", path)
    if args.hopf:
        H = load_spec(args.hopf)
        if not isinstance(H, HopfAlgebra) or not H.same_structure(A.hopf):
            raise InputError("The --hopf file does not match the Hopf algebra of the coefficients", args.hopf)
    sections = stage_validate(A) + stage_validate(B)[1:]

    _banner(f"Stage 3 · HP^{args.mode} up to level {args.level}")
    result = hp_equivariant(A, B, mode=args.mode, level=args.level, cap=args.cap)
    print(f"  ✓ ranks (HP_0, HP_1) = {result.ranks} at level {result.level}  ({result.note})")
    if "exploratory" in result.values:
        print(f"  ⚠ exploratory: {result.values['exploratory']}")

    doc = build_document("hp", f"{A.name}, {B.name} over {A.hopf.name}", sections, result.to_dict())
    stem = report_stem("hp", args.mode, Path(args.file_a).stem, Path(args.file_b).stem)
    stage_report(args, doc, stem, {"stabilization": result.table}, time.time() - t0)
    return EXIT_OK if doc["ok"] else EXIT_FAILED


# ── Main ──────────────────────────────────────────────────────────────────────

def parse_args(argv: list[str] | None = None):
    parser = argparse.ArgumentParser(
        description="hopfcyc · exact Hopf-cyclic computations for finite-dimensional Hopf algebras",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Emit corpus files
  python src/main.py corpus sweedler --out data/
  python src/main.py corpus taft --order 3 --algebra trivial --out data/

  # Check axioms, then Radford's formula
  python src/main.py validate data/H4.json
  python src/main.py verify data/H4.json radford

  # κ identities on forms up to degree 3, verbose
  python src/main.py verify data/T3_trivial.json forms --degree 3 -v

  # Equivariant periodic cyclic ranks, levels 1..3
  python src/main.py hp data/C_trivial.json data/C_trivial.json --level 3
""",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="rationals | cyclotomic:<n>")
    common.add_argument("--out", default=OUTPUT_DIR, help="Directory for reports and emitted files")
    common.add_argument("--slow", action="store_true", default=SLOW,
                        help="Run large brute-force tiers (also HOPFCYC_SLOW=1)")
    common.add_argument("-v", "--verbose", action="store_true")

    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("validate", parents=[common], help="Check the axioms of a structure-constant file")
    p.add_argument("file")

    p = verbs.add_parser("corpus", parents=[common], help="Write a corpus Hopf algebra (or H-algebra) file")
    p.add_argument("name", nargs="?", help=f"One of {sorted(CORPUS_DESCRIPTIONS)}")
    p.add_argument("--group", help="C<n> or S<n> for group_algebra / function_algebra")
    p.add_argument("--order", type=int, help="n for taft")
    p.add_argument("--dual", action="store_true", help="Emit the dual Hopf algebra")
    p.add_argument("--algebra", choices=("none", *COEFFICIENTS), default="none",
                   help="Emit an H-algebra over the chosen Hopf algebra instead")
    p.add_argument("--list", action="store_true", help="List corpus algebras")

    p = verbs.add_parser("verify", parents=[common], help="Run one verification suite")
    p.add_argument("file")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="Top degree N for the forms suite")
    p.add_argument("--coefficients", choices=COEFFICIENTS, default="trivial",
                   help="Coefficient algebra when the file holds only a Hopf algebra")

    p = verbs.add_parser("hp", parents=[common], help="Equivariant periodic cyclic homology ranks")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--hopf", help="Optional Hopf algebra file; must match the coefficients")
    p.add_argument("--mode", choices=MODES, default="theta")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--cap", type=int, default=DIM_CAP, help="Abort before building a larger space")

    return parser.parse_args(argv)


COMMANDS = {"validate": cmd_validate, "corpus": cmd_corpus, "verify": cmd_verify, "hp": cmd_hp}


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    setup_logging(args.verbose)

    print("\n" + "═" * 60)
    print(f"  hopfcyc · {args.verb}")
    print("═" * 60)

    t_total = time.time()
    try:
        status = COMMANDS[args.verb](args)
    except DimensionCapError as exc:
        print(f"\n  ⚠ {exc}")
        print(f"  ⚠ forecast: {exc.forecast}")
        return EXIT_INPUT
    except InputError as exc:
        print(f"\n  ⚠ input error: {exc}")
        return EXIT_INPUT
    except HopfCycError as exc:
        print(f"\n  ⚠ {type(exc).__name__}: {exc}")
        return EXIT_FAILED

    elapsed = time.time() - t_total
    verdict = "✅  all checks pass" if status == EXIT_OK else "❌  at least one check failed"
    print(f"\n{'═' * 60}")
    print(f"  {verdict}  ({elapsed:.1f}s)")
    print(f"  📁  Outputs in: {Path(args.out).resolve()}")
    print(f"{'═' * 60}\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
