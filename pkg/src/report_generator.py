"""
report_generator.py
-------------------
Writes the deliverables of every CLI verb:
  1. JSON document: canonical, sorted keys, no timestamps (byte-identical on rerun)
  2. Markdown report: per-section verdicts, failed-check witnesses, tables
  3. CSV tables: per-degree dimensions and HP stabilization ranks
"""

import json
import logging
import re
from pathlib import Path

import pandas as pd

from checks import ValidationReport

logger = logging.getLogger(__name__)


def report_stem(*parts: str) -> str:
    """verify + radford + C[S3] → verify_radford_C_S3"""
    joined = "_".join(p for p in parts if p)
    return re.sub(r"[^A-Za-z0-9]+", "_", joined).strip("_") or "report"


def build_document(verb: str, subject: str, sections: list[ValidationReport],
                   results: dict | None = None, stage_failed: str | None = None) -> dict:
    """Assemble the machine-readable report; `ok` is the overall verdict."""
    doc = {
        "verb": verb,
        "subject": subject,
        "ok": all(s.ok for s in sections) and stage_failed is None,
        "sections": [s.to_dict() for s in sections],
        "results": results or {},
    }
    if stage_failed:
        doc["failed_stage"] = stage_failed
    return doc


def save_json(doc: dict, output_dir: str | Path, stem: str) -> Path:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    out_path = output_dir / f"{stem}.json"
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    logger.info(f"JSON saved → {out_path}")
    return out_path


def save_csv(df: pd.DataFrame, output_dir: str | Path, stem: str) -> Path:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    out_path = output_dir / f"{stem}.csv"
    df.to_csv(out_path, index=False, encoding="utf-8")
    logger.info(f"CSV saved → {out_path}")
    return out_path


def pipe_table(df: pd.DataFrame) -> str:
    """Render a DataFrame as a Markdown pipe table."""
    if df.empty:
        return "_(empty)_"
    header = "| " + " | ".join(str(c) for c in df.columns) + " |"
    rule = "|" + "|".join("---" for _ in df.columns) + "|"
    rows = ["| " + " | ".join("" if pd.isna(v) else str(v) for v in row) + " |"
            for row in df.itertuples(index=False)]
    return "\n".join([header, rule, *rows])


def _section_markdown(section: dict) -> str:
    verdict = "✅ pass" if section["ok"] else "❌ FAIL"
    lines = [f"### {section['title']} · {verdict}", ""]
    checks = pd.DataFrame(
        [{"check": c["name"], "ok": "✓" if c["ok"] else "✗", "detail": c.get("detail", "")}
         for c in section["checks"]],
        columns=["check", "ok", "detail"],
    )
    lines.append(pipe_table(checks))
    failed = [c for c in section["checks"] if not c["ok"] and c.get("witness")]
    if failed:
        lines += ["", "**Witnesses:**", ""]
        for c in failed:
            lines.append(f"- `{c['name']}`: `{json.dumps(c['witness'], sort_keys=True, ensure_ascii=False)}`")
    if section["values"]:
        lines += ["", "**Values:**", ""]
        for key in sorted(section["values"]):
            lines.append(f"- {key}: `{section['values'][key]}`")
    lines.append("")
    return "\n".join(lines)


def save_markdown(doc: dict, output_dir: str | Path, stem: str,
                  tables: dict[str, pd.DataFrame] | None = None, elapsed: float | None = None) -> Path:
    """Human-readable rendering of a report document; timings appear only here."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    out_path = output_dir / f"{stem}.md"

    n_checks = sum(len(s["checks"]) for s in doc["sections"])
    n_failed = sum(1 for s in doc["sections"] for c in s["checks"] if not c["ok"])
    verdict = "✅ all checks pass" if doc["ok"] else "❌ at least one check failed"
    failed_stage = f"\n**Failed stage:** {doc['failed_stage']}\n" if doc.get("failed_stage") else ""
    timing = f"\n**Elapsed:** {elapsed:.2f}s\n" if elapsed is not None else ""
    sections = "\n".join(_section_markdown(s) for s in doc["sections"]) or "_No checks in this run._\n"
    table_md = "\n\n".join(f"### {title}\n\n{pipe_table(df)}" for title, df in (tables or {}).items())
    results = ""
    if doc["results"]:
        results = "```json\n" + json.dumps(doc["results"], indent=2, sort_keys=True, ensure_ascii=False) + "\n```"

    report = f"""# hopfcyc · {doc['verb']} · {doc['subject']}

**Verdict:** {verdict}
**Checks:** {n_checks - n_failed}/{n_checks} passed
{failed_stage}{timing}
---

## Checks

{sections}
---

## Tables

{table_md or "_No tables in this run._"}

---

## Results

{results or "_No computed results in this run._"}

---

*All arithmetic is exact; "≡" identities report their scalar under Values.*
"""
    out_path.write_text(report, encoding="utf-8")
    logger.info(f"Markdown report saved → {out_path}")
    return out_path


def save_all(doc: dict, output_dir: str | Path, stem: str,
             tables: dict[str, pd.DataFrame] | None = None, elapsed: float | None = None) -> list[Path]:
    """JSON + Markdown, plus one CSV per table."""
    paths = [save_json(doc, output_dir, stem), save_markdown(doc, output_dir, stem, tables, elapsed)]
    for title, df in (tables or {}).items():
        paths.append(save_csv(df, output_dir, report_stem(stem, title)))
    return paths
