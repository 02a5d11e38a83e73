from __future__ import annotations

import csv
import io
import json
import logging
import math
import re
from collections.abc import Iterable, Sequence
from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from dsubh_bounds.core.enums import RecordStatus
from dsubh_bounds.hausdorff.models import ContentEstimate
from dsubh_bounds.measures.models import ModulusBound
from dsubh_bounds.verify.records import CorpusResult, VerificationRecord

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("label", "theorem", "lhs", "lhs_err", "rhs", "ratio", "ok", "caveats", "ms")
MODULUS_COLUMNS = ("t", "lower", "upper", "mode")
_EXPLICIT_BALL_LIMIT = 10_000
_SVG_RC = {"svg.hashsalt": "dsubh-bounds", "svg.fonttype": "path"}


def format_number(x: float | None) -> str:
    """Shortest round-trip repr, with a trailing '.0' dropped; '' for None."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    text = repr(x)
    return text[:-2] if text.endswith(".0") else text


def _json_number(x: float | None):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else format_number(x)


def record_to_dict(rec: VerificationRecord) -> dict:
    return {
        "label": rec.label,
        "theorem": rec.theorem.value if rec.theorem is not None else None,
        "status": rec.status.value,
        "ok": rec.ok,
        "lhs": _json_number(rec.lhs),
        "lhs_err": _json_number(rec.lhs_err),
        "rhs": _json_number(rec.rhs),
        "ratio": _json_number(rec.ratio),
        "r": _json_number(rec.r),
        "R": _json_number(rec.R),
        "tolerance": _json_number(rec.tolerance),
        "abs_tolerance": _json_number(rec.abs_tolerance),
        "factors": [
            {"name": f.name, "value": _json_number(f.value), "source": f.source}
            for f in rec.factors
        ],
        "details": {k: _json_number(v) for k, v in rec.details},
        "caveats": list(rec.caveats),
        "reason": rec.reason,
        "ms": _json_number(rec.ms),
    }


def report_json(result: CorpusResult) -> str:
    payload = {
        "seed": result.seed,
        "summary": {
            "total": result.summary.total,
            "ok": result.summary.ok,
            "violations": result.summary.violations,
            "rejected": result.summary.rejected,
        },
        "records": [record_to_dict(r) for r in result.records],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _csv_row(rec: VerificationRecord) -> list[str]:
    theorem = rec.theorem.value if rec.theorem is not None else ""
    if rec.status is RecordStatus.REJECTED:
        notes = [f"rejected: {rec.reason}", *rec.caveats]
        return [rec.label, theorem, "", "", "", "", "false", "; ".join(notes), ""]
    return [
        rec.label,
        theorem,
        format_number(rec.lhs),
        format_number(rec.lhs_err),
        format_number(rec.rhs),
        format_number(rec.ratio),
        "true" if rec.ok else "false",
        "; ".join(rec.caveats),
        format_number(rec.ms),
    ]


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def report_csv(records: Iterable[VerificationRecord]) -> str:
    return _csv_text(CSV_COLUMNS, (_csv_row(r) for r in records))


def modulus_csv(bounds: Iterable[ModulusBound]) -> str:
    rows = (
        [format_number(b.t), format_number(b.lower), format_number(b.upper), b.mode.value]
        for b in bounds
    )
    return _csv_text(MODULUS_COLUMNS, rows)


def content_payload(estimate: ContentEstimate, *, seed: int) -> dict:
    cover = estimate.cover
    cover_data = None
    if cover is not None:
        cover_data = {
            "kind": cover.kind.value,
            "cost": _json_number(cover.cost),
            "count": cover.count,
            "radius": _json_number(cover.radius),
            "level": cover.level,
        }
        if cover.explicit and cover.count <= _EXPLICIT_BALL_LIMIT:
            cover_data["centers"] = cover.centers.tolist()
            cover_data["radii"] = cover.radii.tolist()
    frostman = None
    if estimate.frostman is not None:
        mu = estimate.frostman
        frostman = {
            "cell": _json_number(mu.cell),
            "origin": list(mu.origin),
            "cells": len(mu.cells),
            "total": _json_number(float(mu.cell_masses.sum())),
        }
    h = estimate.gauge
    return {
        "seed": seed,
        "gauge": {"kind": h.kind.value, "b": h.b, "p": h.p, "q": h.q},
        "t": _json_number(estimate.t),
        "upper": _json_number(estimate.upper),
        "lower": _json_number(estimate.lower),
        "frostman_constant": _json_number(estimate.frostman_constant),
        "cover": cover_data,
        "frostman": frostman,
    }


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label).strip("_") or "case"


def plot_sweep(label: str, records: Sequence[VerificationRecord], path: Path) -> bool:
    """lhs (upper end) and rhs against r on log axes; False when nothing is plottable."""
    points = [
        (rec.r, rec.lhs_upper, rec.rhs)
        for rec in records
        if rec.status is not RecordStatus.REJECTED and rec.r is not None
    ]
    lhs = [(r, v) for r, v, _ in points if v > 0 and math.isfinite(v)]
    rhs = [(r, v) for r, _, v in points if v > 0 and math.isfinite(v)]
    if not (lhs or rhs):
        return False

    with matplotlib.rc_context(_SVG_RC):
        fig = Figure(figsize=(6.0, 4.0))
        ax = fig.subplots()
        if rhs:
            ax.plot(*zip(*rhs, strict=True), marker="o", label="rhs")
        if lhs:
            ax.plot(*zip(*lhs, strict=True), marker="s", label="lhs")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("r")
        ax.set_title(label)
        ax.legend()
        fig.savefig(path, format="svg", metadata={"Date": None})
    return True


def write_reports(result: CorpusResult, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    json_path.write_text(report_json(result), encoding="utf-8")
    written.append(json_path)

    csv_path = out / "report.csv"
    csv_path.write_text(report_csv(result.records), encoding="utf-8")
    written.append(csv_path)

    for label, records in result.sweeps.items():
        svg_path = out / f"sweep_{_slug(label)}.svg"
        if plot_sweep(label, records, svg_path):
            written.append(svg_path)

    logger.info("Wrote %d report files to %s", len(written), out)
    return written
