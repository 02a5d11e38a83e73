import csv
import io
import json
import math

import pytest

from dsubh_bounds.core.enums import TheoremId
from dsubh_bounds.dsubh.integrate import PlusIntegral
from dsubh_bounds.hausdorff.content import p_content
from dsubh_bounds.hausdorff.sets import CompactSet
from dsubh_bounds.measures.modulus import modulus_profile
from dsubh_bounds.verify.records import CorpusResult, Factor, assemble, rejected, summarize
from dsubh_bounds.verify.report import (
    CSV_COLUMNS,
    content_payload,
    format_number,
    modulus_csv,
    plot_sweep,
    report_csv,
    report_json,
    write_reports,
)


def _ok_record(label: str = "a", r: float = 1.0):
    return assemble(
        label=label,
        theorem=TheoremId.COR_CURVE,
        lhs=PlusIntegral(0.25, 0.0),
        factors=[Factor("prefactor", 2.0), Factor("T_U", math.inf)],
        r=r,
        R=3.0,
    )


def _result(records, sweeps=None) -> CorpusResult:
    return CorpusResult(
        records=tuple(records), summary=summarize(records), seed=7, sweeps=sweeps or {}
    )


@pytest.mark.parametrize(
    ("x", "want"),
    [
        (1.0, "1"),
        (0.1, "0.1"),
        (-2.5, "-2.5"),
        (1e-20, "1e-20"),
        (math.inf, "inf"),
        (-math.inf, "-inf"),
        (math.nan, "nan"),
        (None, ""),
    ],
)
def test_format_number(x, want):
    assert format_number(x) == want


def test_csv_rows_follow_column_order():
    text = report_csv([_ok_record(), rejected("b", TheoremId.T1, "no")])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][:7] == ["a", "COR-CURVE", "0.25", "0", "inf", "0", "true"]
    assert rows[2] == ["b", "T1", "", "", "", "", "false", "rejected: no", ""]


def test_json_report_has_no_bare_non_finite_numbers():
    result = _result([_ok_record(), rejected("b", None, "malformed case: x")])
    payload = json.loads(report_json(result))
    assert payload["seed"] == 7
    assert payload["summary"] == {"total": 2, "ok": 1, "violations": 0, "rejected": 1}
    first, second = payload["records"]
    assert first["rhs"] == "inf"
    assert first["factors"][1] == {"name": "T_U", "value": "inf", "source": ""}
    assert second["theorem"] is None
    assert second["lhs"] == "nan"


def test_modulus_csv(unit_segment):
    text = modulus_csv(modulus_profile(unit_segment, [0.25, 0.5]))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["t", "lower", "upper", "mode"]
    assert rows[1][0] == "0.25"
    assert float(rows[1][2]) == pytest.approx(0.5)


def test_content_payload_lists_small_covers():
    S = CompactSet.segment((0.0, 0.0), (1.0, 0.0), resolution=5)
    payload = content_payload(p_content(S, 1.0), seed=0)
    assert payload["gauge"]["kind"] == "power"
    assert payload["lower"] <= payload["upper"]
    assert payload["cover"]["count"] >= 1
    json.dumps(payload, allow_nan=False)


def test_plot_sweep_skips_all_rejected(tmp_path):
    path = tmp_path / "x.svg"
    assert not plot_sweep("x", [rejected("x@r=1", TheoremId.T1, "no", r=1.0)], path)
    assert not path.exists()


def test_write_reports_creates_files(tmp_path):
    sweep = [_ok_record("s@r=0.5", 0.5), _ok_record("s@r=1", 1.0)]
    # infinite rhs is not plotted but the lhs still is
    result = _result([_ok_record(), *sweep], sweeps={"s/weird label": tuple(sweep)})
    written = write_reports(result, tmp_path / "out")
    names = sorted(p.name for p in written)
    assert names == ["report.csv", "report.json", "sweep_s_weird_label.svg"]
    svg = (tmp_path / "out" / "sweep_s_weird_label.svg").read_text(encoding="utf-8")
    assert svg.startswith("<?xml")
