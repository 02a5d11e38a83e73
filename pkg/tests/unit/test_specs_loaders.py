import json
import math

import pytest

from dsubh_bounds.core.constants import c_p
from dsubh_bounds.core.enums import GaugeKind, SetKind
from dsubh_bounds.measures.ball_mass import total_mass
from dsubh_bounds.measures.models import (
    CantorSelfSimilar,
    GridLebesgue,
    PolylineLength,
    TriangulatedArea,
)
from dsubh_bounds.specs.loaders import (
    build_gauge,
    load_corpus,
    load_function,
    load_gauge,
    load_measure,
    load_set,
    parse_measure_spec,
)
from dsubh_bounds.specs.schemas import GaugeSpec
from dsubh_bounds.utils.errors import SpecError


def _write(tmp_path, name: str, payload) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_load_polyline_measure(tmp_path):
    path = _write(
        tmp_path, "seg.json", {"kind": "polyline_length", "vertices": [[0, 0], [1, 0]]}
    )
    mu = load_measure(path)
    assert isinstance(mu, PolylineLength)
    assert mu.length == pytest.approx(1.0)


def test_load_arc_measure(tmp_path):
    path = _write(
        tmp_path, "arc.json", {"kind": "polyline_length", "arc": {"radius": 1.0, "segments": 8}}
    )
    mu = load_measure(path)
    assert len(mu.vertices) == 9
    assert mu.vertices[-1][1] == pytest.approx(1.0)


def test_grid_region_keeps_cells_inside_the_disk(tmp_path):
    spec = {
        "kind": "grid_lebesgue",
        "cell": 0.25,
        "region": {"shape": "disk", "center": [0, 0], "outer": 1.0},
    }
    mu = load_measure(_write(tmp_path, "disk.json", spec))
    assert isinstance(mu, GridLebesgue)
    assert 0.0 < total_mass(mu) < math.pi


def test_grid_box_region_is_exact(tmp_path):
    spec = {
        "kind": "grid_lebesgue",
        "cell": 0.5,
        "region": {"shape": "box", "lower": [-1, -1], "upper": [1, 1]},
    }
    mu = load_measure(_write(tmp_path, "box.json", spec))
    assert total_mass(mu) == pytest.approx(4.0)


def test_patch_surface_has_expected_area(tmp_path):
    spec = {
        "kind": "triangulated_area",
        "patch": {"lower": [0, 0], "upper": [1, 1], "n": 2, "slope": [1.0, 0.0]},
    }
    mu = load_measure(_write(tmp_path, "patch.json", spec))
    assert isinstance(mu, TriangulatedArea)
    assert len(mu.faces) == 8
    assert total_mass(mu) == pytest.approx(math.sqrt(2.0))


def test_graph_curve_slope_violation_is_a_spec_error(tmp_path):
    spec = {"kind": "graph_curve", "xs": [0, 1], "ys": [0, 2], "q": 1.0}
    with pytest.raises(SpecError):
        load_measure(_write(tmp_path, "graph.json", spec))


def test_cantor_level_defaults_to_setting(tmp_path):
    mu = load_measure(_write(tmp_path, "cantor.json", {"kind": "cantor"}))
    assert isinstance(mu, CantorSelfSimilar)
    assert mu.level == 12


def test_unknown_key_is_rejected():
    with pytest.raises(SpecError) as info:
        parse_measure_spec({"kind": "atomic", "points": [[0, 0]], "masses": [1], "mas": 1})
    assert "mas" in str(info.value)


def test_unknown_measure_kind_is_rejected():
    with pytest.raises(SpecError):
        parse_measure_spec({"kind": "spline"})


def test_missing_file_is_a_spec_error(tmp_path):
    with pytest.raises(SpecError):
        load_measure(tmp_path / "missing.json")


def test_broken_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": ', encoding="utf-8")
    with pytest.raises(SpecError) as info:
        load_measure(path)
    assert "line 1" in str(info.value)


def test_rational_function_spec(tmp_path):
    spec = {"rational": {"zeros": [[2, 0]], "poles": [[0.5, 0.3]], "leading": 2}}
    U = load_function(_write(tmp_path, "f.json", spec))
    assert U.dim == 2
    assert U.constant == pytest.approx(math.log(2.0))


def test_rational_form_excludes_charges(tmp_path):
    spec = {"rational": {"zeros": [[2, 0]]}, "positive": [{"at": [0, 0]}]}
    with pytest.raises(SpecError):
        load_function(_write(tmp_path, "f.json", spec))


def test_normalized_power_gauge_uses_unit_ball_volume(tmp_path):
    h = load_gauge(_write(tmp_path, "g.json", {"kind": "power", "p": 2, "normalized": True}))
    assert h.kind is GaugeKind.POWER
    assert h.b == pytest.approx(c_p(2.0))


def test_power_gauge_needs_b_unless_normalized():
    with pytest.raises(ValueError):
        GaugeSpec(kind="power", p=1.0)


def test_tabulated_gauge_spec():
    h = build_gauge(GaugeSpec(kind="tabulated", xs=[0, 1], hs=[0, 2]))
    assert h(0.5) == pytest.approx(1.0)


def test_set_from_inline_measure(tmp_path):
    spec = {
        "kind": "measure",
        "measure": {"kind": "polyline_length", "vertices": [[0, 0], [1, 0]]},
        "resolution": 5,
    }
    S = load_set(_write(tmp_path, "s.json", spec))
    assert S.kind is SetKind.POLYLINE
    assert S.resolution == 5


def test_set_from_measure_file_next_to_it(tmp_path):
    _write(tmp_path, "atoms.json", {"kind": "atomic", "points": [[0, 0], [1, 1]], "masses": [1, 1]})
    S = load_set(_write(tmp_path, "s.json", {"kind": "measure", "measure": "atoms.json"}))
    assert S.is_points


def test_disk_set_needs_radius(tmp_path):
    with pytest.raises(SpecError):
        load_set(_write(tmp_path, "s.json", {"kind": "disk", "center": [0, 0]}))


def test_corpus_must_be_an_object(tmp_path):
    with pytest.raises(SpecError):
        load_corpus(_write(tmp_path, "c.json", []))


def test_corpus_keeps_raw_cases(tmp_path):
    corpus = load_corpus(_write(tmp_path, "c.json", {"cases": [{"label": "x"}]}))
    assert corpus.cases == [{"label": "x"}]
