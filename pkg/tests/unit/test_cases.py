import pytest

from dsubh_bounds.core.enums import SweepKind, TheoremId
from dsubh_bounds.specs.schemas import CorpusSpec
from dsubh_bounds.utils.errors import DomainError, SpecError
from dsubh_bounds.verify.cases import Sweep, build_case, case_label, parse_case, resolver_for


@pytest.mark.parametrize(
    ("sweep", "r", "want"),
    [
        (Sweep(kind="constant", radii=(1.0,), c=0.5), 3.0, 0.5),
        (Sweep(kind="linear", radii=(1.0,), a=2.0, b=0.5), 3.0, 6.5),
        (Sweep(kind="to_boundary", radii=(0.5,), f=0.25), 0.5, 0.125),
    ],
)
def test_sweep_outer_gap(sweep, r, want):
    assert sweep.s(r) == pytest.approx(want)


def test_sweep_kind_is_normalized():
    assert Sweep(kind="linear", radii=(1.0,)).kind is SweepKind.LINEAR
    with pytest.raises(ValueError) as info:
        Sweep(kind="quadratic", radii=(1.0,))
    assert "Allowed" in str(info.value)


def test_sweep_needs_positive_radii():
    with pytest.raises(DomainError):
        Sweep(kind="constant", radii=())
    with pytest.raises(DomainError):
        Sweep(kind="constant", radii=(1.0, 0.0))


def test_case_geometry_needs_ordered_radii(make_case, unit_segment):
    assert make_case(TheoremId.T1, unit_segment).geometry() == (1.0, 3.0)
    with pytest.raises(DomainError):
        make_case(TheoremId.T1, unit_segment, R=0.5).geometry()
    with pytest.raises(DomainError):
        make_case(TheoremId.T1, unit_segment, r=None).geometry()


def test_case_label_falls_back_to_index():
    assert case_label({"label": "a"}, 3) == "a"
    assert case_label({"label": 7}, 3) == "case-3"
    assert case_label("nonsense", 4) == "case-4"


def test_parse_case_reports_its_index():
    with pytest.raises(SpecError) as info:
        parse_case({"label": "x"}, index=2)
    assert "cases[2]" in str(info.value)


def test_named_references_resolve_once(tmp_path):
    corpus = CorpusSpec.model_validate(
        {
            "measures": {"seg": {"kind": "polyline_length", "vertices": [[0, 0], [1, 0]]}},
            "functions": {"f": {"rational": {"zeros": [[2, 0]]}}},
        }
    )
    resolver = resolver_for(corpus, tmp_path)
    raw = {"label": "a", "theorem": "COR-CURVE", "function": "f", "measure": "seg", "r": 1, "R": 3}
    first = build_case(parse_case(raw, index=0), resolver)
    second = build_case(parse_case(raw, index=1), resolver)
    assert first.mu is second.mu
    assert first.U is second.U
    assert first.theorem is TheoremId.COR_CURVE
