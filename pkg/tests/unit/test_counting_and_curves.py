import math

import numpy as np
import pytest

from dsubh_bounds.measures.counting import radial_counting_N
from dsubh_bounds.measures.curves import (
    curve_measure_from_graph,
    jacobian_bound,
    jacobian_violations,
    lipschitz_constants,
    surface_measure_total,
)
from dsubh_bounds.measures.models import Atomic, PolylineLength, TriangulatedArea
from dsubh_bounds.utils.errors import GeometryError, SlopeViolationError


def _ramp() -> TriangulatedArea:
    """z = x over the unit square."""
    return TriangulatedArea(
        vertices=((0.0, 0.0, 0.0), (1.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.0, 1.0, 0.0)),
        faces=((0, 1, 2), (0, 2, 3)),
    )


# --- counting ---


def test_counting_single_atom_plane():
    mu = Atomic(points=((0.5, 0.0),), masses=(1.0,))
    assert radial_counting_N(mu, (0.0, 0.0), 1.0, 2) == pytest.approx(math.log(2.0))


def test_counting_single_atom_space():
    mu = Atomic(points=((0.5, 0.0, 0.0),), masses=(1.0,), dim=3)
    # ĥd = 2, ∫_0.5^1 t^-2 dt = 1
    assert radial_counting_N(mu, (0.0, 0.0, 0.0), 1.0, 3) == pytest.approx(2.0)


def test_counting_atom_at_center_is_infinite():
    mu = Atomic(points=((0.0, 0.0),), masses=(1.0,))
    assert radial_counting_N(mu, (0.0, 0.0), 1.0, 2) == math.inf


def test_counting_ignores_atoms_outside_restriction():
    mu = Atomic(points=((0.5, 0.0), (0.0, 0.9)), masses=(1.0, 1.0))
    full = radial_counting_N(mu, (0.0, 0.0), 1.0, 2)
    restricted = radial_counting_N(mu, (0.0, 0.0), 1.0, 2, within=0.6)
    assert restricted == pytest.approx(math.log(2.0))
    assert full > restricted


def test_counting_segment_from_its_end(unit_segment):
    # μ(B̄_0(t)) = t on [0, 1], so the integral of 1 over (0, 1]
    assert radial_counting_N(unit_segment, (0.0, 0.0), 1.0, 2) == pytest.approx(1.0, rel=1e-6)


# --- curves ---


def test_graph_curve_records_slope_constants():
    mu = curve_measure_from_graph([0.0, 1.0, 2.0], [0.0, 0.5, 0.0], 0.5)
    lc = lipschitz_constants(mu)
    assert lc.lip == pytest.approx(math.sqrt(1.25))
    assert lc.lip_inv == 1.0
    assert lc.bilipschitz


def test_graph_curve_reports_the_steep_segment():
    with pytest.raises(SlopeViolationError) as info:
        curve_measure_from_graph([0.0, 1.0, 2.0], [0.0, 0.1, 1.0], 0.5)
    assert info.value.segment == 1


def test_graph_curve_needs_increasing_abscissae():
    with pytest.raises(GeometryError):
        curve_measure_from_graph([0.0, 0.0], [0.0, 1.0], 1.0)


def test_quarter_circle_inverse_lipschitz_constant():
    theta = np.linspace(0.0, math.pi / 2.0, 65)
    mu = PolylineLength(vertices=tuple(zip(np.cos(theta), np.sin(theta), strict=True)))
    lc = lipschitz_constants(mu)
    assert lc.lip == 1.0
    assert lc.lip_inv == pytest.approx(math.pi / (2.0 * math.sqrt(2.0)), rel=1e-3)


def test_closed_curve_is_not_bilipschitz():
    mu = PolylineLength(vertices=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)), closed=True)
    assert not lipschitz_constants(mu).bilipschitz


def test_self_intersecting_polyline_is_rejected():
    with pytest.raises(GeometryError):
        PolylineLength(vertices=((0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)))


def test_ramp_surface_area_and_constants():
    s = _ramp()
    assert surface_measure_total(s) == pytest.approx(math.sqrt(2.0))
    lc = lipschitz_constants(s)
    assert lc.lip == pytest.approx(math.sqrt(2.0))
    assert lc.lip_inv == pytest.approx(1.0)
    assert jacobian_violations(s) == []


def test_jacobian_bound_in_space():
    assert jacobian_bound(1.0, 3) == pytest.approx(math.sqrt(6.0))
    assert jacobian_bound(2.0, 3) == pytest.approx(4.0 * math.sqrt(6.0))


def test_degenerate_triangle_is_rejected():
    with pytest.raises(GeometryError):
        TriangulatedArea(vertices=((0, 0, 0), (1, 0, 0), (2, 0, 0)), faces=((0, 1, 2),))
