import math

import numpy as np
import pytest

from dsubh_bounds.measures.ball_mass import (
    ball_mass,
    ball_mass_bounds,
    ball_mass_bounds_many,
    bounding_radius,
    local_power,
    modulus_majorant,
    sample_count,
    support_radius,
    support_sample,
    total_mass,
)
from dsubh_bounds.measures.models import (
    Atomic,
    CantorSelfSimilar,
    GridLebesgue,
    PolylineLength,
    TriangulatedArea,
)
from dsubh_bounds.utils.errors import DomainError


def _unit_square(cell: float) -> GridLebesgue:
    n = round(1.0 / cell)
    return GridLebesgue(cell=cell, cells=tuple((i, j) for i in range(n) for j in range(n)))


def _flat_patch() -> TriangulatedArea:
    return TriangulatedArea(
        vertices=((-0.5, -0.5, 0.0), (0.5, -0.5, 0.0), (0.5, 0.5, 0.0), (-0.5, 0.5, 0.0)),
        faces=((0, 1, 2), (0, 2, 3)),
    )


def test_atom_inside_closed_ball_counts():
    mu = Atomic(points=((0.0, 0.0),), masses=(2.0,))
    assert ball_mass(mu, (0.5, 0.0), 0.5) == 2.0
    assert ball_mass(mu, (0.5, 0.0), 0.49) == 0.0


def test_segment_chord_is_exact(unit_segment):
    assert ball_mass_bounds(unit_segment, (0.5, 0.0), 0.25) == pytest.approx((0.5, 0.5))
    assert ball_mass(unit_segment, (0.5, 0.3), 0.5) == pytest.approx(0.8)


def test_weighted_polyline_scales_mass():
    mu = PolylineLength(vertices=((0.0, 0.0), (1.0, 0.0)), weight=0.25)
    assert total_mass(mu) == pytest.approx(0.25)
    assert ball_mass(mu, (0.0, 0.0), 1.0) == pytest.approx(0.25)


def test_planar_grid_ball_mass_is_disk_area():
    mu = _unit_square(0.05)
    lo, hi = ball_mass_bounds(mu, (0.5, 0.5), 0.1)
    assert lo == hi
    assert lo == pytest.approx(math.pi * 0.01, rel=1e-9)


def test_grid_restriction_gives_an_interval():
    mu = _unit_square(0.25)
    lo, hi = ball_mass_bounds(mu, (0.5, 0.5), 2.0, within=0.5)
    # one cell lies inside B̄(0.5), six cells meet it
    assert lo == pytest.approx(0.0625)
    assert hi == pytest.approx(0.375)


def test_cantor_interval_mass_is_exact():
    mu = CantorSelfSimilar(level=8)
    assert ball_mass(mu, (1.0 / 6.0, 0.0), 1.0 / 6.0) == pytest.approx(0.5)
    assert ball_mass(mu, (0.5, 0.0), 1.0 / 6.0 - 1e-9) == 0.0


def test_flat_surface_ball_mass_is_disk_area():
    mu = _flat_patch()
    assert ball_mass(mu, (0.0, 0.0, 0.0), 0.3) == pytest.approx(math.pi * 0.09, rel=1e-9)
    assert ball_mass(mu, (0.0, 0.0, 0.4), 0.5) == pytest.approx(math.pi * 0.09, rel=1e-9)


def test_center_dimension_must_match():
    with pytest.raises(DomainError):
        ball_mass_bounds(Atomic(points=((0.0, 0.0),), masses=(1.0,)), (0.0, 0.0, 0.0), 1.0)


def test_many_centers_match_single_calls(two_atoms):
    centers = np.array([[-1.0, 0.0], [0.0, 0.0], [0.5, 0.0]])
    lo, hi = ball_mass_bounds_many(two_atoms, centers, 0.6)
    assert lo.tolist() == [1.0, 0.0, 1.0]
    assert hi.tolist() == lo.tolist()


def test_total_mass_and_radii(two_atoms, unit_segment):
    assert total_mass(two_atoms) == 2.0
    assert support_radius(two_atoms) == pytest.approx(1.0)
    assert support_radius(unit_segment) == pytest.approx(1.0)
    assert total_mass(_unit_square(0.25)) == pytest.approx(1.0)
    assert support_radius(_unit_square(0.25)) == pytest.approx(math.sqrt(2.0))


def test_declared_bounding_radius_must_cover_support():
    mu = Atomic(points=((1.0, 0.0),), masses=(1.0,), bounding_radius=2.0)
    assert bounding_radius(mu) == 2.0
    too_small = Atomic(points=((1.0, 0.0),), masses=(1.0,), bounding_radius=0.5)
    with pytest.raises(DomainError):
        bounding_radius(too_small)


def test_local_power_of_segment_and_grid(unit_segment):
    assert local_power(unit_segment) == (2.0, 1.0)
    b, p = local_power(_unit_square(0.25))
    assert p == 2.0
    assert b == pytest.approx(math.pi)


def test_flat_patch_majorant_is_one_disk():
    # the two faces are coplanar, so a t-ball meets at most a disk of area πt²
    assert modulus_majorant(_flat_patch(), 0.1) == pytest.approx(math.pi * 0.01)


def test_straight_polyline_majorant_is_one_diameter():
    mu = PolylineLength(vertices=((0.0, 0.0), (0.5, 0.0), (1.0, 0.0)))
    assert modulus_majorant(mu, 0.1) == pytest.approx(0.2)


def test_majorant_never_exceeds_total_mass(unit_segment):
    assert modulus_majorant(unit_segment, 10.0) == pytest.approx(1.0)


@pytest.mark.unit
@pytest.mark.parametrize(
    "mu",
    [
        Atomic(points=((0.0, 0.0), (1.0, 1.0)), masses=(1.0, 2.0)),
        PolylineLength(vertices=((0.0, 0.0), (1.0, 0.0), (1.0, 0.7))),
        GridLebesgue(cell=0.2, cells=((0, 0), (1, 0), (3, 2))),
        TriangulatedArea(
            vertices=((0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.3)), faces=((0, 1, 2),)
        ),
        CantorSelfSimilar(level=6),
        CantorSelfSimilar(level=4, base="square"),
    ],
)
def test_sample_count_matches_support_sample(mu):
    for spacing in (0.5, 0.13, 0.02):
        assert sample_count(mu, spacing) == len(support_sample(mu, spacing))


def test_support_sample_covers_segment(unit_segment):
    pts = support_sample(unit_segment, 0.1)
    xs = np.linspace(0.0, 1.0, 101)
    gaps = np.abs(xs[:, None] - pts[None, :, 0]).min(axis=1)
    assert gaps.max() <= 0.1


def test_support_sample_needs_positive_spacing(unit_segment):
    with pytest.raises(DomainError):
        support_sample(unit_segment, 0.0)
