from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from dsubh_bounds.measures.models import PolylineLength, TriangulatedArea
from dsubh_bounds.utils.errors import DomainError, GeometryError, SlopeViolationError

logger = logging.getLogger(__name__)

_DENSIFY = 8
_MAX_PAIR_POINTS = 3000
_UNBOUNDED = 1e8


@dataclass(frozen=True)
class LipschitzConstants:
    lip: float
    lip_inv: float
    bilipschitz: bool

    @property
    def product(self) -> float:
        return self.lip * self.lip_inv


def curve_measure_from_graph(xs, ys, q: float, *, weight: float = 1.0) -> PolylineLength:
    """
    What it does:
    - Builds the length measure of the graph x ↦ (x, y(x)) through the samples.

    Why it matters:
    - Bounded-slope graphs are bilipschitz with Lip = √(1+q²) and Lip⁻¹ ≤ 1 in the
      x-parametrisation, and the curve corollaries use exactly these constants.

    Behavior:
    - xs must be strictly increasing.
    - Any segment steeper than q raises SlopeViolationError carrying the segment index.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 2:
        raise GeometryError("graph samples need matching 1-d xs and ys with at least two points")
    if not q >= 0:
        raise DomainError(f"slope bound must be >= 0, got {q!r}")

    dx = np.diff(xs)
    if np.any(dx <= 0):
        raise GeometryError("graph abscissae must be strictly increasing")
    slopes = np.abs(np.diff(ys)) / dx
    bad = np.flatnonzero(slopes > q * (1.0 + 1e-12) + 1e-15)
    if bad.size:
        i = int(bad[0])
        raise SlopeViolationError(
            f"segment {i} has slope {slopes[i]:.6g} above the bound {q:g}", segment=i
        )

    return PolylineLength(
        vertices=tuple(zip(xs.tolist(), ys.tolist(), strict=True)),
        weight=weight,
        lip=math.sqrt(1.0 + q * q),
        lip_inv=1.0,
    )


def lipschitz_constants(c: PolylineLength | TriangulatedArea) -> LipschitzConstants:
    """
    Lip(l) and Lip(l⁻¹) of the parameterisation.

    Polylines: arclength parameterisation, so Lip = 1 and Lip⁻¹ is the largest arc/chord
    ratio over vertex pairs of the curve densified to 8 points per segment. Graph curves
    return the constants recorded when they were built. Closed curves are flagged as
    not bilipschitz (the two ends of the parameter interval meet).

    Surfaces: the piecewise-affine map from the reference parameterisation (or the
    (x, y) projection) to the triangles.
    """
    if isinstance(c, PolylineLength):
        return _polyline_constants(c)
    if isinstance(c, TriangulatedArea):
        return _surface_constants(c)
    raise DomainError(f"lipschitz_constants needs a curve or surface, got {type(c).__name__}")


def _polyline_constants(c: PolylineLength) -> LipschitzConstants:
    if c.lip is not None and c.lip_inv is not None:
        return LipschitzConstants(lip=c.lip, lip_inv=c.lip_inv, bilipschitz=True)
    if c.closed:
        return LipschitzConstants(lip=1.0, lip_inv=math.inf, bilipschitz=False)

    per_segment = _DENSIFY
    while len(c.segments) * per_segment > _MAX_PAIR_POINTS and per_segment > 1:
        per_segment //= 2
    s = np.arange(per_segment) / per_segment
    starts, ends = c.segments[:, 0], c.segments[:, 1]
    pts = (starts[:, None, :] + s[None, :, None] * (ends - starts)[:, None, :]).reshape(-1, 2)
    pts = np.vstack([pts, ends[-1:]])
    offsets = np.concatenate([[0.0], np.cumsum(c.segment_lengths)])
    arc = (offsets[:-1, None] + s[None, :] * c.segment_lengths[:, None]).ravel()
    arc = np.append(arc, offsets[-1])

    i, j = np.triu_indices(len(pts), k=1)
    chord = np.linalg.norm(pts[i] - pts[j], axis=1)
    if np.any(chord == 0.0):
        return LipschitzConstants(lip=1.0, lip_inv=math.inf, bilipschitz=False)
    ratio = float(np.max((arc[j] - arc[i]) / chord))
    if ratio > _UNBOUNDED:
        logger.info("polyline arc/chord ratio %g treated as unbounded", ratio)
        return LipschitzConstants(lip=1.0, lip_inv=math.inf, bilipschitz=False)
    return LipschitzConstants(lip=1.0, lip_inv=max(ratio, 1.0), bilipschitz=True)


def _surface_constants(s: TriangulatedArea) -> LipschitzConstants:
    xyz = np.asarray(s.vertices, dtype=float)
    ref = np.asarray(s.reference, dtype=float) if s.reference is not None else xyz[:, :2]
    faces = np.asarray(s.faces, dtype=int)

    # affine map per face: columns are the images of the two reference edge vectors
    f0, f1, f2 = faces[:, 0], faces[:, 1], faces[:, 2]
    ref_edges = np.stack([ref[f1] - ref[f0], ref[f2] - ref[f0]], axis=2)
    img_edges = np.stack([xyz[f1] - xyz[f0], xyz[f2] - xyz[f0]], axis=2)
    det = np.linalg.det(ref_edges)
    if np.any(np.abs(det) < 1e-14):
        return LipschitzConstants(lip=math.inf, lip_inv=math.inf, bilipschitz=False)
    jac = img_edges @ np.linalg.inv(ref_edges)
    sv = np.linalg.svd(jac, compute_uv=False)
    lip = float(sv[:, 0].max())
    smallest = float(sv[:, -1].min())
    if smallest <= 1.0 / _UNBOUNDED:
        return LipschitzConstants(lip=lip, lip_inv=math.inf, bilipschitz=False)

    i, j = np.triu_indices(len(xyz), k=1)
    far = np.linalg.norm(xyz[i] - xyz[j], axis=1)
    near = np.linalg.norm(ref[i] - ref[j], axis=1)
    if np.any(far == 0.0):
        return LipschitzConstants(lip=lip, lip_inv=math.inf, bilipschitz=False)
    lip_inv = max(1.0 / smallest, float(np.max(near / far)))
    return LipschitzConstants(lip=lip, lip_inv=lip_inv, bilipschitz=True)


def surface_measure_total(s: TriangulatedArea) -> float:
    return float(s.areas.sum())


def jacobian_bound(lip: float, d: int) -> float:
    """√((d-1)!·d)·Lip^(d-1), the Jacobian bound for a map with Lipschitz constant lip."""
    return math.sqrt(math.factorial(d - 1) * d) * lip ** (d - 1)


def jacobian_violations(s: TriangulatedArea) -> list[int]:
    """Faces whose area ratio to the reference triangle exceeds jacobian_bound(Lip, 3)."""
    consts = _surface_constants(s)
    if not math.isfinite(consts.lip):
        return list(range(len(s.faces)))
    xyz = np.asarray(s.vertices, dtype=float)
    ref = np.asarray(s.reference, dtype=float) if s.reference is not None else xyz[:, :2]
    tri = ref[np.asarray(s.faces, dtype=int)]
    e1, e2 = tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]
    ref_area = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    ratio = s.areas / ref_area
    return np.flatnonzero(ratio > jacobian_bound(consts.lip, 3) * (1.0 + 1e-12)).tolist()
