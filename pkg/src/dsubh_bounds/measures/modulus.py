from __future__ import annotations

import functools
import itertools
import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.spatial import cKDTree

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.enums import ModulusMode
from dsubh_bounds.measures.ball_mass import (
    ball_mass_bounds_many,
    bounding_radius,
    modulus_majorant,
    sample_count,
    support_sample,
    total_mass,
)
from dsubh_bounds.measures.curves import lipschitz_constants
from dsubh_bounds.measures.geometry import cantor_cdf
from dsubh_bounds.measures.models import (
    Atomic,
    CantorSelfSimilar,
    MeasureRep,
    ModulusBound,
    PolylineLength,
)
from dsubh_bounds.utils.errors import DomainError

logger = logging.getLogger(__name__)

_MAX_EXACT_ATOMS = 400


def modulus_of_continuity(mu: MeasureRep, t: float) -> ModulusBound:
    """
    What it does:
    - Bounds h_μ(t) = sup over centers y of μ(B̄_y(t)).

    Why it matters:
    - Every gauge hypothesis and every Dini integral in the verification harness reads
      the modulus through this function.

    Behavior:
    - t at or beyond the bounding radius: exactly M.
    - Planar atoms, straight segments and Cantor intervals: exact.
    - Everything else: a certified interval from a refined lattice of centers, with the
      upper end capped by the measure's closed-form majorant and by M.
    """
    if t < 0:
        raise DomainError(f"modulus radius must be >= 0, got {t!r}")

    mass = total_mass(mu)
    if mass == 0.0:
        return ModulusBound(t=t, lower=0.0, upper=0.0, mode=ModulusMode.EXACT)
    if t >= bounding_radius(mu):
        return ModulusBound(t=t, lower=mass, upper=mass, mode=ModulusMode.EXACT)

    if isinstance(mu, Atomic) and mu.dim == 2 and len(mu.masses) <= _MAX_EXACT_ATOMS:
        value = _atomic_exact(mu, t)
        return ModulusBound(t=t, lower=value, upper=value, mode=ModulusMode.EXACT)
    if isinstance(mu, PolylineLength) and mu.is_straight:
        value = min(2.0 * t, mu.length) * mu.weight
        return ModulusBound(t=t, lower=value, upper=value, mode=ModulusMode.EXACT)
    if isinstance(mu, CantorSelfSimilar) and mu.base == "interval":
        value = _cantor_interval_exact(mu, t)
        return ModulusBound(t=t, lower=value, upper=value, mode=ModulusMode.EXACT)

    return _certified(mu, t, mass)


def modulus_profile(mu: MeasureRep, ts: Sequence[float]) -> list[ModulusBound]:
    """
    Bounds on an increasing list of radii, made monotone.

    A running max of lower bounds and a running min (from the right) of upper bounds
    are still valid bounds because h_μ is non-decreasing.
    """
    ts = list(ts)
    if any(b <= a for a, b in itertools.pairwise(ts)):
        raise DomainError("modulus_profile needs strictly increasing radii")
    raw = [modulus_of_continuity(mu, t) for t in ts]
    lowers = np.maximum.accumulate([b.lower for b in raw]) if raw else []
    uppers = np.minimum.accumulate([b.upper for b in raw][::-1])[::-1] if raw else []
    out = []
    for b, lo, hi in zip(raw, lowers, uppers, strict=True):
        lo, hi = float(lo), float(hi)
        out.append(ModulusBound(t=b.t, lower=min(lo, hi), upper=hi, mode=b.mode))
    return out


def _atomic_exact(mu: Atomic, t: float) -> float:
    """Sup over atoms and over the intersection points of radius-t circles about atom pairs."""
    pts = mu.xyz
    candidates = [pts]
    if t > 0 and len(pts) > 1:
        i, j = np.triu_indices(len(pts), k=1)
        a, b = pts[i], pts[j]
        gap = np.linalg.norm(b - a, axis=1)
        ok = (gap > 0) & (gap <= 2.0 * t)
        a, b, gap = a[ok], b[ok], gap[ok]
        mid = 0.5 * (a + b)
        h = np.sqrt(np.maximum(t * t - 0.25 * gap * gap, 0.0))
        normal = np.stack([-(b - a)[:, 1], (b - a)[:, 0]], axis=1) / gap[:, None]
        candidates += [mid + h[:, None] * normal, mid - h[:, None] * normal]
    centers = np.vstack(candidates)
    # candidates on circle boundaries must still count their defining atoms
    lo, _ = ball_mass_bounds_many(mu, centers, t * (1.0 + 1e-12) + 1e-300)
    return float(min(lo.max(), total_mass(mu)))


def _cantor_interval_exact(mu: CantorSelfSimilar, t: float) -> float:
    """The window mass is piecewise linear in its left end; check every breakpoint."""
    width = 2.0 * t / mu.length
    piece = 3.0**-mu.level
    ends = np.concatenate([mu.left_ends, mu.left_ends + piece])
    starts = np.concatenate([ends, ends - width])
    mass = cantor_cdf(starts + width, mu.level) - cantor_cdf(starts, mu.level)
    return float(min(mu.mass * mass.max(), mu.mass))


@functools.lru_cache(maxsize=64)
def _curve_distortion(mu: PolylineLength) -> float:
    """Lip·Lip⁻¹; a t-ball then meets a parameter interval of length at most 2t·Lip⁻¹."""
    lc = lipschitz_constants(mu)
    return lc.product if lc.bilipschitz else math.inf


def _lattice_near(samples: np.ndarray, delta: float, reach: float, cap: int) -> np.ndarray | None:
    """Lattice points of spacing `delta` within `reach` of the samples, or None if over `cap`."""
    dim = samples.shape[1]
    k = math.ceil(reach / delta)
    axis = np.arange(-k, k + 1)
    offsets = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    offsets = offsets[np.linalg.norm(offsets, axis=1) <= k + math.sqrt(dim)]

    base = np.unique(np.round(samples / delta).astype(np.int64), axis=0)
    if len(base) * len(offsets) > 40 * cap:
        return None
    points = np.unique((base[:, None, :] + offsets[None, :, :]).reshape(-1, dim), axis=0)
    if len(points) > cap:
        return None
    return points * delta


def _certified(mu: MeasureRep, t: float, mass: float) -> ModulusBound:
    cap = settings.modulus_max_centers
    majorant = modulus_majorant(mu, t)
    if isinstance(mu, PolylineLength):
        majorant = min(majorant, 2.0 * t * mu.weight * _curve_distortion(mu))
    dim = mu.dim

    center_spacing = max(t / 4.0, 1e-9)
    while sample_count(mu, center_spacing) > cap:
        center_spacing *= 2.0
    centers = support_sample(mu, center_spacing)
    if len(centers) > cap:
        centers = centers[np.linspace(0, len(centers) - 1, cap).astype(int)]
    lo_centers, _ = ball_mass_bounds_many(mu, centers, t)
    lower = float(lo_centers.max()) if lo_centers.size else 0.0
    upper = majorant

    delta = t / 2.0
    for _ in range(8):
        if upper - lower <= settings.modulus_gap * upper:
            break
        spacing = delta / 2.0
        if sample_count(mu, spacing) > 40 * cap:
            break
        samples = support_sample(mu, spacing)
        slack = 0.5 * delta * math.sqrt(dim)
        lattice = _lattice_near(samples, delta, t + 2.0 * slack + spacing, cap)
        if lattice is None:
            break
        # only lattice points that can see mass at radius t + slack matter
        tree = cKDTree(samples)
        dist, _ = tree.query(lattice)
        lattice = lattice[dist <= t + slack + spacing]
        lo, _ = ball_mass_bounds_many(mu, lattice, t)
        _, hi = ball_mass_bounds_many(mu, lattice, t + slack)
        if lo.size:
            lower = max(lower, float(lo.max()))
            upper = min(upper, float(hi.max()))
        delta /= 2.0

    upper = min(max(upper, lower), mass)
    lower = min(lower, upper)
    logger.debug("certified modulus t=%g: [%g, %g]", t, lower, upper)
    return ModulusBound(t=t, lower=lower, upper=upper, mode=ModulusMode.CERTIFIED)
