"""
Spec-file schemas.

Measures, sets, functions, gauges and verification cases are JSON documents; these
models are the single place their shape is defined. Every model forbids unknown keys
so that typos surface as parse errors instead of silently ignored fields.
"""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dsubh_bounds.core.enums import SetKind, SweepKind, TheoremId

Point = list[float]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# --- measures ---


class AtomicSpec(_Spec):
    kind: Literal["atomic"]
    points: list[Point]
    masses: list[float]
    dim: int = 2
    bounding_radius: float | None = None


class RegionSpec(_Spec):
    """Cells lying entirely inside a box, disk or annulus."""

    shape: Literal["box", "disk", "annulus"]
    lower: Point | None = None
    upper: Point | None = None
    center: Point | None = None
    inner: float = 0.0
    outer: float | None = None

    @model_validator(mode="after")
    def _check_shape(self) -> RegionSpec:
        if self.shape == "box" and (self.lower is None or self.upper is None):
            raise ValueError("box region needs lower and upper")
        if self.shape in ("disk", "annulus") and (self.center is None or self.outer is None):
            raise ValueError(f"{self.shape} region needs center and outer")
        return self


class GridSpec(_Spec):
    kind: Literal["grid_lebesgue"]
    cell: float
    cells: list[list[int]] | None = None
    region: RegionSpec | None = None
    densities: list[float] | None = None
    origin: Point = Field(default_factory=lambda: [0.0, 0.0])
    bounding_radius: float | None = None

    @model_validator(mode="after")
    def _one_source(self) -> GridSpec:
        if (self.cells is None) == (self.region is None):
            raise ValueError("grid measure needs exactly one of 'cells' or 'region'")
        if self.region is not None and self.densities is not None:
            raise ValueError("'densities' only applies to an explicit cell list")
        return self


class ArcSpec(_Spec):
    center: Point = Field(default_factory=lambda: [0.0, 0.0])
    radius: float
    start: float = 0.0
    end: float = 1.5707963267948966
    segments: int = 64


class PolylineSpec(_Spec):
    kind: Literal["polyline_length"]
    vertices: list[Point] | None = None
    arc: ArcSpec | None = None
    closed: bool = False
    weight: float = 1.0
    bounding_radius: float | None = None

    @model_validator(mode="after")
    def _one_source(self) -> PolylineSpec:
        if (self.vertices is None) == (self.arc is None):
            raise ValueError("polyline needs exactly one of 'vertices' or 'arc'")
        return self


class GraphCurveSpec(_Spec):
    kind: Literal["graph_curve"]
    xs: list[float]
    ys: list[float]
    q: float
    weight: float = 1.0
    bounding_radius: float | None = None


class PatchSpec(_Spec):
    """Triangulated graph z = a·x + b·y + c over a rectangle, n×n squares, two triangles each."""

    lower: Point
    upper: Point
    n: int = 1
    slope: Point = Field(default_factory=lambda: [0.0, 0.0])
    offset: float = 0.0


class SurfaceSpec(_Spec):
    kind: Literal["triangulated_area"]
    vertices: list[Point] | None = None
    faces: list[list[int]] | None = None
    reference: list[Point] | None = None
    patch: PatchSpec | None = None
    weight: float = 1.0
    bounding_radius: float | None = None

    @model_validator(mode="after")
    def _one_source(self) -> SurfaceSpec:
        explicit = self.vertices is not None and self.faces is not None
        if explicit == (self.patch is not None):
            raise ValueError("surface needs either 'vertices' and 'faces' or a 'patch'")
        return self


class CantorSpec(_Spec):
    kind: Literal["cantor"]
    level: int | None = None
    base: Literal["interval", "square"] = "interval"
    origin: Point = Field(default_factory=lambda: [0.0, 0.0])
    length: float = 1.0
    mass: float = 1.0
    bounding_radius: float | None = None


MeasureSpec = Annotated[
    AtomicSpec | GridSpec | PolylineSpec | GraphCurveSpec | SurfaceSpec | CantorSpec,
    Field(discriminator="kind"),
]


# --- sets ---


class SetSpec(_Spec):
    kind: SetKind | Literal["measure"]
    points: list[Point] | None = None
    a: Point | None = None
    b: Point | None = None
    vertices: list[Point] | None = None
    closed: bool = False
    center: Point | None = None
    radius: float | None = None
    inner: float = 0.0
    lower: Point | None = None
    upper: Point | None = None
    level: int | None = None
    base: Literal["interval", "square"] = "interval"
    origin: Point | None = None
    length: float = 1.0
    cell: float | None = None
    cells: list[list[int]] | None = None
    measure: str | MeasureSpec | None = None
    resolution: int | None = None


# --- functions and gauges ---


class ChargeSpec(_Spec):
    at: Point
    mass: float = 1.0


class RationalSpec(_Spec):
    """Zeros and poles as [re, im] pairs; repeats count as multiplicity."""

    zeros: list[Point] = Field(default_factory=list)
    poles: list[Point] = Field(default_factory=list)
    leading: float = 1.0


class FunctionSpec(_Spec):
    dim: int = 2
    positive: list[ChargeSpec] = Field(default_factory=list)
    negative: list[ChargeSpec] = Field(default_factory=list)
    constant: float = 0.0
    rational: RationalSpec | None = None

    @model_validator(mode="after")
    def _one_source(self) -> FunctionSpec:
        if self.rational is not None and (self.positive or self.negative or self.dim != 2):
            raise ValueError("'rational' form is planar and excludes explicit charges")
        return self


class GaugeSpec(_Spec):
    kind: Literal["power", "power_log", "tabulated"]
    b: float | None = None
    p: float | None = None
    q: float = 0.0
    radius: float | None = None
    normalized: bool = False
    xs: list[float] | None = None
    hs: list[float] | None = None

    @model_validator(mode="after")
    def _check_kind(self) -> GaugeSpec:
        if self.kind in ("power", "power_log") and self.p is None:
            raise ValueError(f"{self.kind} gauge needs p")
        if self.kind in ("power", "power_log") and self.b is None and not self.normalized:
            raise ValueError(f"{self.kind} gauge needs b (or normalized: true)")
        if self.kind == "power_log" and self.radius is None:
            raise ValueError("power_log gauge needs radius")
        if self.kind == "tabulated" and (self.xs is None or self.hs is None):
            raise ValueError("tabulated gauge needs xs and hs")
        return self


# --- verification ---


class SweepSpec(_Spec):
    kind: SweepKind
    radii: list[float]
    c: float | None = None
    a: float | None = None
    b: float = 0.0
    f: float | None = None

    @model_validator(mode="after")
    def _check_kind(self) -> SweepSpec:
        needed = {SweepKind.CONSTANT: "c", SweepKind.LINEAR: "a", SweepKind.TO_BOUNDARY: "f"}
        if getattr(self, needed[self.kind]) is None:
            raise ValueError(f"{self.kind.value} sweep needs '{needed[self.kind]}'")
        if not self.radii:
            raise ValueError("sweep needs at least one radius")
        return self


class CaseSpec(_Spec):
    label: str
    theorem: TheoremId
    function: str | FunctionSpec
    measure: str | MeasureSpec | None = None
    set: str | SetSpec | None = None
    gauge: GaugeSpec | None = None
    r: float | None = None
    R: float | None = None
    p: float | None = None
    b: float | None = None
    t: float | None = None
    sweep: SweepSpec | None = None
    rhs_scale: float = 1.0


class CorpusSpec(_Spec):
    """Named building blocks plus cases; blocks may be inline or a path to a JSON file."""

    measures: dict[str, str | MeasureSpec] = Field(default_factory=dict)
    functions: dict[str, str | FunctionSpec] = Field(default_factory=dict)
    sets: dict[str, str | SetSpec] = Field(default_factory=dict)
    cases: list[dict] = Field(default_factory=list)
