from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from dsubh_bounds.core.enums import SweepKind, TheoremId
from dsubh_bounds.core.gauge import Gauge
from dsubh_bounds.dsubh.function import DeltaSubharmonic
from dsubh_bounds.hausdorff.sets import CompactSet
from dsubh_bounds.measures.models import MeasureRep
from dsubh_bounds.specs.loaders import (
    build_function,
    build_gauge,
    build_measure,
    build_set,
    describe_validation_error,
    load_function,
    load_measure,
    load_set,
)
from dsubh_bounds.specs.schemas import CaseSpec, CorpusSpec, FunctionSpec, SetSpec, SweepSpec
from dsubh_bounds.utils.errors import DomainError, SpecError


def _normalize_sweep_kind(kind: SweepKind | str) -> SweepKind:
    if isinstance(kind, SweepKind):
        return kind

    allowed = {k.value for k in SweepKind}
    if kind not in allowed:
        raise ValueError(f"Invalid sweep kind '{kind}'. Allowed: {sorted(allowed)}")
    return SweepKind(kind)


@dataclass(frozen=True)
class Sweep:
    """Outer radius rule R = r + s(r) evaluated at every listed inner radius."""

    kind: SweepKind
    radii: tuple[float, ...]
    c: float = 0.0
    a: float = 0.0
    b: float = 0.0
    f: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", _normalize_sweep_kind(self.kind))
        if not self.radii or any(not r > 0 for r in self.radii):
            raise DomainError("sweep radii must be a nonempty list of positive numbers")

    @classmethod
    def from_spec(cls, spec: SweepSpec) -> Sweep:
        return cls(
            kind=spec.kind,
            radii=tuple(spec.radii),
            c=spec.c or 0.0,
            a=spec.a or 0.0,
            b=spec.b,
            f=spec.f or 0.0,
        )

    def s(self, r: float) -> float:
        if self.kind is SweepKind.CONSTANT:
            return self.c
        if self.kind is SweepKind.LINEAR:
            return self.a * r + self.b
        return self.f * (1.0 - r)


@dataclass(frozen=True, eq=False)
class VerificationCase:
    label: str
    theorem: TheoremId
    U: DeltaSubharmonic
    mu: MeasureRep | None = None
    S: CompactSet | None = None
    r: float | None = None
    R: float | None = None
    gauge: Gauge | None = None
    p: float | None = None
    b: float | None = None
    t: float | None = None
    sweep: Sweep | None = None
    rhs_scale: float = 1.0

    @property
    def dim(self) -> int:
        return self.U.dim

    def geometry(self) -> tuple[float, float]:
        if self.r is None or self.R is None:
            raise DomainError(f"{self.theorem.value} needs both r and R")
        if not (0 < self.r < self.R):
            raise DomainError(f"needs 0 < r < R, got r={self.r!r}, R={self.R!r}")
        return self.r, self.R

    def require_measure(self) -> MeasureRep:
        if self.mu is None:
            raise DomainError(f"{self.theorem.value} needs a measure")
        return self.mu


class _Resolver:
    """Turns name references of a corpus into built objects, each built once."""

    def __init__(self, corpus: CorpusSpec, base_dir: Path) -> None:
        self.corpus = corpus
        self.base_dir = base_dir
        self._measures: dict[str, MeasureRep] = {}
        self._functions: dict[str, DeltaSubharmonic] = {}
        self._sets: dict[str, CompactSet] = {}

    def measure(self, ref) -> MeasureRep:
        if not isinstance(ref, str):
            return build_measure(ref)
        if ref not in self._measures:
            entry = self.corpus.measures.get(ref, ref)
            if isinstance(entry, str):
                self._measures[ref] = load_measure(self.base_dir / entry)
            else:
                self._measures[ref] = build_measure(entry, location=f"measures.{ref}")
        return self._measures[ref]

    def function(self, ref) -> DeltaSubharmonic:
        if isinstance(ref, FunctionSpec):
            return build_function(ref)
        if ref not in self._functions:
            entry = self.corpus.functions.get(ref, ref)
            if isinstance(entry, str):
                self._functions[ref] = load_function(self.base_dir / entry)
            else:
                self._functions[ref] = build_function(entry, location=f"functions.{ref}")
        return self._functions[ref]

    def set(self, ref, mu: MeasureRep | None) -> CompactSet:
        if isinstance(ref, SetSpec):
            return self._build_set(ref, mu, "set")
        if ref in self._sets:
            return self._sets[ref]
        entry = self.corpus.sets.get(ref, ref)
        if isinstance(entry, str):
            built = load_set(self.base_dir / entry)
        else:
            built = self._build_set(entry, mu, f"sets.{ref}")
            # a set that rasterises the case's own measure differs per case
            if entry.kind == "measure" and entry.measure is None:
                return built
        self._sets[ref] = built
        return built

    def _build_set(self, spec: SetSpec, mu: MeasureRep | None, location: str) -> CompactSet:
        if spec.measure is not None:
            mu = self.measure(spec.measure)
        return build_set(spec, measure=mu, location=location)


def parse_case(raw: object, *, index: int) -> CaseSpec:
    try:
        return CaseSpec.model_validate(raw)
    except ValidationError as e:
        raise SpecError(describe_validation_error(e), location=f"cases[{index}]") from e


def case_label(raw: object, index: int) -> str:
    if isinstance(raw, dict) and isinstance(raw.get("label"), str):
        return raw["label"]
    return f"case-{index}"


def build_case(spec: CaseSpec, resolver: _Resolver) -> VerificationCase:
    U = resolver.function(spec.function)
    mu = resolver.measure(spec.measure) if spec.measure is not None else None
    S = resolver.set(spec.set, mu) if spec.set is not None else None
    return VerificationCase(
        label=spec.label,
        theorem=spec.theorem,
        U=U,
        mu=mu,
        S=S,
        r=spec.r,
        R=spec.R,
        gauge=build_gauge(spec.gauge) if spec.gauge is not None else None,
        p=spec.p,
        b=spec.b,
        t=spec.t,
        sweep=Sweep.from_spec(spec.sweep) if spec.sweep is not None else None,
        rhs_scale=spec.rhs_scale,
    )


def resolver_for(corpus: CorpusSpec, base_dir: str | Path) -> _Resolver:
    return _Resolver(corpus, Path(base_dir))
