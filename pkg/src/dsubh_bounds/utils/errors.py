from __future__ import annotations


class DomainError(ValueError):
    """Raised when an argument lies outside the mathematical domain of an operation."""


class OutOfRangeError(DomainError):
    """Raised when a gauge inverse is requested above h(r)."""


class InadmissibleGaugeError(DomainError):
    """Raised when a gauge fails the slope condition inf t·h'(t)/h(t) > d - 2."""


class GeometryError(ValueError):
    """Raised for self-intersecting curves, degenerate triangles and similar inputs."""


class SlopeViolationError(GeometryError):
    """Raised when a sampled graph exceeds its declared slope bound."""

    def __init__(self, message: str, *, segment: int) -> None:
        super().__init__(message)
        self.segment = segment


class QuadratureRefusedError(RuntimeError):
    """Raised when a charge sits too close to an integration sphere."""

    def __init__(self, message: str, *, distance: float) -> None:
        super().__init__(message)
        self.distance = distance


class SpecError(ValueError):
    """Raised when a measure, set, function or corpus spec file cannot be parsed."""

    def __init__(self, message: str, *, location: str = "") -> None:
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class CaseRejected(Exception):
    """Raised when a verification case does not meet the hypotheses of its inequality."""

    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason
