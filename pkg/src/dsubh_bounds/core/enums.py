from __future__ import annotations

import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10 compatibility: mirrors enum.StrEnum from 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__


class GaugeKind(StrEnum):
    POWER = "power"
    POWER_LOG = "power_log"
    TABULATED = "tabulated"
    MODULUS = "modulus"


class MeasureKind(StrEnum):
    ATOMIC = "atomic"
    GRID_LEBESGUE = "grid_lebesgue"
    POLYLINE_LENGTH = "polyline_length"
    TRIANGULATED_AREA = "triangulated_area"
    CANTOR = "cantor"


class ModulusMode(StrEnum):
    EXACT = "exact"
    CERTIFIED = "certified"


class TheoremId(StrEnum):
    T1 = "T1"
    T2C = "T2C"
    T2D = "T2D"
    T3I = "T3i"
    T3II = "T3ii"
    T5C = "T5C"
    T5D = "T5D"
    COR_LEB = "COR-LEB"
    COR_LEB_SWEEP = "COR-LEB-SWEEP"
    COR_CURVE = "COR-CURVE"
    COR_CURVE_SWEEP = "COR-CURVE-SWEEP"
    COR_SURF = "COR-SURF"
    COR_DISKBALL = "COR-DISKBALL"


class RecordStatus(StrEnum):
    OK = "ok"
    VIOLATION = "violation"
    REJECTED = "rejected"


class SweepKind(StrEnum):
    CONSTANT = "constant"
    LINEAR = "linear"
    TO_BOUNDARY = "to_boundary"


class CoverKind(StrEnum):
    POINTS = "points"
    SINGLE = "single"
    UNIFORM = "uniform"
    GREEDY = "greedy"


class SetKind(StrEnum):
    POINTS = "points"
    SEGMENT = "segment"
    POLYLINE = "polyline"
    DISK = "disk"
    BOX = "box"
    ANNULUS = "annulus"
    ARC = "arc"
    CANTOR = "cantor"
    CELLS = "cells"
    SAMPLED = "sampled"
