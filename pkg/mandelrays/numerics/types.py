from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from ..angle import Angle


class Plane(Enum):
    DYNAMIC = "dynamic"
    PARAMETER = "parameter"


class TraceStatus(Enum):
    LANDED = "landed"
    TRUNCATED = "truncated"
    LOST = "lost"


class SolutionKind(Enum):
    CENTER = "center"
    ROOT = "root"
    BOUNDARY = "boundary"
    MISIUREWICZ = "misiurewicz"


@dataclass
class RayTrace:
    """Points (potential, position) of one external ray, potentials decreasing.

    ``c`` is the parameter of the Julia set for dynamic rays and None for
    parameter rays. ``landing`` is the refined landing point when one was
    found, otherwise the last traced point.
    """

    angle: Angle
    plane: Plane
    c: Optional[complex] = None
    points: List[Tuple[float, complex]] = field(default_factory=list)
    status: TraceStatus = TraceStatus.TRUNCATED
    landing: Optional[complex] = None
    lost_at: Optional[int] = None
    refined: bool = False

    @property
    def endpoint(self) -> Optional[complex]:
        return self.points[-1][1] if self.points else None

    @property
    def final_potential(self) -> Optional[float]:
        return self.points[-1][0] if self.points else None


@dataclass(frozen=True)
class NewtonResult:
    parameter: complex
    kind: SolutionKind
    residual: float
    multiplier: Optional[complex] = None
    # (preperiod, period) of the critical value, for Misiurewicz solutions
    orbit_type: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class PairReport:
    low: Angle
    high: Angle
    agree: bool
    distance: float
    landing: Optional[complex]
    # distance between the unrefined endpoints of the two traces
    raw_distance: float = math.inf


class CheckKind(Enum):
    PAIR = "PAIR"
    ROOT = "ROOT"
    COUNT = "COUNT"
    CLASS = "CLASS"
    MISIUREWICZ = "MISIUREWICZ"
    DYNAMIC_PAIR = "DYNAMIC_PAIR"
    DYNAMIC_CLASS = "DYNAMIC_CLASS"


@dataclass(frozen=True)
class CheckRecord:
    """One line of a verification report."""

    kind: CheckKind
    passed: bool
    fields: Tuple[Tuple[str, str], ...]

    def get(self, key: str) -> Optional[str]:
        return dict(self.fields).get(key)
