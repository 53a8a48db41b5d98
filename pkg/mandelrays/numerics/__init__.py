"""Floating-point engine: potentials, ray tracing, Newton solvers and checks."""

from .dynamics import critical_orbit, multiplier, potential
from .rays import refine_landing, trace_dynamic_ray, trace_parameter_ray
from .solvers import component_boundary, find_centers, find_root, solve_misiurewicz
from .types import (
    CheckKind,
    CheckRecord,
    NewtonResult,
    PairReport,
    Plane,
    RayTrace,
    SolutionKind,
    TraceStatus,
)
from .verify import trace_many, verify_pair, verify_structure

__all__ = [
    "CheckKind",
    "CheckRecord",
    "NewtonResult",
    "PairReport",
    "Plane",
    "RayTrace",
    "SolutionKind",
    "TraceStatus",
    "component_boundary",
    "critical_orbit",
    "find_centers",
    "find_root",
    "multiplier",
    "potential",
    "refine_landing",
    "solve_misiurewicz",
    "trace_dynamic_ray",
    "trace_many",
    "trace_parameter_ray",
    "verify_pair",
    "verify_structure",
]
