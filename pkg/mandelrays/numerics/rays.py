"""External rays of the Mandelbrot set and of quadratic Julia sets.

Rays are pulled back along a geometric ladder of potentials
t_j = start * 2^(-j / sharpness). At step j the point is corrected by
Newton's method on z_{m} - exp(2^m t_j + 2 pi i 2^m theta) with
m = ceil(j / sharpness), which keeps the target modulus between
exp(start) and exp(2 start).
"""

from __future__ import annotations

import cmath
import logging
import math
from fractions import Fraction
from typing import Callable, Optional

from ..angle import Angle, orbit_type
from ..combinat import portrait_cycle
from ..config import SolverConfig
from ..errors import ConvergenceError, MandelRaysError
from .dynamics import (
    periodic_point,
    potential,
    preperiodic_point,
)
from .solvers import find_root, solve_misiurewicz
from .types import Plane, RayTrace, TraceStatus

logger = logging.getLogger(__name__)

_STILL_STEPS = 3
_ROUNDING = 1e-15

Corrector = Callable[[complex, int, complex], Optional[complex]]


def _target(theta: Angle, m: int, log_radius: float) -> complex:
    # exact doubling of the angle; ONE behaves as 0
    turned = Fraction((theta.numerator << m) % theta.denominator, theta.denominator)
    return cmath.exp(complex(log_radius, 2 * math.pi * float(turned)))


def _parameter_corrector(cfg: SolverConfig) -> Corrector:
    def correct(c: complex, m: int, w: complex) -> Optional[complex]:
        for _ in range(cfg.newton_steps_per_level):
            z, dz = c, 1 + 0j
            for _ in range(m):
                dz = 2 * z * dz + 1
                z = z * z + c
            step = (z - w) / dz
            c -= step
            if not cmath.isfinite(c):
                return None
            if abs(step) <= _ROUNDING * (1 + abs(c)):
                return c
        return c if abs(step) < cfg.landing_tolerance else None

    return correct


def _dynamic_corrector(c: complex, cfg: SolverConfig) -> Corrector:
    def correct(z0: complex, m: int, w: complex) -> Optional[complex]:
        for _ in range(cfg.newton_steps_per_level):
            z, d = z0, 1 + 0j
            for _ in range(m):
                d = 2 * z * d
                z = z * z + c
            if d == 0:
                return None
            step = (z - w) / d
            z0 -= step
            if not cmath.isfinite(z0):
                return None
            if abs(step) <= _ROUNDING * (1 + abs(z0)):
                return z0
        return z0 if abs(step) < cfg.landing_tolerance else None

    return correct


def _descend(trace: RayTrace, correct: Corrector, cfg: SolverConfig, stop_potential: float) -> RayTrace:
    sharpness = cfg.sharpness
    start = cfg.start_potential
    point = _target(trace.angle, 0, start)
    trace.points.append((start, point))
    still = 0

    for j in range(1, cfg.potential_halvings * sharpness + 1):
        t = start * 2 ** (-j / sharpness)
        if t <= stop_potential:
            trace.status = TraceStatus.TRUNCATED
            logger.debug("%s ray %s truncated at potential %.3g", trace.plane.value, trace.angle, t)
            return trace
        m = -(-j // sharpness)
        w = _target(trace.angle, m, start * 2 ** (m - j / sharpness))
        moved = correct(point, m, w)
        if moved is None:
            trace.status = TraceStatus.LOST
            trace.lost_at = j
            logger.debug("%s ray %s lost at level %d", trace.plane.value, trace.angle, j)
            return trace
        still = still + 1 if abs(moved - point) < cfg.landing_tolerance else 0
        point = moved
        trace.points.append((t, point))
        if still >= _STILL_STEPS or t < cfg.min_potential:
            trace.status = TraceStatus.LANDED
            return trace

    trace.status = TraceStatus.TRUNCATED
    return trace


def _finish(trace: RayTrace, cfg: SolverConfig) -> RayTrace:
    trace.landing = trace.endpoint
    if trace.status is TraceStatus.LANDED and cfg.refine_landing:
        refined = refine_landing(trace, cfg)
        if refined is not None:
            trace.landing = refined
            trace.refined = True
    logger.debug(
        "%s ray %s: %s after %d points", trace.plane.value, trace.angle, trace.status.value, len(trace.points)
    )
    return trace


def trace_parameter_ray(theta: Angle, cfg: SolverConfig) -> RayTrace:
    trace = RayTrace(angle=theta, plane=Plane.PARAMETER)
    _descend(trace, _parameter_corrector(cfg), cfg, 0.0)
    return _finish(trace, cfg)


def trace_dynamic_ray(c: complex, theta: Angle, cfg: SolverConfig) -> RayTrace:
    """Dynamic ray of z^2 + c at angle theta.

    For parameters outside the Mandelbrot set the trace stops at the
    potential of the critical point, below which rays may hit precritical
    points; such traces end TRUNCATED.
    """
    trace = RayTrace(angle=theta, plane=Plane.DYNAMIC, c=c)
    critical = potential(c, c, cfg) / 2
    _descend(trace, _dynamic_corrector(c, cfg), cfg, critical)
    return _finish(trace, cfg)


def _refine_parameter(theta: Angle, seed: complex, cfg: SolverConfig) -> complex:
    l, n = orbit_type(theta)
    if l:
        return solve_misiurewicz(l, n, seed, cfg).parameter
    portrait = portrait_cycle(theta)
    return find_root(seed, portrait.orbit_period, portrait.rotation, cfg).parameter


def _refine_dynamic(theta: Angle, c: complex, seed: complex, cfg: SolverConfig) -> complex:
    l, n = orbit_type(theta)
    if l:
        return preperiodic_point(c, seed, l, n, cfg)[0]
    return periodic_point(c, seed, n, cfg)[0]


def refine_landing(trace: RayTrace, cfg: SolverConfig) -> Optional[complex]:
    """Polish the endpoint of a landed trace into the exact landing point.

    Periodic parameter rays are solved as parabolic parameters using the
    orbit period and rotation of their portrait; preperiodic ones as
    Misiurewicz parameters; dynamic rays as (pre)periodic points. The
    result is rejected when it lies farther than ``capture_radius`` from the
    endpoint.
    """
    seed = trace.endpoint
    if seed is None:
        return None
    try:
        if trace.plane is Plane.PARAMETER:
            refined = _refine_parameter(trace.angle, seed, cfg)
        else:
            refined = _refine_dynamic(trace.angle, trace.c, seed, cfg)
    except (ConvergenceError, MandelRaysError) as e:
        logger.warning("landing refinement of ray %s failed: %s", trace.angle, e)
        return None
    if abs(refined - seed) > cfg.capture_radius:
        logger.warning(
            "landing refinement of ray %s moved %.3g, beyond the capture radius",
            trace.angle,
            abs(refined - seed),
        )
        return None
    return refined
