"""Iteration of z -> z^2 + c: potentials, multipliers and local Newton solves."""

from __future__ import annotations

import cmath
import logging
import math
import sys
from typing import Callable, List, Tuple

import numpy as np

from ..config import SolverConfig
from ..errors import ConvergenceError

logger = logging.getLogger(__name__)

_EPS = 4 * sys.float_info.epsilon


def potential(c: complex, z: complex, cfg: SolverConfig) -> float:
    """Green's function estimate log|z_N| / 2^N; 0 for orbits that stay bounded."""
    for n in range(cfg.max_iterations + 1):
        radius = abs(z)
        if radius > cfg.potential_bailout:
            return math.ldexp(math.log(radius), -n)
        z = z * z + c
    return 0.0


def multiplier(c: complex, z: complex, n: int) -> complex:
    """Derivative of the n-th iterate at z, i.e. the product of 2 z_j."""
    product = 1 + 0j
    for _ in range(n):
        product *= 2 * z
        z = z * z + c
    return product


def critical_orbit(c: complex, length: int) -> List[complex]:
    """c_0 = 0, c_1 = c, ... up to index ``length``."""
    orbit = [0j]
    for _ in range(length):
        orbit.append(orbit[-1] ** 2 + c)
    return orbit


def orbit_jet(c: complex, z: complex, k: int) -> Tuple[complex, complex, complex, complex, complex]:
    """z_k and the derivatives d/dz, d/dc, d2/dz2, d2/dzdc of z_k and d/dz z_k.

    Returns (z_k, a, b, aa, ab) with a = dz_k/dz, b = dz_k/dc,
    aa = da/dz, ab = da/dc.
    """
    a, b, aa, ab = 1 + 0j, 0j, 0j, 0j
    for _ in range(k):
        aa, ab = 2 * a * a + 2 * z * aa, 2 * b * a + 2 * z * ab
        a, b = 2 * z * a, 2 * z * b + 1
        z = z * z + c
    return z, a, b, aa, ab


def newton_scalar(
    fn: Callable[[complex], Tuple[complex, complex]],
    x: complex,
    cfg: SolverConfig,
    what: str,
) -> Tuple[complex, float]:
    """Newton iteration x -= f/f' until the correction hits rounding level.

    Returns the best iterate and the size of the correction that produced
    it. Stagnation above rounding level is accepted when that correction is
    below ``solve_tolerance``.
    """
    best_x, best_size = x, math.inf
    for step in range(cfg.max_newton_steps):
        value, slope = fn(x)
        if slope == 0 or not cmath.isfinite(value) or not cmath.isfinite(slope):
            break
        delta = value / slope
        x = x - delta
        size = abs(delta)
        if not cmath.isfinite(x):
            break
        if size < best_size:
            best_x, best_size = x, size
        if size <= _EPS * (1 + abs(x)):
            logger.debug("%s: converged in %d steps", what, step + 1)
            return x, size
    if best_size < cfg.solve_tolerance:
        return best_x, best_size
    raise ConvergenceError(f"{what}: Newton did not converge (last correction {best_size:.3g})")


def periodic_point(c: complex, z: complex, n: int, cfg: SolverConfig) -> Tuple[complex, float]:
    """Point of period dividing n near z.

    Newton on g/g' with g = z_n - z, which stays quadratic at the double
    roots of parabolic points.
    """

    def fn(x: complex) -> Tuple[complex, complex]:
        zn, a, _, aa, _ = orbit_jet(c, x, n)
        g, dg = zn - x, a - 1
        if dg == 0:
            return g, dg
        return g / dg, 1 - g * aa / (dg * dg)

    return newton_scalar(fn, z, cfg, f"period-{n} point")


def preperiodic_point(
    c: complex, z: complex, preperiod: int, period: int, cfg: SolverConfig
) -> Tuple[complex, float]:
    """Point with z_{l+n} = z_l near z."""

    def fn(x: complex) -> Tuple[complex, complex]:
        zl, al, _, _, _ = orbit_jet(c, x, preperiod)
        zln, aln, _, _, _ = orbit_jet(c, zl, period)
        return zln - zl, aln * al - al

    return newton_scalar(fn, z, cfg, f"({preperiod}, {period}) point")


def solve_periodic_system(
    c: complex, z: complex, k: int, mu: complex, cfg: SolverConfig
) -> Tuple[complex, complex, float]:
    """Solve z_k = z and (p_c^k)'(z) = mu in (c, z) by two-dimensional Newton."""
    best = (c, z, math.inf)
    for _ in range(cfg.max_newton_steps):
        zk, a, b, aa, ab = orbit_jet(c, z, k)
        residual = np.array([zk - z, a - mu], dtype=complex)
        jacobian = np.array([[a - 1, b], [aa, ab]], dtype=complex)
        try:
            dz, dc = np.linalg.solve(jacobian, residual)
        except np.linalg.LinAlgError:
            break
        z, c = z - dz, c - dc
        if not (cmath.isfinite(z) and cmath.isfinite(c)):
            break
        size = max(abs(dz), abs(dc))
        if size < best[2]:
            best = (c, z, size)
        if size <= _EPS * (1 + abs(c) + abs(z)):
            return c, z, size
    if best[2] < cfg.solve_tolerance:
        return best
    raise ConvergenceError(
        f"period-{k} system with multiplier {mu:.6g}: Newton did not converge"
    )


def nearest_return(c: complex, period: int, cfg: SolverConfig) -> complex:
    """Critical orbit point that comes closest to returning after ``period`` steps.

    Near a parabolic parameter the critical orbit lingers by the parabolic
    orbit; this gives a start point for :func:`solve_periodic_system`.
    """
    orbit = [c]
    while len(orbit) < cfg.max_iterations and abs(orbit[-1]) <= cfg.escape_radius:
        orbit.append(orbit[-1] ** 2 + c)
    if len(orbit) <= period:
        return orbit[-1]
    gaps = [abs(orbit[j + period] - orbit[j]) for j in range(len(orbit) - period)]
    return orbit[int(np.argmin(gaps))]
