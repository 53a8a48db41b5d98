"""Newton solvers for centers, roots, boundary points and Misiurewicz parameters."""

from __future__ import annotations

import cmath
import logging
import math
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from ..angle import proper_divisors
from ..combinat import count_parabolic
from ..config import SolverConfig
from ..errors import ConvergenceError, WrongOrbitError
from .dynamics import (
    critical_orbit,
    multiplier,
    nearest_return,
    newton_scalar,
    solve_periodic_system,
)
from .types import NewtonResult, SolutionKind

logger = logging.getLogger(__name__)

_ESCAPE = 1e50
_ABERTH_STEPS = 500
_DIVISOR_ROOT = 1e-9


def _newton_ratios(c: np.ndarray, n: int) -> np.ndarray:
    """P/P' for P(c) = p_c^n(0), vectorized over c.

    Once |z| is huge the constant term no longer matters and each further
    squaring halves the ratio, so escaping entries are finished early.
    """
    z = np.zeros_like(c)
    dz = np.zeros_like(c)
    ratio = np.zeros_like(c)
    escaped = np.zeros(c.shape, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(n):
            dz = 2 * z * dz + 1
            z = z * z + c
            big = ~escaped & (np.abs(z) > _ESCAPE)
            ratio[big] = z[big] / dz[big] / 2.0 ** (n - 1 - i)
            escaped |= big
            z[escaped] = 0
            dz[escaped] = 0
        ratio[~escaped] = z[~escaped] / dz[~escaped]
    return ratio


def _aberth(n: int) -> np.ndarray:
    degree = 2 ** (n - 1)
    k = np.arange(degree)
    roots = -0.75 + 1.4 * np.exp(2j * np.pi * (k + 0.25) / degree)
    for step in range(_ABERTH_STEPS):
        ratio = _newton_ratios(roots, n)
        gaps = roots[:, None] - roots[None, :]
        np.fill_diagonal(gaps, 1)
        inverse = 1 / gaps
        np.fill_diagonal(inverse, 0)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            correction = ratio / (1 - ratio * inverse.sum(axis=1))
        correction[~np.isfinite(correction)] = 0
        roots = roots - correction
        if np.all(np.abs(correction) <= 1e-14 * (1 + np.abs(roots))):
            logger.debug("period %d: simultaneous Newton converged in %d steps", n, step + 1)
            break
    else:
        logger.debug("period %d: simultaneous Newton hit the step limit", n)
    return roots


def find_centers(n: int, cfg: SolverConfig) -> List[NewtonResult]:
    """Centers of all hyperbolic components of exact period n, sorted."""
    if n < 1:
        raise ValueError("period must be positive")
    roots = np.array([0j]) if n == 1 else _aberth(n)

    residual = np.zeros(roots.shape)
    for _ in range(3):
        step = _newton_ratios(roots, n)
        roots = roots - step
        residual = np.abs(step)

    exact = np.ones(roots.shape, dtype=bool)
    for d in proper_divisors(n):
        exact &= np.abs(_newton_ratios(roots, d)) >= _DIVISOR_ROOT
    exact &= np.isfinite(roots)
    roots, residual = roots[exact], residual[exact]

    order = np.lexsort((roots.imag, roots.real))
    roots, residual = roots[order], residual[order]

    expected = count_parabolic(n)
    if len(roots) > 1:
        gaps = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() < _DIVISOR_ROOT:
            raise ConvergenceError(
                f"period {n}: duplicate centers found", found=len(roots), expected=expected
            )
    if len(roots) != expected:
        raise ConvergenceError(
            f"period {n}: found {len(roots)} centers, expected {expected}",
            found=len(roots),
            expected=expected,
        )
    if np.any(residual >= cfg.solve_tolerance):
        raise ConvergenceError(f"period {n}: some centers did not converge")
    return [
        NewtonResult(complex(c), SolutionKind.CENTER, float(r), multiplier=0j)
        for c, r in zip(roots, residual)
    ]


def _iterate(c: complex, z: complex, d: int) -> complex:
    for _ in range(d):
        z = z * z + c
    return z


def _parent_root(c: complex, z: complex, n: int, cfg: SolverConfig) -> Tuple[complex, float]:
    """Root of a satellite component, solved as a point of its parent."""
    gaps = {d: abs(_iterate(c, z, d) - z) for d in proper_divisors(n)}
    if not gaps:
        raise ConvergenceError(f"period-{n} boundary continuation failed at the root")
    d = min(gaps, key=gaps.get)
    q = n // d
    turns = round(q * cmath.phase(multiplier(c, z, d)) / (2 * math.pi)) % q
    mu = cmath.exp(2j * math.pi * turns / q)
    logger.warning(
        "period-%d continuation stalled at the root; solving on the period-%d parent with multiplier e^(2 pi i %d/%d)",
        n,
        d,
        turns,
        q,
    )
    c, _, residual = solve_periodic_system(c, z, d, mu, cfg)
    return c, residual


def component_boundary(center: complex, n: int, t: float, cfg: SolverConfig) -> NewtonResult:
    """Boundary point of internal angle t of the period-n component at ``center``.

    Continues the solution of z_n = z, (p_c^n)'(z) = r e^(2 pi i t) from the
    center (r = 0, z = 0) to r = 1, halving the radius step on failure.
    """
    target = cmath.exp(2j * math.pi * t)
    c, z = complex(center), 0j
    r, step, residual = 0.0, cfg.boundary_step, 0.0

    while r < 1:
        ahead = min(1.0, r + step)
        try:
            c, z, residual = solve_periodic_system(c, z, n, ahead * target, cfg)
            r = ahead
        except ConvergenceError:
            step /= 2
            logger.debug("period-%d continuation: step halved to %.3g at r=%.6f", n, step, r)
            if step < cfg.min_boundary_step:
                break

    if r < 1:
        if t % 1 != 0:
            raise ConvergenceError(
                f"period-{n} boundary continuation failed at radius {r:.6f}"
            )
        c, residual = _parent_root(c, z, n, cfg)
        return NewtonResult(c, SolutionKind.BOUNDARY, residual, multiplier=1 + 0j)

    return NewtonResult(c, SolutionKind.BOUNDARY, residual, multiplier=multiplier(c, z, n))


def find_root(seed: complex, orbit_period: int, rotation: Fraction, cfg: SolverConfig) -> NewtonResult:
    """Parabolic parameter near ``seed`` whose k-cycle has multiplier e^(2 pi i r/s)."""
    mu = cmath.exp(2j * math.pi * float(rotation))
    ray_period = orbit_period * rotation.denominator
    z = nearest_return(seed, ray_period, cfg)
    c, _, residual = solve_periodic_system(seed, z, orbit_period, mu, cfg)
    return NewtonResult(c, SolutionKind.ROOT, residual, multiplier=mu)


def solve_misiurewicz(
    preperiod: int,
    period: int,
    seed: complex,
    cfg: SolverConfig,
    exact_period: bool = False,
) -> NewtonResult:
    """Parameter with c_{l+n+1} = c_{l+1} (c_0 = 0, c_1 = c) near ``seed``.

    Solutions whose critical value has a smaller preperiod are rejected.
    The period found may divide n; with ``exact_period`` it must equal n.
    """
    if preperiod < 1 or period < 1:
        raise ValueError("preperiod and period must be positive")
    first, last = preperiod + 1, preperiod + period + 1

    def fn(c: complex) -> Tuple[complex, complex]:
        z, b = 0j, 0j
        z_first, b_first = 0j, 0j
        for j in range(1, last + 1):
            b = 2 * z * b + 1
            z = z * z + c
            if j == first:
                z_first, b_first = z, b
        return z - z_first, b - b_first

    c, residual = newton_scalar(fn, complex(seed), cfg, f"Misiurewicz ({preperiod}, {period})")
    orbit = critical_orbit(c, last)
    tolerance = math.sqrt(cfg.solve_tolerance) * (1 + max(abs(x) for x in orbit))
    if abs(orbit[preperiod] - orbit[preperiod + period]) < tolerance:
        raise WrongOrbitError(
            f"solution {c:.12g} has preperiod below {preperiod}", parameter=c
        )
    found = min(
        (d for d in proper_divisors(period) + [period] if abs(orbit[first + d] - orbit[first]) < tolerance),
        default=None,
    )
    if found is None:
        raise WrongOrbitError(
            f"solution {c:.12g} does not return after {period} steps (correction {residual:.3g})",
            parameter=c,
        )
    if exact_period and found != period:
        raise WrongOrbitError(
            f"solution {c:.12g} has period {found}, not {period}", parameter=c
        )
    return NewtonResult(
        c,
        SolutionKind.MISIUREWICZ,
        residual,
        multiplier=multiplier(c, orbit[first], found),
        orbit_type=(preperiod, found),
    )
