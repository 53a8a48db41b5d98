"""Cross-checks of the combinatorics against traced rays and solved parameters.

Every pair of periodic angles must land at a common parabolic parameter,
which must be the root of one of the hyperbolic components found from
the centers; every Misiurewicz class must land at one parameter whose
critical orbit has the predicted type. In the dynamic plane of the
landing parameter the same angles must land together on the parabolic
orbit, respectively at the critical value, and the neighbouring angles
of a Misiurewicz class must land elsewhere.
"""

from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..angle import Angle, enumerate_preperiodic
from ..combinat import (
    MisiurewiczClass,
    RayPair,
    count_parabolic,
    lavaurs_pairs,
    misiurewicz_classes,
    portrait_cycle,
)
from ..config import SolverConfig
from ..errors import ConvergenceError
from ..utils import format_complex
from .dynamics import multiplier, periodic_point, preperiodic_point
from .rays import trace_dynamic_ray, trace_parameter_ray
from .solvers import component_boundary, find_centers, solve_misiurewicz
from .types import CheckKind, CheckRecord, NewtonResult, PairReport, RayTrace, TraceStatus

logger = logging.getLogger(__name__)

# (parameter of the Julia set, angle); None selects the parameter plane
Job = Tuple[Optional[complex], Angle]
ClassSolution = Union[NewtonResult, ConvergenceError, None]


def _landing(trace: RayTrace) -> Optional[complex]:
    return trace.landing if trace.status is TraceStatus.LANDED else None


def verify_pair(
    first: Angle,
    second: Angle,
    cfg: SolverConfig,
    traces: Optional[Dict[Angle, RayTrace]] = None,
) -> PairReport:
    traces = traces if traces is not None else {}
    for theta in (first, second):
        if theta not in traces:
            traces[theta] = trace_parameter_ray(theta, cfg)
    ends = traces[first].endpoint, traces[second].endpoint
    raw = abs(ends[0] - ends[1]) if None not in ends else math.inf
    one, two = _landing(traces[first]), _landing(traces[second])
    if one is None or two is None:
        return PairReport(first, second, False, math.inf, one if two is None else two, raw)
    distance = abs(one - two)
    return PairReport(first, second, distance < cfg.agreement_tolerance, distance, (one + two) / 2, raw)


def _trace_job(job: Job, cfg: SolverConfig) -> RayTrace:
    c, theta = job
    if c is None:
        return trace_parameter_ray(theta, cfg)
    return trace_dynamic_ray(c, theta, cfg)


def _run(jobs: Sequence[Job], cfg: SolverConfig, workers: int) -> List[RayTrace]:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_trace_job, jobs, repeat(cfg), chunksize=8))
    return [_trace_job(job, cfg) for job in jobs]


def trace_many(
    angles: Iterable[Angle],
    cfg: SolverConfig,
    workers: int = 1,
    c: Optional[complex] = None,
) -> Dict[Angle, RayTrace]:
    """Parameter rays, or dynamic rays of z^2 + c when c is given, keyed by angle.

    The result does not depend on the number of workers.
    """
    angles = list(angles)
    return dict(zip(angles, _run([(c, theta) for theta in angles], cfg, workers)))


def _record(kind: CheckKind, passed: bool, **fields) -> CheckRecord:
    return CheckRecord(kind, passed, tuple((key, str(value)) for key, value in fields.items()))


def _point(value: Optional[complex]) -> str:
    return "none" if value is None else format_complex(value)


def _nearest(point: complex, roots: Sequence[complex]) -> Tuple[Optional[int], float]:
    if not roots:
        return None, math.inf
    gaps = [abs(point - root) for root in roots]
    index = min(range(len(gaps)), key=gaps.__getitem__)
    return index, gaps[index]


def _solved_landing(trace: RayTrace, solve, cfg: SolverConfig) -> Optional[complex]:
    """Landing of a dynamic trace polished by ``solve``, kept only inside the capture radius."""
    seed = trace.endpoint
    if trace.status is not TraceStatus.LANDED or seed is None:
        return None
    try:
        z = solve(seed)
    except ConvergenceError as e:
        logger.debug("dynamic ray %s at %s: %s", trace.angle, _point(trace.c), e)
        return None
    return z if abs(z - seed) <= cfg.capture_radius else None


def _root_record(pair: RayPair, report: PairReport, traces: Dict[Angle, RayTrace], roots, cfg) -> CheckRecord:
    if report.landing is None:
        return _record(CheckKind.ROOT, False, low=pair.low, high=pair.high, distance="inf")
    index, gap = _nearest(report.landing, roots)
    ends = [traces[theta].endpoint for theta in (pair.low, pair.high)]
    # the root closest to each unrefined endpoint must be the one the refined landing hit
    nearest = index is not None and all(end is not None and _nearest(end, roots)[0] == index for end in ends)
    raw = max(abs(end - roots[index]) for end in ends) if nearest else math.inf
    return _record(
        CheckKind.ROOT,
        gap < cfg.agreement_tolerance and nearest and raw <= cfg.capture_radius,
        low=pair.low,
        high=pair.high,
        distance=f"{gap:.3g}",
        raw_distance=f"{raw:.3g}",
        nearest="true" if nearest else "false",
    )


def _dynamic_pair_record(
    pair: RayPair, landing: Optional[complex], dynamic: Dict[Job, RayTrace], cfg: SolverConfig
) -> CheckRecord:
    if landing is None:
        return _record(CheckKind.DYNAMIC_PAIR, False, low=pair.low, high=pair.high, reason="no-parameter")
    portrait = portrait_cycle(pair.low)
    k = portrait.orbit_period
    expected = cmath.exp(2j * math.pi * float(portrait.rotation))
    traces = [dynamic[(landing, theta)] for theta in (pair.low, pair.high)]
    points = [
        _solved_landing(trace, lambda seed: periodic_point(landing, seed, k, cfg)[0], cfg) for trace in traces
    ]
    if None in points:
        return _record(
            CheckKind.DYNAMIC_PAIR,
            False,
            low=pair.low,
            high=pair.high,
            parameter=_point(landing),
            reason="ray-not-landed",
        )
    distance = abs(points[0] - points[1])
    found = multiplier(landing, points[0], k)
    return _record(
        CheckKind.DYNAMIC_PAIR,
        distance < cfg.agreement_tolerance and abs(found - expected) < cfg.agreement_tolerance,
        low=pair.low,
        high=pair.high,
        parameter=_point(landing),
        point=_point(points[0]),
        distance=f"{distance:.3g}",
        raw_distance=f"{abs(traces[0].endpoint - traces[1].endpoint):.3g}",
        orbit_period=k,
        multiplier=format_complex(found, 6),
        expected=format_complex(expected, 6),
    )


def _check_period(
    n: int,
    pairs: Sequence[RayPair],
    reports: Dict[Tuple[Angle, Angle], PairReport],
    traces: Dict[Angle, RayTrace],
    dynamic: Dict[Job, RayTrace],
    cfg: SolverConfig,
) -> List[CheckRecord]:
    records = []
    expected = count_parabolic(n)
    roots: List[complex] = []
    try:
        centers = find_centers(n, cfg)
    except ConvergenceError as e:
        records.append(_record(CheckKind.COUNT, False, period=n, found=e.found, expected=expected, pairs=len(pairs)))
        centers = []
    else:
        records.append(
            _record(
                CheckKind.COUNT,
                len(centers) == expected == len(pairs),
                period=n,
                found=len(centers),
                expected=expected,
                pairs=len(pairs),
            )
        )
    for center in centers:
        try:
            roots.append(component_boundary(center.parameter, n, 0.0, cfg).parameter)
        except ConvergenceError as e:
            logger.warning("no root for the period-%d center %s: %s", n, _point(center.parameter), e)

    for pair in pairs:
        report = reports[(pair.low, pair.high)]
        records.append(
            _record(
                CheckKind.PAIR,
                report.agree,
                low=pair.low,
                high=pair.high,
                distance=f"{report.distance:.3g}",
                raw_distance=f"{report.raw_distance:.3g}",
                landing=_point(report.landing),
            )
        )
        records.append(_root_record(pair, report, traces, roots, cfg))
        records.append(_dynamic_pair_record(pair, report.landing, dynamic, cfg))
    return records


def _solve_class(cls: MisiurewiczClass, traces: Dict[Angle, RayTrace], cfg: SolverConfig) -> ClassSolution:
    seed = _landing(traces[cls.angles[0]])
    if seed is None:
        return None
    try:
        return solve_misiurewicz(cls.preperiod, cls.ray_period, seed, cfg)
    except ConvergenceError as e:
        return e


def _neighbours(cls: MisiurewiczClass) -> List[Angle]:
    """Angles of the same (l, n) next to a class member that are not in the class."""
    everyone = enumerate_preperiodic(cls.preperiod, cls.ray_period)
    members = set(cls.angles)
    picked = set()
    for i, theta in enumerate(everyone):
        if theta in members:
            for j in (i - 1, (i + 1) % len(everyone)):
                if everyone[j] not in members:
                    picked.add(everyone[j])
    return sorted(picked)


def _dynamic_class_record(
    cls: MisiurewiczClass, parameter: complex, dynamic: Dict[Job, RayTrace], cfg: SolverConfig
) -> CheckRecord:
    names = ",".join(str(theta) for theta in cls.angles)
    l, n = cls.preperiod, cls.ray_period

    def land(theta: Angle) -> Optional[complex]:
        return _solved_landing(
            dynamic[(parameter, theta)], lambda seed: preperiodic_point(parameter, seed, l, n, cfg)[0], cfg
        )

    points = [land(theta) for theta in cls.angles]
    others = _neighbours(cls)
    outside = [land(theta) for theta in others]
    if None in points or None in outside:
        return _record(
            CheckKind.DYNAMIC_CLASS, False, angles=names, parameter=_point(parameter), reason="ray-not-landed"
        )
    # the critical value of z^2 + c is c itself
    distance = max(abs(z - parameter) for z in points)
    separation = min((abs(z - parameter) for z in outside), default=math.inf)
    return _record(
        CheckKind.DYNAMIC_CLASS,
        distance < cfg.agreement_tolerance and separation > cfg.agreement_tolerance,
        angles=names,
        parameter=_point(parameter),
        distance=f"{distance:.3g}",
        outsiders=len(others),
        separation=f"{separation:.3g}",
    )


def _check_class(
    cls: MisiurewiczClass,
    solution: ClassSolution,
    traces: Dict[Angle, RayTrace],
    dynamic: Dict[Job, RayTrace],
    cfg: SolverConfig,
) -> List[CheckRecord]:
    landings = [_landing(traces[theta]) for theta in cls.angles]
    names = ",".join(str(theta) for theta in cls.angles)
    if any(point is None for point in landings):
        return [
            _record(CheckKind.CLASS, False, angles=names, spread="inf"),
            _record(CheckKind.MISIUREWICZ, False, angles=names, reason="ray-not-landed"),
            _record(CheckKind.DYNAMIC_CLASS, False, angles=names, reason="ray-not-landed"),
        ]
    spread = max(abs(point - landings[0]) for point in landings)
    records = [
        _record(CheckKind.CLASS, spread < cfg.agreement_tolerance, angles=names, spread=f"{spread:.3g}")
    ]
    if not isinstance(solution, NewtonResult):
        reason = type(solution).__name__
        records.append(_record(CheckKind.MISIUREWICZ, False, angles=names, reason=reason))
        records.append(_record(CheckKind.DYNAMIC_CLASS, False, angles=names, reason=reason))
        return records
    predicted = (cls.preperiod, cls.kneading_period)
    records.append(
        _record(
            CheckKind.MISIUREWICZ,
            solution.orbit_type == predicted and solution.residual < cfg.solve_tolerance,
            angles=names,
            parameter=_point(solution.parameter),
            preperiod=solution.orbit_type[0],
            period=solution.orbit_type[1],
            expected=f"{predicted[0]},{predicted[1]}",
            residual=f"{solution.residual:.3g}",
        )
    )
    records.append(_dynamic_class_record(cls, solution.parameter, dynamic, cfg))
    return records


def verify_structure(
    max_period: int,
    cfg: SolverConfig,
    misiurewicz_bound: int = 8,
    workers: int = 1,
) -> List[CheckRecord]:
    """Run all checks for periods up to ``max_period`` and Misiurewicz
    classes with preperiod + period up to ``misiurewicz_bound``.

    Records come in a fixed order: per period a COUNT record followed by
    PAIR, ROOT and DYNAMIC_PAIR records per pair, then CLASS, MISIUREWICZ
    and DYNAMIC_CLASS records per class.
    """
    pairs = lavaurs_pairs(max_period)
    classes = [
        cls
        for total in range(2, misiurewicz_bound + 1)
        for preperiod in range(1, total)
        for cls in misiurewicz_classes(preperiod, total - preperiod)
    ]
    angles = sorted({theta for pair in pairs for theta in pair.angles} | {theta for cls in classes for theta in cls.angles})
    logger.info("tracing %d parameter rays with %d worker(s)", len(angles), workers)
    traces = trace_many(angles, cfg, workers)

    reports = {(pair.low, pair.high): verify_pair(pair.low, pair.high, cfg, traces) for pair in pairs}
    solutions = [_solve_class(cls, traces, cfg) for cls in classes]

    jobs: List[Job] = []
    for report in reports.values():
        if report.landing is not None:
            jobs.extend((report.landing, theta) for theta in (report.low, report.high))
    for cls, solution in zip(classes, solutions):
        if isinstance(solution, NewtonResult):
            jobs.extend((solution.parameter, theta) for theta in list(cls.angles) + _neighbours(cls))
    jobs = list(dict.fromkeys(jobs))
    logger.info("tracing %d dynamic rays with %d worker(s)", len(jobs), workers)
    # dynamic landings are solved here against the known orbit type
    raw_cfg = cfg.model_copy(update={"refine_landing": False})
    dynamic = dict(zip(jobs, _run(jobs, raw_cfg, workers)))

    records: List[CheckRecord] = []
    for n in range(1, max_period + 1):
        period_pairs = [pair for pair in pairs if pair.period == n]
        records.extend(_check_period(n, period_pairs, reports, traces, dynamic, cfg))
    for cls, solution in zip(classes, solutions):
        records.extend(_check_class(cls, solution, traces, dynamic, cfg))
    failed = sum(not record.passed for record in records)
    logger.info("%d checks, %d failed", len(records), failed)
    return records
