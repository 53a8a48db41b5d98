"""Parameter-plane combinatorics of rational external angles.

Pairing of periodic angles (Lavaurs), primitivity, orbit portraits with
rotation numbers and sector widths, and Misiurewicz ray classes. All
arithmetic is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, List, Optional, Tuple

import numpy as np

from .angle import (
    Angle,
    ONE,
    ZERO,
    double,
    enumerate_exact_period,
    enumerate_preperiodic,
    orbit,
    orbit_type,
    proper_divisors,
)
from .errors import (
    InternalConsistencyError,
    MandelRaysError,
    NotPeriodicError,
    NotPreperiodicError,
)
from .kneading import (
    InternalAddress,
    KneadingSequence,
    PartitionContext,
    Symbol,
    internal_address,
    itinerary,
    kneading,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def count_parabolic(n: int) -> int:
    """Number s_n of parabolic parameters of ray period n.

    Solves sum_{k | n} s_k = 2^(n-1) recursively.
    """
    if n < 1:
        raise ValueError("period must be positive")
    return 2 ** (n - 1) - sum(count_parabolic(d) for d in proper_divisors(n))


@dataclass(frozen=True)
class RayPair:
    low: Angle
    high: Angle
    period: int

    @property
    def angles(self) -> Tuple[Angle, Angle]:
        return self.low, self.high

    def __str__(self) -> str:
        return f"({self.low}, {self.high})"


def characteristic_arc_ok(pair: RayPair) -> bool:
    """No forward image of either angle enters the open arc (low, high)."""
    low, high = pair.low.value, pair.high.value
    for start in pair.angles:
        for image in orbit(start)[1:]:
            if low < image.value < high:
                return False
    return True


def _crossing_free_partner(
    keys: List[int], start: int, partner: Dict[int, int]
) -> Optional[int]:
    """Index of the first unpaired key after ``start`` reachable without crossing.

    Walking up from the start key, a chord entered on the way must also be
    left before a candidate counts; reaching the upper end of a chord that
    encloses the start key means every further candidate would cross it.
    """
    origin = keys[start]
    depth = 0
    for index in range(start + 1, len(keys)):
        key = keys[index]
        other = partner.get(key)
        if other is None:
            if depth == 0:
                return index
        elif other > key:
            depth += 1
        elif other > origin:
            depth -= 1
        else:
            return None
    return None


def _validate_pair(pair: RayPair) -> None:
    if kneading(pair.low) != kneading(pair.high):
        raise InternalConsistencyError(
            f"pair {pair} has different kneading sequences"
        )
    if not characteristic_arc_ok(pair):
        raise InternalConsistencyError(
            f"pair {pair} violates the characteristic arc property"
        )


@lru_cache(maxsize=None)
def lavaurs_pairs(n_max: int) -> Tuple[RayPair, ...]:
    """All ray pairs of periods 1..n_max, period by period, each ascending.

    For each period the smallest unpaired angle is joined to the smallest
    unpaired angle above it whose chord crosses no chord built so far.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")

    pairs: List[RayPair] = [RayPair(ZERO, ONE, 1)]
    scale = lcm(*(2**k - 1 for k in range(1, n_max + 1)))
    # chords as integer keys over the common denominator `scale`
    partner: Dict[int, int] = {}

    for n in range(2, n_max + 1):
        by_key = {a.numerator * (scale // a.denominator): a for a in enumerate_exact_period(n)}
        keys = sorted(set(partner) | set(by_key))
        position = {key: i for i, key in enumerate(keys)}
        found = []
        for key in sorted(by_key):
            if key in partner:
                continue
            index = _crossing_free_partner(keys, position[key], partner)
            if index is None:
                raise InternalConsistencyError(
                    f"no partner for {by_key[key]} at period {n}"
                )
            other = keys[index]
            partner[key] = other
            partner[other] = key
            pair = RayPair(by_key[key], by_key[other], n)
            _validate_pair(pair)
            found.append(pair)

        expected = count_parabolic(n)
        if len(found) != expected:
            raise InternalConsistencyError(
                f"period {n}: built {len(found)} pairs, expected {expected}"
            )
        logger.debug("period %d: %d pairs", n, len(found))
        pairs.extend(found)

    return tuple(pairs)


def pairs_of_period(n: int) -> List[RayPair]:
    return [pair for pair in lavaurs_pairs(n) if pair.period == n]


def _require_periodic(theta: Angle) -> int:
    l, n = orbit_type(theta)
    if l:
        raise NotPeriodicError(f"{theta} is not periodic (preperiod {l})")
    return n


def pair_of(theta: Angle) -> RayPair:
    n = _require_periodic(theta)
    for pair in pairs_of_period(n):
        if theta in pair.angles:
            return pair
    raise InternalConsistencyError(f"{theta} is not in any pair of period {n}")


def conjugate_angle(theta: Angle) -> Angle:
    """The other angle of theta's pair; 0 and 1 are each other's partner."""
    pair = pair_of(theta)
    return pair.high if theta == pair.low else pair.low


def is_primitive(pair: RayPair) -> bool:
    """True when the two angles lie on different doubling orbits."""
    return pair.high not in orbit(pair.low)


@dataclass(frozen=True)
class PortraitCycle:
    """Angle sets at the points of one periodic orbit, in dynamical order."""

    point_angles: Tuple[Tuple[Angle, ...], ...]
    rotation: Fraction

    @property
    def orbit_period(self) -> int:
        return len(self.point_angles)

    @property
    def rays_per_point(self) -> int:
        return len(self.point_angles[0])

    @property
    def ray_period(self) -> int:
        return orbit_type(self.point_angles[0][0]).period


def portrait_cycle(theta: Angle) -> PortraitCycle:
    """Orbit portrait of the parabolic orbit where theta's ray lands.

    Rays on the orbits of the pair's two angles are grouped by their
    itinerary with respect to the partition of an angle inside the
    characteristic arc; equal itineraries mean a common landing point.
    """
    n = _require_periodic(theta)
    if n == 1:
        return PortraitCycle(((theta,),), Fraction(0))

    pair = pair_of(theta)
    rays = set(orbit(pair.low)) | set(orbit(pair.high))
    inside = Angle.from_fraction((pair.low.value + pair.high.value) / 2)
    ctx = PartitionContext(inside)

    groups: Dict[Tuple[Symbol, ...], List[Angle]] = {}
    for ray in rays:
        groups.setdefault(tuple(itinerary(ray, ctx, n)), []).append(ray)
    if any(Symbol.STAR in word for word in groups):
        raise InternalConsistencyError(f"orbit of {pair} meets the partition of {inside}")

    by_ray = {ray: tuple(sorted(group)) for group in groups.values() for ray in group}
    start = by_ray[theta]
    cycle = [start]
    while True:
        image = tuple(sorted(double(ray) for ray in cycle[-1]))
        if image == start:
            break
        if image not in by_ray.values():
            raise InternalConsistencyError(f"doubling does not map the point sets of {pair}")
        cycle.append(image)

    size = len(start)
    if len(cycle) * size != len(rays):
        raise InternalConsistencyError(f"portrait of {pair} does not cover its rays")

    first_return = {}
    for ray in start:
        image = ray
        for _ in cycle:
            image = double(image)
        first_return[ray] = image
    shift = start.index(first_return[start[0]])
    if any(first_return[start[i]] != start[(i + shift) % size] for i in range(size)):
        raise InternalConsistencyError(f"first return at {start} is not a rotation")

    return PortraitCycle(tuple(cycle), Fraction(shift, size))


@dataclass(frozen=True)
class SectorWidths:
    widths: Tuple[Fraction, ...]

    @property
    def critical_index(self) -> Optional[int]:
        """Index of the unique sector wider than 1/2, if any."""
        wide = [i for i, w in enumerate(self.widths) if w > Fraction(1, 2)]
        return wide[0] if len(wide) == 1 else None


def orbit_sectors(point_angles: Tuple[Angle, ...]) -> List[Tuple[Angle, Angle, Fraction]]:
    """Sectors (start, end, width) between circularly consecutive angles."""
    ordered = sorted(point_angles)
    if len(ordered) < 2:
        raise MandelRaysError("sectors need at least two rays")
    sectors = []
    for i, start in enumerate(ordered):
        end = ordered[(i + 1) % len(ordered)]
        width = (end.circle_value - start.circle_value) % 1
        sectors.append((start, end, width))
    return sectors


def sector_widths(point_angles: Tuple[Angle, ...]) -> SectorWidths:
    return SectorWidths(tuple(width for _, _, width in orbit_sectors(point_angles)))


@dataclass(frozen=True)
class MisiurewiczClass:
    angles: Tuple[Angle, ...]
    preperiod: int
    ray_period: int
    kneading_period: int
    kneading: KneadingSequence

    @property
    def size(self) -> int:
        return len(self.angles)


def _candidate_numerators(preperiod: int, period: int) -> np.ndarray:
    # numerators over 2^l (2^n - 1) of the angles with exact (l, n)
    denominator = 2**preperiod * (2**period - 1)
    candidates = np.arange(1, denominator, 2, dtype=np.int64)
    cycle = 2**period - 1
    for d in proper_divisors(period):
        candidates = candidates[candidates % (cycle // (2**d - 1)) != 0]
    return candidates


def _matching_itinerary(theta: Angle, candidates: np.ndarray, preperiod: int, period: int) -> np.ndarray:
    """Candidates whose itinerary under theta's partition equals theta's own."""
    base = 2**preperiod * (2**period - 1)
    modulus = 2 * base
    length = preperiod + 2 * period
    target = np.array(
        [s is Symbol.ONE for s in itinerary(theta, PartitionContext(theta), length)]
    )
    # boundary theta/2 and (theta+1)/2 in units of 1/modulus
    lower = theta.numerator * (base // theta.denominator)
    upper = lower + base

    values = 2 * candidates
    keep = np.ones(len(candidates), dtype=bool)
    for step in range(length):
        keep &= ((values > lower) & (values < upper)) == target[step]
        values = (2 * values) % modulus
    return candidates[keep]


def _build_class(theta: Angle, members: np.ndarray, preperiod: int, period: int) -> MisiurewiczClass:
    base = 2**preperiod * (2**period - 1)
    angles = tuple(Angle.of(int(a), base) for a in members)
    sequence = kneading(theta)
    k = sequence.period
    if theta not in angles:
        raise InternalConsistencyError(f"{theta} missing from its own class")
    ratio = period // k
    if ratio > 1 and len(angles) != ratio:
        raise InternalConsistencyError(
            f"class of {theta} has {len(angles)} rays, expected n/k = {ratio}"
        )
    if ratio == 1 and len(angles) > 2:
        raise InternalConsistencyError(f"class of {theta} has {len(angles)} rays, expected 1 or 2")
    return MisiurewiczClass(angles, preperiod, period, k, sequence)


def misiurewicz_class(theta: Angle, max_enumeration: Optional[int] = None) -> MisiurewiczClass:
    """All preperiodic angles whose parameter rays land with theta's ray."""
    l, n = orbit_type(theta)
    if l == 0:
        raise NotPreperiodicError(f"{theta} is periodic, not strictly preperiodic")
    if max_enumeration is not None and l + n > max_enumeration:
        raise MandelRaysError(
            f"preperiod + period = {l + n} exceeds the enumeration bound {max_enumeration}"
        )
    members = _matching_itinerary(theta, _candidate_numerators(l, n), l, n)
    return _build_class(theta, members, l, n)


def misiurewicz_classes(preperiod: int, period: int) -> List[MisiurewiczClass]:
    """Partition of all angles of exact (l, n) into Misiurewicz classes."""
    candidates = _candidate_numerators(preperiod, period)
    classes = []
    seen = set()
    for theta in enumerate_preperiodic(preperiod, period):
        if theta in seen:
            continue
        members = _matching_itinerary(theta, candidates, preperiod, period)
        found = _build_class(theta, members, preperiod, period)
        seen.update(found.angles)
        classes.append(found)
    return classes


@dataclass(frozen=True)
class PairRecord:
    """One row of the exported pair table."""

    period: int
    low: Angle
    high: Angle
    kneading: KneadingSequence
    address: InternalAddress
    primitive: bool


def pair_table(n_max: int, period: Optional[int] = None) -> List[PairRecord]:
    """Pair records for all periods up to n_max, or for a single period."""
    rows = []
    for pair in lavaurs_pairs(n_max):
        if period is not None and pair.period != period:
            continue
        sequence = kneading(pair.low)
        rows.append(
            PairRecord(
                pair.period,
                pair.low,
                pair.high,
                sequence,
                internal_address(sequence),
                is_primitive(pair),
            )
        )
    return rows
