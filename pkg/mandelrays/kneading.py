"""Kneading sequences, itineraries and internal addresses of angles."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Tuple

from .angle import Angle, halves, orbit_type
from .errors import MandelRaysError, NotPeriodicError


class Symbol(Enum):
    ZERO = "0"
    ONE = "1"
    STAR = "*"

    def __str__(self) -> str:
        return self.value


Word = Tuple[Symbol, ...]


def _primitive_root(word: Word) -> Word:
    size = len(word)
    for step in range(1, size + 1):
        if size % step == 0 and word == word[:step] * (size // step):
            return word[:step]
    return word


@dataclass(frozen=True)
class KneadingSequence:
    """Eventually periodic word ``preperiodic + periodic^inf`` in canonical form.

    Build through :meth:`of`, which shortens the period to its primitive root
    and folds the preperiod into the period as far as possible. Canonical
    forms make structural equality the same as sequence equality.
    """

    preperiodic: Word
    periodic: Word

    @classmethod
    def of(cls, preperiodic: Sequence[Symbol], periodic: Sequence[Symbol]) -> "KneadingSequence":
        if not periodic:
            raise MandelRaysError("periodic part must not be empty")
        head = tuple(preperiodic)
        block = _primitive_root(tuple(periodic))
        while head and head[-1] == block[-1]:
            head = head[:-1]
            block = block[-1:] + block[:-1]
        return cls(head, block)

    def symbol(self, position: int) -> Symbol:
        """Symbol at a 1-based position."""
        if position < 1:
            raise IndexError("positions start at 1")
        if position <= len(self.preperiodic):
            return self.preperiodic[position - 1]
        offset = (position - len(self.preperiodic) - 1) % len(self.periodic)
        return self.periodic[offset]

    def prefix(self, length: int) -> Word:
        return tuple(self.symbol(k) for k in range(1, length + 1))

    @property
    def preperiod(self) -> int:
        return len(self.preperiodic)

    @property
    def period(self) -> int:
        return len(self.periodic)

    @property
    def is_star_periodic(self) -> bool:
        return (
            not self.preperiodic
            and self.periodic[-1] is Symbol.STAR
            and Symbol.STAR not in self.periodic[:-1]
        )

    def replace_star(self, symbol: Symbol) -> "KneadingSequence":
        swap = lambda s: symbol if s is Symbol.STAR else s  # noqa: E731
        return KneadingSequence.of(
            [swap(s) for s in self.preperiodic], [swap(s) for s in self.periodic]
        )

    def __str__(self) -> str:
        return "".join(map(str, self.preperiodic)) + "|" + "".join(map(str, self.periodic))


def parse_kneading(text: str) -> KneadingSequence:
    """Inverse of ``str(KneadingSequence)``."""
    head, sep, block = text.strip().partition("|")
    if not sep or not block:
        raise MandelRaysError(f"'{text}' is not a kneading sequence (expected pre|period)")
    try:
        return KneadingSequence.of(
            [Symbol(ch) for ch in head], [Symbol(ch) for ch in block]
        )
    except ValueError as e:
        raise MandelRaysError(f"'{text}' contains symbols outside 0, 1, *") from e


@dataclass(frozen=True)
class PartitionContext:
    """Circle cut at the two preimages of ``base_angle``."""

    base_angle: Angle

    @property
    def boundary(self) -> Tuple[Fraction, Fraction]:
        return halves(self.base_angle)

    def label(self, value: Fraction) -> Symbol:
        lower, upper = self.boundary
        if value == lower or value == upper:
            return Symbol.STAR
        # the arc between the halves never contains 0
        if lower < value < upper:
            return Symbol.ONE
        return Symbol.ZERO


def _itinerary_values(value: Fraction, ctx: PartitionContext, length: int) -> List[Symbol]:
    symbols = []
    for _ in range(length):
        symbols.append(ctx.label(value))
        value = (2 * value) % 1
    return symbols


def itinerary(alpha: Angle, ctx: PartitionContext, length: int) -> List[Symbol]:
    """Labels of alpha, 2 alpha, 4 alpha, ... with respect to ``ctx``."""
    if length < 1:
        raise ValueError("length must be positive")
    return _itinerary_values(alpha.circle_value, ctx, length)


def kneading(theta: Angle) -> KneadingSequence:
    l, n = orbit_type(theta)
    word = itinerary(theta, PartitionContext(theta), l + n)
    return KneadingSequence.of(word[:l], word[l:])


def limit_kneadings(theta: Angle) -> Tuple[KneadingSequence, KneadingSequence]:
    """One-sided limits (K-, K+) of the kneading sequence at a periodic angle.

    Evaluated exactly at theta -/+ eps, where eps is below every gap between
    an orbit point and the partition boundary, so only the star flips.
    """
    l, n = orbit_type(theta)
    if l:
        raise NotPeriodicError(f"{theta} is not periodic (preperiod {l})")
    eps = Fraction(1, 2 ** (n + 2) * theta.denominator)
    below = (theta.value - eps) % 1
    above = (theta.circle_value + eps) % 1

    def limit(value: Fraction) -> KneadingSequence:
        ctx = PartitionContext(Angle.from_fraction(value))
        return KneadingSequence.of((), _itinerary_values(value, ctx, n))

    return limit(below), limit(above)


def pair_limits_match(first: Angle, second: Angle) -> bool:
    """Co-landing periodic rays satisfy K-(first) = K+(second) and vice versa."""
    minus_1, plus_1 = limit_kneadings(first)
    minus_2, plus_2 = limit_kneadings(second)
    return minus_1 == plus_2 and plus_1 == minus_2


@dataclass(frozen=True)
class InternalAddress:
    entries: Tuple[int, ...]

    def __post_init__(self):
        if not self.entries or self.entries[0] != 1:
            raise MandelRaysError("internal address must start with 1")
        if any(a >= b for a, b in zip(self.entries, self.entries[1:])):
            raise MandelRaysError("internal address must be strictly increasing")

    def __str__(self) -> str:
        return "-".join(map(str, self.entries))


def internal_address(sequence: KneadingSequence) -> InternalAddress:
    """Address 1, rho(1), rho(rho(1)), ... of a star-periodic kneading sequence.

    rho(m) is the first position k > m where the sequence disagrees with its
    shift by m; the star disagrees with everything.
    """
    if not sequence.is_star_periodic:
        raise NotPeriodicError(f"{sequence} is not *-periodic")
    n = sequence.period

    def rho(m: int) -> int:
        k = m + 1
        while k < n and sequence.symbol(k) == sequence.symbol(k - m):
            k += 1
        return k

    entries = [1]
    while entries[-1] < n:
        entries.append(rho(entries[-1]))
    return InternalAddress(tuple(entries))


def angle_address(theta: Angle) -> InternalAddress:
    l, _ = orbit_type(theta)
    if l:
        raise NotPeriodicError(f"{theta} is not periodic (preperiod {l})")
    return internal_address(kneading(theta))


__all__ = [
    "Symbol",
    "KneadingSequence",
    "PartitionContext",
    "InternalAddress",
    "itinerary",
    "kneading",
    "limit_kneadings",
    "pair_limits_match",
    "internal_address",
    "angle_address",
    "parse_kneading",
]
