"""Exact rational angles on the circle under angle doubling."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import List, NamedTuple, Tuple

from .errors import AngleParseError

_DECIMAL_RE = re.compile(r"^(\d+)\s*/\s*(\d+)$")
_BINARY_RE = re.compile(r"^0\.([01]*):([01]+)$")


@total_ordering
@dataclass(frozen=True, repr=False)
class Angle:
    """Reduced fraction in [0, 1); ``ONE`` is the only angle equal to 1.

    Use :meth:`of` to build angles; the constructor does not reduce.
    """

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise AngleParseError("denominator must be positive")
        if gcd(self.numerator, self.denominator) != 1:
            raise AngleParseError(
                f"{self.numerator}/{self.denominator} is not in lowest terms"
            )
        in_range = 0 <= self.numerator < self.denominator
        if not in_range and (self.numerator, self.denominator) != (1, 1):
            raise AngleParseError(
                f"{self.numerator}/{self.denominator} is outside [0, 1]"
            )

    @classmethod
    def of(cls, numerator: int, denominator: int) -> "Angle":
        if denominator == 0:
            raise AngleParseError("denominator must not be zero")
        if denominator < 0 or numerator < 0 or numerator > denominator:
            raise AngleParseError(f"{numerator}/{denominator} is outside [0, 1]")
        if numerator == denominator:
            return ONE
        g = gcd(numerator, denominator)
        return cls(numerator // g, denominator // g)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Angle":
        return cls.of(value.numerator, value.denominator)

    @property
    def is_one(self) -> bool:
        return self.numerator == self.denominator

    @property
    def value(self) -> Fraction:
        """Exact value in [0, 1]."""
        return Fraction(self.numerator, self.denominator)

    @property
    def circle_value(self) -> Fraction:
        """Value in [0, 1), identifying 1 with 0."""
        return Fraction(0) if self.is_one else self.value

    def __lt__(self, other: "Angle") -> bool:
        if not isinstance(other, Angle):
            return NotImplemented
        return self.numerator * other.denominator < other.numerator * self.denominator

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self) -> str:
        return f"Angle({self})"


ZERO = Angle(0, 1)
ONE = Angle(1, 1)


class OrbitType(NamedTuple):
    preperiod: int
    period: int

    @property
    def is_periodic(self) -> bool:
        return self.preperiod == 0


def double(theta: Angle) -> Angle:
    """Angle doubling mod 1; ONE stays ONE."""
    if theta.is_one:
        return ONE
    return Angle.of((2 * theta.numerator) % theta.denominator, theta.denominator)


def halves(theta: Angle) -> Tuple[Fraction, Fraction]:
    """The two preimages theta/2 < (theta+1)/2 under doubling."""
    base = theta.circle_value
    return base / 2, (base + 1) / 2


def _two_adic_split(q: int) -> Tuple[int, int]:
    l = 0
    while q % 2 == 0:
        q //= 2
        l += 1
    return l, q


def order_of_two(m: int) -> int:
    """Multiplicative order of 2 modulo the odd number m (1 for m == 1)."""
    if m == 1:
        return 1
    k, x = 1, 2 % m
    while x != 1:
        x = (2 * x) % m
        k += 1
    return k


def orbit_type(theta: Angle) -> OrbitType:
    if theta.is_one:
        return OrbitType(0, 1)
    l, m = _two_adic_split(theta.denominator)
    return OrbitType(l, order_of_two(m))


def orbit(theta: Angle) -> List[Angle]:
    """Distinct angles of the forward orbit, starting with theta."""
    l, n = orbit_type(theta)
    points = [theta]
    for _ in range(l + n - 1):
        points.append(double(points[-1]))
    return points


def proper_divisors(n: int) -> List[int]:
    return [d for d in range(1, n) if n % d == 0]


def _period_moduli(n: int) -> List[int]:
    # a/(2^n - 1) has period dividing d iff (2^n - 1)/(2^d - 1) divides a
    big = 2**n - 1
    return [big // (2**d - 1) for d in proper_divisors(n)]


def enumerate_exact_period(n: int) -> List[Angle]:
    """All angles in [0, 1] of exact period n, ascending (0 and 1 for n = 1)."""
    if n < 1:
        raise ValueError("period must be positive")
    if n == 1:
        return [ZERO, ONE]
    big = 2**n - 1
    moduli = _period_moduli(n)
    return [Angle.of(a, big) for a in range(1, big) if all(a % m for m in moduli)]


def enumerate_preperiodic(preperiod: int, period: int) -> List[Angle]:
    """All angles of exact preperiod l >= 1 and exact period n, ascending."""
    if preperiod < 1 or period < 1:
        raise ValueError("preperiod and period must be positive")
    denominator = 2**preperiod * (2**period - 1)
    moduli = _period_moduli(period)
    # odd numerators keep the full power of two in the reduced denominator
    return [
        Angle.of(a, denominator)
        for a in range(1, denominator, 2)
        if all(a % m for m in moduli)
    ]


def parse_angle(text: str) -> Angle:
    """Parse ``p/q``, ``0``, ``1`` or the binary form ``0.u:v``."""
    raw = text.strip()
    if raw in ("0", "1"):
        return Angle.of(int(raw), 1)

    match = _DECIMAL_RE.match(raw)
    if match:
        p, q = int(match.group(1)), int(match.group(2))
        if q == 0:
            raise AngleParseError(f"'{text}': denominator must not be zero")
        if p > q:
            raise AngleParseError(f"'{text}' is outside [0, 1]")
        return Angle.of(p, q)

    match = _BINARY_RE.match(raw)
    if match:
        head, block = match.group(1), match.group(2)
        u = int(head, 2) if head else 0
        v = int(block, 2)
        cycle = 2 ** len(block) - 1
        return Angle.of(u * cycle + v, 2 ** len(head) * cycle)

    raise AngleParseError(
        f"'{text}' is not an angle (expected p/q or 0.<preperiod>:<period>)"
    )


def format_binary(theta: Angle) -> str:
    """Binary expansion ``0.u:v`` with u the preperiodic and v the periodic bits."""
    if theta.is_one:
        return "0.:1"
    l, n = orbit_type(theta)
    scaled = theta.value * 2**l
    head = int(scaled)
    block = (scaled - head) * (2**n - 1)
    head_bits = format(head, f"0{l}b") if l else ""
    return f"0.{head_bits}:{format(int(block), f'0{n}b')}"
