"""Tests for kneading sequences and internal addresses."""

import math

import pytest

from mandelrays.angle import (
    Angle,
    ONE,
    ZERO,
    enumerate_exact_period,
    enumerate_preperiodic,
    orbit_type,
    parse_angle,
)
from mandelrays.combinat import pairs_of_period
from mandelrays.errors import MandelRaysError, NotPeriodicError
from mandelrays.kneading import (
    InternalAddress,
    KneadingSequence,
    PartitionContext,
    Symbol,
    angle_address,
    internal_address,
    itinerary,
    kneading,
    limit_kneadings,
    pair_limits_match,
    parse_kneading,
)

O, I, S = Symbol.ZERO, Symbol.ONE, Symbol.STAR


class TestKneadingSequence:
    def test_canonical_form(self):
        assert KneadingSequence.of([I], [I, I]) == KneadingSequence.of([], [I])
        assert KneadingSequence.of([O, I], [O, I]) == KneadingSequence.of([], [O, I])
        assert str(KneadingSequence.of([I, O, I], [O, I])) == "|10"

    def test_symbol_positions(self):
        sequence = parse_kneading("100|101")
        assert sequence.prefix(7) == (I, O, O, I, O, I, I)
        with pytest.raises(IndexError):
            sequence.symbol(0)

    def test_star_periodic(self):
        assert parse_kneading("|110*").is_star_periodic
        assert not parse_kneading("1|0").is_star_periodic
        assert parse_kneading("|1*").replace_star(I) == parse_kneading("|1")

    @pytest.mark.parametrize("text", ["110", "|", "12|1", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(MandelRaysError):
            parse_kneading(text)


class TestItinerary:
    def test_boundary_labels(self):
        ctx = PartitionContext(Angle(9, 56))
        assert itinerary(Angle(2, 7), ctx, 3) == [I, I, I]
        assert itinerary(Angle(2, 3), PartitionContext(Angle(1, 3)), 1) == [S]

    def test_zero_is_never_in_the_one_arc(self):
        for theta in enumerate_exact_period(5):
            assert PartitionContext(theta).label(ZERO.value) in (O, S)

    def test_length_must_be_positive(self):
        with pytest.raises(ValueError):
            itinerary(Angle(1, 3), PartitionContext(Angle(1, 3)), 0)


class TestKneading:
    @pytest.mark.parametrize(
        "theta, expected",
        [
            ("9/56", "110|1"),
            ("25/56", "100|101"),
            ("1/2", "1|0"),
            ("1/3", "|1*"),
            ("1/7", "|11*"),
            ("1/5", "|110*"),
            ("0", "|*"),
        ],
    )
    def test_kneading(self, theta, expected):
        assert str(kneading(parse_angle(theta))) == expected

    def test_periodic_angles_have_star_periodic_kneading(self):
        for n in range(2, 9):
            for theta in enumerate_exact_period(n):
                sequence = kneading(theta)
                assert sequence.is_star_periodic
                assert sequence.period == n

    def test_first_symbol_is_one(self):
        angles = [theta for n in range(2, 9) for theta in enumerate_exact_period(n)]
        angles += [theta for total in range(2, 9) for l in range(1, total) for theta in enumerate_preperiodic(l, total - l)]
        for theta in angles:
            assert kneading(theta).symbol(1) is I, theta

    def test_symbols_change_only_across_lower_periods(self):
        # position m changes only at angles whose period divides m
        angles = sorted(theta for n in range(2, 8) for theta in enumerate_exact_period(n))
        period = {theta: orbit_type(theta).period for theta in angles}
        sequences = {theta: kneading(theta) for theta in angles}
        compared = 0
        for i, first in enumerate(angles):
            lowest = math.inf
            for second in angles[i + 1 :]:
                p = min(period[first], period[second])
                if lowest >= p:
                    assert sequences[first].prefix(p - 1) == sequences[second].prefix(p - 1), (first, second)
                    compared += 1
                lowest = min(lowest, period[second])
        assert compared >= len(angles) - 1

    def test_preperiodic_angles_have_no_star(self):
        for l in range(1, 5):
            for n in range(1, 11 - l):
                for theta in enumerate_preperiodic(l, n):
                    sequence = kneading(theta)
                    assert Symbol.STAR not in sequence.preperiodic + sequence.periodic
                    assert sequence.preperiod == l
                    assert n % sequence.period == 0


class TestLimitKneadings:
    def test_one_third(self):
        minus, plus = limit_kneadings(Angle(1, 3))
        assert str(minus) == "|1"
        assert str(plus) == "|10"

    def test_one_seventh(self):
        minus, plus = limit_kneadings(Angle(1, 7))
        assert {str(minus), str(plus)} == {"|1", "|110"}

    def test_limits_replace_the_star(self):
        for theta in enumerate_exact_period(6):
            sequence = kneading(theta)
            assert set(limit_kneadings(theta)) <= {sequence.replace_star(O), sequence.replace_star(I)}

    def test_zero_and_one(self):
        assert str(limit_kneadings(ZERO)[1]) == "|1"
        assert str(limit_kneadings(ONE)[0]) == "|1"

    def test_needs_periodic_angle(self):
        with pytest.raises(NotPeriodicError):
            limit_kneadings(Angle(1, 2))

    def test_pairs_have_swapped_limits(self):
        for n in range(2, 9):
            for pair in pairs_of_period(n):
                assert pair_limits_match(pair.low, pair.high)
        assert not pair_limits_match(Angle(1, 7), Angle(3, 7))


class TestInternalAddress:
    @pytest.mark.parametrize(
        "theta, expected",
        [("1/3", "1-2"), ("1/7", "1-3"), ("1/5", "1-3-4"), ("1/15", "1-4"), ("0", "1")],
    )
    def test_address(self, theta, expected):
        assert str(angle_address(parse_angle(theta))) == expected

    def test_satellite_of_period_two(self):
        # 6/15, 9/15 bound the period-4 bulb on the period-2 component
        assert str(angle_address(Angle(2, 5))) == "1-2-4"

    def test_address_ends_at_the_period(self):
        for n in range(1, 9):
            for theta in enumerate_exact_period(n):
                assert angle_address(theta).entries[-1] == n

    def test_needs_star_periodic(self):
        with pytest.raises(NotPeriodicError):
            internal_address(parse_kneading("110|1"))
        with pytest.raises(NotPeriodicError):
            angle_address(Angle(9, 56))

    def test_validation(self):
        with pytest.raises(MandelRaysError):
            InternalAddress((2, 3))
        with pytest.raises(MandelRaysError):
            InternalAddress((1, 3, 3))
        assert str(InternalAddress((1, 3, 4))) == "1-3-4"
