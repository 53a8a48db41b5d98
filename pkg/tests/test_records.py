"""Tests for the pair table and verification record formats."""

import pytest

from mandelrays.angle import Angle
from mandelrays.artifactio import (
    format_check_record,
    format_pair_record,
    parse_check_record,
    parse_pair_record,
    read_pair_table,
    write_pair_table,
)
from mandelrays.artifactio.records import PAIR_HEADER
from mandelrays.combinat import pair_table
from mandelrays.errors import ArtifactIOError
from mandelrays.numerics import CheckKind, CheckRecord


class TestPairRecords:
    def test_format(self):
        (row,) = pair_table(2, period=2)
        assert format_pair_record(row) == "2 1/3 2/3 |1* 1-2 false"
        assert format_pair_record(pair_table(1)[0]) == "1 0 1 |* 1 true"

    def test_parse(self):
        row = parse_pair_record("4 1/5 4/15 |110* 1-3-4 true")
        assert (row.low, row.high) == (Angle(1, 5), Angle(4, 15))
        assert row.primitive
        assert row == pair_table(4, period=4)[1]

    @pytest.mark.parametrize(
        "line",
        [
            "4 1/5 4/15 |110* 1-3-4",
            "4 1/5 4/15 |110* 1-3-4 yes",
            "x 1/5 4/15 |110* 1-3-4 true",
            "4 1/5 4/15 110 1-3-4 true",
            "4 1/5 4/15 |110* 3-4 true",
        ],
    )
    def test_parse_rejects(self, line):
        with pytest.raises(ArtifactIOError):
            parse_pair_record(line)

    def test_table_file(self, tmp_path):
        rows = pair_table(5)
        path = tmp_path / "pairs.txt"
        assert write_pair_table(rows, path) == len(rows)
        text = path.read_text(encoding="utf-8")
        assert text.startswith(PAIR_HEADER + "\n")
        assert read_pair_table(path) == rows

    def test_missing_file(self, tmp_path):
        with pytest.raises(ArtifactIOError):
            read_pair_table(tmp_path / "nope.txt")


class TestCheckRecords:
    def test_format(self):
        record = CheckRecord(CheckKind.PAIR, True, (("low", "1/3"), ("high", "2/3"), ("distance", "1e-12")))
        assert format_check_record(record) == "PAIR pass low=1/3 high=2/3 distance=1e-12"
        assert parse_check_record(format_check_record(record)) == record

    def test_failed_record(self):
        record = parse_check_record("MISIUREWICZ fail angles=9/56,11/56,15/56 reason=WrongOrbitError")
        assert record.kind is CheckKind.MISIUREWICZ
        assert not record.passed
        assert record.get("reason") == "WrongOrbitError"
        assert record.get("absent") is None

    def test_dynamic_pair_record(self):
        record = parse_check_record(
            "DYNAMIC_PAIR pass low=1/3 high=2/3 parameter=-0.75+0i point=-0.5+0i "
            "distance=2.1e-09 raw_distance=0.0123 orbit_period=1 multiplier=-1+0i expected=-1+0i"
        )
        assert record.kind is CheckKind.DYNAMIC_PAIR
        assert record.get("orbit_period") == "1"
        assert record.get("multiplier") == record.get("expected")

    @pytest.mark.parametrize("line", ["BOGUS pass a=1", "PAIR maybe a=1", "PAIR pass novalue"])
    def test_parse_rejects(self, line):
        with pytest.raises(ArtifactIOError):
            parse_check_record(line)
