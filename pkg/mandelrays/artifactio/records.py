"""Line-oriented record formats, documented in docs/record-formats.md.

Fields are separated by single spaces and never contain whitespace
themselves; lines starting with ``#`` are comments.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, List, Union

from ..angle import parse_angle
from ..combinat import PairRecord
from ..errors import ArtifactIOError, MandelRaysError
from ..kneading import InternalAddress, parse_kneading
from ..numerics.types import CheckKind, CheckRecord
from ..utils import safe_file_operation

PAIR_HEADER = "# period low high kneading address primitive"


def format_pair_record(record: PairRecord) -> str:
    primitive = "true" if record.primitive else "false"
    return (
        f"{record.period} {record.low} {record.high} "
        f"{record.kneading} {record.address} {primitive}"
    )


def parse_pair_record(line: str) -> PairRecord:
    fields = line.split()
    if len(fields) != 6:
        raise ArtifactIOError(f"pair record needs 6 fields, got {len(fields)}: '{line}'")
    period, low, high, kneading, address, primitive = fields
    if primitive not in ("true", "false"):
        raise ArtifactIOError(f"primitive must be true or false: '{line}'")
    try:
        return PairRecord(
            int(period),
            parse_angle(low),
            parse_angle(high),
            parse_kneading(kneading),
            InternalAddress(tuple(int(entry) for entry in address.split("-"))),
            primitive == "true",
        )
    except (MandelRaysError, ValueError) as e:
        raise ArtifactIOError(f"malformed pair record '{line}': {e}") from e


def write_pair_table(records: Iterable[PairRecord], path: Union[str, Path]) -> int:
    path = Path(path)
    lines = [PAIR_HEADER] + [format_pair_record(record) for record in records]
    safe_file_operation(path, path.write_text, "\n".join(lines) + "\n", encoding="utf-8")
    return len(lines) - 1


def read_pair_table(path: Union[str, Path]) -> List[PairRecord]:
    path = Path(path)
    text = safe_file_operation(path, path.read_text, encoding="utf-8")
    return [
        parse_pair_record(line)
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]


def format_check_record(record: CheckRecord) -> str:
    status = "pass" if record.passed else "fail"
    fields = " ".join(f"{key}={value}" for key, value in record.fields)
    return f"{record.kind.value} {status} {fields}".rstrip()


def parse_check_record(line: str) -> CheckRecord:
    kind, _, rest = line.strip().partition(" ")
    status, _, rest = rest.partition(" ")
    try:
        check = CheckKind(kind)
    except ValueError:
        raise ArtifactIOError(f"unknown check kind '{kind}'") from None
    if status not in ("pass", "fail"):
        raise ArtifactIOError(f"check status must be pass or fail: '{line}'")
    fields = []
    for item in rest.split():
        key, sep, value = item.partition("=")
        if not sep:
            raise ArtifactIOError(f"field '{item}' is not key=value")
        fields.append((key, value))
    return CheckRecord(check, status == "pass", tuple(fields))
