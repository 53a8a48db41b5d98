import cmath
import re
from pathlib import Path
from typing import Callable, List, TypeVar, Union

from .errors import ArtifactIOError

T = TypeVar("T")

_BARE_UNIT = re.compile(r"(^|[+-])j")


def format_complex(value: complex, digits: int = 12) -> str:
    """Compact ``a+bi`` form that :func:`parse_complex` reads back."""
    return f"{value.real:.{digits}g}{value.imag:+.{digits}g}i"


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bj``, ``bi`` or Python's ``(a+bj)`` form."""
    raw = text.strip().replace(" ", "").replace("i", "j")
    raw = _BARE_UNIT.sub(r"\g<1>1j", raw)
    try:
        value = complex(raw)
    except ValueError:
        raise ValueError(f"'{text}' is not a complex number") from None
    if not cmath.isfinite(value):
        raise ValueError(f"'{text}' is not finite")
    return value


def ensure_directory_exists(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def safe_file_operation(path: Union[str, Path], operation_func: Callable[..., T], *args, **kwargs) -> T:
    """Run a file operation, reporting failures with the path involved."""
    try:
        return operation_func(*args, **kwargs)
    except PermissionError as e:
        raise ArtifactIOError(f"Permission denied: {path}: {e.strerror or e}") from e
    except OSError as e:
        raise ArtifactIOError(f"File operation failed: {path}: {e.strerror or e}") from e


def format_table(headers: List[str], rows: List[List[str]], min_width: int = 4) -> str:
    """Plain-text table with a header separator."""
    if not rows:
        return ""

    col_widths = [max(len(str(header)), min_width) for header in headers]

    for row in rows:
        for i, cell in enumerate(row):
            if i < len(col_widths):
                col_widths[i] = max(col_widths[i], len(str(cell)))

    header_line = " | ".join(
        header.ljust(col_widths[i]) for i, header in enumerate(headers)
    )
    separator_line = "-+-".join("-" * width for width in col_widths)

    lines = [header_line, separator_line]

    for row in rows:
        formatted_row = []
        for i, cell in enumerate(row):
            if i < len(col_widths):
                formatted_row.append(str(cell).ljust(col_widths[i]))
        lines.append(" | ".join(formatted_row).rstrip())

    return "\n".join(lines)
