from __future__ import annotations

from pathlib import Path
from typing import Union

from ..utils import safe_file_operation
from .render import Image


def encode_ppm(img: Image) -> bytes:
    """Binary PPM (P6, maxval 255)."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.to_bytes()


def write_image(img: Image, path: Union[str, Path]) -> Path:
    path = Path(path)
    safe_file_operation(path, path.write_bytes, encode_ppm(img))
    return path
