"""Pictures, PPM output and the text record formats."""

from .ppm import encode_ppm, write_image
from .records import (
    format_check_record,
    format_pair_record,
    parse_check_record,
    parse_pair_record,
    read_pair_table,
    write_pair_table,
)
from .render import Image, RenderSpec, escape_counts, overlay_trace, render

__all__ = [
    "Image",
    "RenderSpec",
    "encode_ppm",
    "escape_counts",
    "format_check_record",
    "format_pair_record",
    "overlay_trace",
    "parse_check_record",
    "parse_pair_record",
    "read_pair_table",
    "render",
    "write_image",
    "write_pair_table",
]
