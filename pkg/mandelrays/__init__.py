"""
mandelrays - Mandelbrot set combinatorics and external rays

Exact kneading theory for rational external angles (kneading sequences,
internal addresses, ray pairs, orbit portraits, Misiurewicz classes)
plus numerical ray tracing, Newton solvers and escape-time rendering.
"""

__version__ = "0.1.0"
__description__ = "Combinatorics and external rays of the Mandelbrot set"

from .angle import Angle, orbit_type, parse_angle
from .combinat import RayPair, lavaurs_pairs, misiurewicz_class, pair_of, portrait_cycle
from .config import ConfigManager, GlobalConfig
from .kneading import angle_address, internal_address, kneading

__all__ = [
    "Angle",
    "ConfigManager",
    "GlobalConfig",
    "RayPair",
    "angle_address",
    "internal_address",
    "kneading",
    "lavaurs_pairs",
    "misiurewicz_class",
    "orbit_type",
    "pair_of",
    "parse_angle",
    "portrait_cycle",
]
