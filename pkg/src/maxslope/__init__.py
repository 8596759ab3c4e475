"""Exact max-slope pivot rules on simplices, products of simplices and simplex-times-cube."""

from .core import (Arborescence, GkzPoint, InvalidArborescenceError, LpInstance, OrderingError,
                   TieError, affine_dim, build_instance, gkz_point, max_slope_arborescence, slope)
from .lp import StrictSystem, strict_feasible

__all__ = [
    "Arborescence", "GkzPoint", "InvalidArborescenceError", "LpInstance", "OrderingError",
    "StrictSystem", "TieError", "affine_dim", "build_instance", "gkz_point",
    "max_slope_arborescence", "slope", "strict_feasible",
]
