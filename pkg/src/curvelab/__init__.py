"""Curves on punctured surfaces: intersection numbers, subsurface projections,
tight geodesics and the cutoff-sum estimate for i(x, y)."""

from .surface import (SCHEMA_VERSION, make_surface, parse_surface,
                      standard_triangulation)
from .curves import Multicurve, NormalCurve, slope_curve
from .intersection import intersection_number

__version__ = "0.1.0"

__all__ = ["SCHEMA_VERSION", "make_surface", "parse_surface", "standard_triangulation",
           "Multicurve", "NormalCurve", "slope_curve", "intersection_number", "__version__"]
