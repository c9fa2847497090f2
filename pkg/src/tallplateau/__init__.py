"""Fillability of curves on the asymptotic cylinder of hyperbolic 3-space."""

from .curves import (
    ClosedCurve,
    CurveFamily,
    CylPoint,
    classify,
    has_thin_tail,
    height,
    is_exceptional,
    validate,
    vertical_gaps,
)

__all__ = [
    "ClosedCurve",
    "CurveFamily",
    "CylPoint",
    "classify",
    "has_thin_tail",
    "height",
    "is_exceptional",
    "validate",
    "vertical_gaps",
]
