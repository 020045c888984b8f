from .ball import RealBall, ball, ball_max, ball_min
from .slope import (
    GOLDEN, SQRT2_MINUS_1, SQRT3_MINUS_1_HALF, TAU_INV2, CertifiedDecimal, CFStream,
    Intercept, QuadraticSurd, Slope, ceil_linear, check_unit_interval, convergent,
    floor_linear, parse_number, parse_slope, precision_ceiling, precision_ladder,
)

__all__ = [
    "RealBall", "ball", "ball_max", "ball_min", "GOLDEN", "SQRT2_MINUS_1",
    "SQRT3_MINUS_1_HALF", "TAU_INV2", "CertifiedDecimal", "CFStream", "Intercept",
    "QuadraticSurd", "Slope", "ceil_linear", "check_unit_interval", "convergent",
    "floor_linear", "parse_number", "parse_slope", "precision_ceiling", "precision_ladder",
]
