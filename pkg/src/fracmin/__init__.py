"""Exact fractional one-sided minimal functions of step functions, the associated
two-weight classes, and an instance-level harness for their weighted inequalities."""

from .minimal import (Exponents, SublevelSet, minimal_minus, minimal_plus, minimal_plus_grid,
                      minimal_plus_oracle, sublevel_set)
from .stepfn import (INF, Interval, SchemaError, StepFunction, affine, integrate, power_transform,
                     reflect, restrict)
from .weights import (Kind, PlusMinusDecomposition, QuadratureError, RatioReport, WeightPair,
                      class_constant, interval_family, omega, plus_minus, sawyer_ratio,
                      wpq_eta_ratio, wpq_ratio)

__all__ = [
    "INF", "Interval", "StepFunction", "SchemaError", "integrate", "restrict", "power_transform",
    "reflect", "affine", "Exponents", "SublevelSet", "minimal_plus", "minimal_minus",
    "minimal_plus_grid", "minimal_plus_oracle", "sublevel_set", "Kind", "WeightPair",
    "RatioReport", "PlusMinusDecomposition", "QuadratureError", "omega", "plus_minus",
    "wpq_ratio", "wpq_eta_ratio", "sawyer_ratio", "interval_family", "class_constant",
]
