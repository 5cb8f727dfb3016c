"""Exact local monomialization and toroidalization of morphisms to surfaces."""
from .driver import ChartForest, ChartNode, ForestCoordinator, RunTrace, StepKind, TraceStep, base_chart
from .exceptions import MonoforgeError
from .germ import BaseType, MapGerm, NormalizedForm, invariants, make_germ, normalize
from .germ_file import load_forest, load_forest_data, load_germ, load_germ_text
from .prepared import (
    A_C_invariants,
    I_invariant,
    PreparedTag,
    classify_good,
    classify_prepared,
    curve_invariant,
    invertibility_case,
    is_monomial,
    is_mq_invertible,
    is_toroidal,
    lex_pair,
)
from .resolve2d import make_germ2d, resolve_all
from .series import TruncatedSeries, parse_series
from .transform3d import CurveCenter, PointCenter, check_descent, monoidal_charts, quadratic_charts

__all__ = [
    "A_C_invariants",
    "BaseType",
    "ChartForest",
    "ChartNode",
    "CurveCenter",
    "ForestCoordinator",
    "I_invariant",
    "MapGerm",
    "MonoforgeError",
    "NormalizedForm",
    "PointCenter",
    "PreparedTag",
    "RunTrace",
    "StepKind",
    "TraceStep",
    "TruncatedSeries",
    "base_chart",
    "check_descent",
    "classify_good",
    "classify_prepared",
    "curve_invariant",
    "invariants",
    "invertibility_case",
    "is_monomial",
    "is_mq_invertible",
    "is_toroidal",
    "lex_pair",
    "load_forest",
    "load_forest_data",
    "load_germ",
    "load_germ_text",
    "make_germ",
    "make_germ2d",
    "monoidal_charts",
    "normalize",
    "parse_series",
    "quadratic_charts",
    "resolve_all",
]
