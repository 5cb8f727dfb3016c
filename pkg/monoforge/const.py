"""Constants for monoforge."""
import math
from typing import Final

DOMAIN: Final = "monoforge"

# precision (total degree) of series expansions that never terminate
DEFAULT_PRECISION: Final = 24
MIN_PRECISION: Final = 2
MAX_PRECISION: Final = 200

# depth budgets
DEFAULT_MAX_DEPTH: Final = 64
DEFAULT_RESOLVE_DEPTH: Final = 40
DELTA_SUP_MAX_STEPS: Final = 256

# exact (polynomial) series carry an infinite precision
EXACT: Final = math.inf

# the variable used for P(t) in normalized forms
BASE_VARIABLE: Final = "t"

# germ file keys
CONF_VARS: Final = "vars"
CONF_EXCEPTIONAL: Final = "exceptional"
CONF_BASE: Final = "base"
CONF_PRECISION: Final = "precision"
CONF_U: Final = "u"
CONF_V: Final = "v"

# forest file keys
CONF_LEAVES: Final = "leaves"
CONF_DIVISORS: Final = "divisors"
CONF_IMAGE: Final = "image"

DEFAULT_IMAGE_TAG: Final = "q0"

# JSON record keys
KEY_POINT_TYPE: Final = "point_type"
KEY_MONOMIAL: Final = "monomial"
KEY_M: Final = "m"
KEY_FACTOR: Final = "factor"
KEY_P: Final = "P"
KEY_F: Final = "F"
KEY_NU: Final = "nu"
KEY_GAMMA: Final = "gamma"
KEY_TAU: Final = "tau"
KEY_LEADING_FORM: Final = "leading_form"
KEY_U: Final = "u"
KEY_V: Final = "v"
KEY_U_SCALE: Final = "u_scale"
KEY_DEGENERATE: Final = "degenerate"
KEY_TAG: Final = "tag"
KEY_EXPONENTS: Final = "exponents"
KEY_A: Final = "A"
KEY_C: Final = "C"
KEY_I: Final = "I"
KEY_CASE: Final = "case"
KEY_INVERTIBLE: Final = "invertible"
KEY_TOROIDAL: Final = "toroidal"
KEY_GOOD: Final = "good"
KEY_NODES: Final = "nodes"
KEY_EDGES: Final = "edges"
KEY_STEPS: Final = "steps"
KEY_ERROR: Final = "error"
KEY_MESSAGE: Final = "message"
KEY_CONTEXT: Final = "context"
KEY_CHECKS: Final = "checks"
KEY_STATUS: Final = "status"

# printed for values that cannot be determined from finite data
MARKER_NOT_APPLICABLE: Final = "not-applicable"
MARKER_MINUS_INFINITY: Final = "-inf"
MARKER_INFINITY: Final = "inf"

# forest bookkeeping
DIVISOR_TAG_PREFIX: Final = "E"
GENERIC_TRANSLATION: Final = 1
KEY_ID: Final = "id"
KEY_PARENT: Final = "parent"
KEY_LABEL: Final = "label"
KEY_IMAGE: Final = "image"
KEY_DIVISORS: Final = "divisors"
KEY_BASE_POINTS: Final = "base_points"
KEY_KIND: Final = "kind"
KEY_TARGET: Final = "target"
KEY_CENTER: Final = "center"
KEY_INVARIANT: Final = "invariant"
KEY_LEAVES: Final = "leaves"
KEY_BEFORE: Final = "before"
KEY_AFTER: Final = "after"
KEY_BASE: Final = "base"
KEY_VARS: Final = "vars"
KEY_EXCEPTIONAL: Final = "exceptional"
KEY_PRECISION: Final = "precision"
KEY_ALPHA: Final = "alpha"
KEY_SWAPPED: Final = "swapped"
