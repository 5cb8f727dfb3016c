"""Prepared, good, monomial and toroidal forms of a germ and their invariants.

Everything here reads exponent data off a normalized germ. The germ is
first brought into its prepared shape:

  1 point   u = x^k,                 v = P(x) + x^c y
  2 point   u = (x^a y^b)^k,         v = P(x^a y^b) + x^c y^d * unit   (ad - bc != 0)
  2 point   u = (x^a y^b)^k,         v = P(x^a y^b) + x^c y^d z
  3 point   u = (x^a y^b z^c)^k,     v = P(x^a y^b z^c) + x^d y^e z^f * unit

or, over a 2 point of the base, one of the split forms where u and v are
monomials in different exceptional variables. The case analysis of
invertibility, the A/C/I numbers and the curve invariants only need the
exponents and the reduced P.
"""
from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import series as ps
from .const import EXACT, MARKER_MINUS_INFINITY
from .exceptions import MalformedGerm, PrecisionExhausted, WrongForm
from .germ import BaseType, MapGerm, NormalizedForm, generic_point, normalize
from .series import TruncatedSeries

_LOGGER = logging.getLogger(__name__)


class PreparedTag(str, Enum):
    ONE_POINT = "prepared-1pt"                  # u=x^a, v=P(x)+x^b y
    TWO_POINT_MONOMIAL = "prepared-2pt"         # u=(x^a y^b)^m, v=P+x^c y^d
    TWO_POINT_LINEAR = "prepared-2pt-linear"    # u=(x^a y^b)^m, v=P+x^c y^d z
    THREE_POINT = "prepared-3pt"                # u=(x^a y^b z^c)^m, v=P+x^d y^e z^f
    SPLIT_2PT = "strong-2pt-split"              # u=x^a, v=y^b
    SPLIT_3PT = "strong-3pt-split"              # u=x^a, v=y^b z^c
    CHAIN_3PT = "strong-3pt-chain"              # u=x^a y^b, v=y^c z^d
    NOT_PREPARED = "not-prepared"


SPLIT_TAGS = frozenset({PreparedTag.SPLIT_2PT, PreparedTag.SPLIT_3PT, PreparedTag.CHAIN_3PT})


class GoodTag(str, Enum):
    MONOMIAL_3PT = "good-3pt-monomial"          # u=x^a y^b z^c, v=x^d y^e z^f, rank 2
    SPLIT_3PT = "good-3pt-split"                # u=x^a y^b, v=z^c
    CHAIN_3PT = "good-3pt-chain"                # u=x^a y^b, v=y^c z^d
    MONOMIAL_2PT = "good-2pt-monomial"          # u=x^a y^b, v=x^c y^d, ad-bc != 0
    POWER_2PT = "good-2pt-power"                # u=(x^a y^b)^m, v=(x^a y^b)^t (alpha + z)
    LINEAR_2PT = "good-2pt-linear"              # u=x^a y^b, v=x^c y^d z, ad-bc != 0
    SPLIT_2PT = "good-2pt-split"                # u=x^a, v=y^b
    ONE_POINT = "good-1pt"                      # u=x^a, v=x^c (alpha + y)
    BAD = "bad"


class InvertibilityCase(str, Enum):
    ONE_POINT_LINEAR = "1pt: v=x^c y, c<k"
    TWO_POINT_SERIES = "2pt: P!=0, l1<ord P, l1<k"
    TWO_POINT_MONOMIAL = "2pt: P=0, l1<k<l2"
    TWO_POINT_SERIES_LINEAR = "2pt linear: P!=0, l1<ord P, l1<k"
    TWO_POINT_MONOMIAL_LINEAR = "2pt linear: v=x^c y^d z, l1<k"
    TWO_POINT_POWER_LINEAR = "2pt linear: v=(x^a y^b)^t z, t<k"
    TWO_POINT_SPLIT = "2pt: u=x^a, v=y^b"
    THREE_POINT_SERIES = "3pt: P!=0, l1<ord P, l1<k"
    THREE_POINT_MONOMIAL = "3pt: P=0, l1<k<l2"
    THREE_POINT_SPLIT = "3pt: u=x^a, v=y^b z^c"
    THREE_POINT_CHAIN = "3pt: u=x^a y^b, v=y^c z^d"


class CurveInvariantKind(str, Enum):
    SIGMA = "sigma"
    OMEGA = "Omega"
    LITTLE_OMEGA = "omega"


class ToroidalForm(str, Enum):
    MONOMIAL_LINEAR = "u=x^a y^b, v=z"
    CURVE = "u=x^a, v=y"
    MONOMIAL_3PT = "u, v monomials of rank 2 in x, y, z"
    MONOMIAL_2PT = "u=x^a y^b, v=x^c y^d"
    POWER_2PT = "u=(x^a y^b)^k, v=(x^a y^b)^t (alpha + z)"
    TRANSLATED_1PT = "u=x^a, v=x^c (y + alpha)"


@functools.total_ordering
class MinusInfinity:
    """Smaller than every curve invariant value."""

    def __eq__(self, other) -> bool:
        return isinstance(other, MinusInfinity)

    def __lt__(self, other) -> bool:
        return not isinstance(other, MinusInfinity)

    def __hash__(self) -> int:
        return hash(MARKER_MINUS_INFINITY)

    def __str__(self) -> str:
        return MARKER_MINUS_INFINITY

    __repr__ = __str__


MINUS_INFINITY = MinusInfinity()

CurveValue = tuple[int, int] | int | MinusInfinity


def lex_pair(alpha: int, beta: int) -> tuple[int, int]:
    """The larger of (alpha, beta) and (beta, alpha)."""
    return max((alpha, beta), (beta, alpha))


@dataclass(frozen=True)
class CurveInvariant:
    kind: CurveInvariantKind
    value: CurveValue

    @property
    def defined(self) -> bool:
        return self.value != MINUS_INFINITY

    def __str__(self) -> str:
        return f"{self.kind.value}={self.value}"


# --- exponent level -------------------------------------------------------------

def _lambdas(a: Sequence[int], factor: Sequence[int]) -> tuple[Fraction, Fraction]:
    ratios = [Fraction(f, ai) for ai, f in zip(a, factor)]
    return min(ratios), max(ratios)


def absorbable(j: int, a: Sequence[int], factor: Sequence[int]) -> bool:
    """Whether the term base^j of P can be moved into the factor of v."""
    powers = [j * ai for ai in a]
    return all(p >= f for p, f in zip(powers, factor)) and any(p > f for p, f in zip(powers, factor))


def reduce_p(terms: Mapping[int, Fraction], a: Sequence[int], k: int, factor: Sequence[int],
             one_point_base: bool) -> dict[int, Fraction]:
    """P without the terms absorbed into the factor of v and, over a 1 point
    of the base, without the powers of u."""
    kept = {}
    for j, coeff in sorted(terms.items()):
        if not coeff or absorbable(j, a, factor):
            continue
        if one_point_base and j % k == 0:
            continue
        kept[j] = Fraction(coeff)
    return kept


def p_order(terms: Mapping[int, Fraction]) -> int | float:
    return min(terms) if terms else EXACT


def invertibility_case(tag: PreparedTag, a: Sequence[int], k: int, factor: Sequence[int],
                       order: int | float) -> InvertibilityCase | None:
    """The non invertible case of (u, v) or None when u | v or v | u.

    ``order`` is the order of the reduced P, EXACT when it vanishes.
    """
    if tag in SPLIT_TAGS:
        return {
            PreparedTag.SPLIT_2PT: InvertibilityCase.TWO_POINT_SPLIT,
            PreparedTag.SPLIT_3PT: InvertibilityCase.THREE_POINT_SPLIT,
            PreparedTag.CHAIN_3PT: InvertibilityCase.THREE_POINT_CHAIN,
        }[tag]
    if tag == PreparedTag.ONE_POINT:
        if order == EXACT and factor[0] < k:
            return InvertibilityCase.ONE_POINT_LINEAR
        return None
    if tag == PreparedTag.NOT_PREPARED:
        raise WrongForm("invertibility_case(): the germ is not prepared")

    low, high = _lambdas(a, factor)
    series_case, monomial_case = {
        PreparedTag.TWO_POINT_MONOMIAL: (InvertibilityCase.TWO_POINT_SERIES, InvertibilityCase.TWO_POINT_MONOMIAL),
        PreparedTag.TWO_POINT_LINEAR: (InvertibilityCase.TWO_POINT_SERIES_LINEAR, None),
        PreparedTag.THREE_POINT: (InvertibilityCase.THREE_POINT_SERIES, InvertibilityCase.THREE_POINT_MONOMIAL),
    }[tag]
    if order != EXACT:
        return series_case if low < order and low < k else None
    if tag == PreparedTag.TWO_POINT_LINEAR:
        if low >= k:
            return None
        if low == high:
            return InvertibilityCase.TWO_POINT_POWER_LINEAR
        return InvertibilityCase.TWO_POINT_MONOMIAL_LINEAR
    return monomial_case if low < k < high else None


def monomial_pair_invariant(u_exps: Sequence[int], v_exps: Sequence[int]) -> CurveValue:
    """omega of u = monomial, v = monomial along a 2 curve, -inf when one divides the other."""
    first, second = (x - y for x, y in zip(u_exps, v_exps))
    if first * second >= 0:
        return MINUS_INFINITY
    return lex_pair(abs(first), abs(second))


def sigma_value(a: Sequence[int], factor: Sequence[int], order: int) -> CurveValue:
    first = factor[0] - a[0] * order
    second = factor[1] - a[1] * order
    if first * second >= 0:
        return MINUS_INFINITY
    return lex_pair(abs(first), abs(second))


def omega_value(a: Sequence[int], k: int, factor: Sequence[int]) -> CurveValue:
    return monomial_pair_invariant([k * ai for ai in a], factor)


# --- forms ------------------------------------------------------------------------

@dataclass(frozen=True)
class PreparedForm:
    """Exponent data of a prepared germ; ``names`` are the monomial variables."""
    tag: PreparedTag
    names: tuple[str, ...]
    a: tuple[int, ...]
    k: int
    factor: tuple[int, ...]
    p: dict[int, Fraction] = field(default_factory=dict)
    linear: str | None = None
    one_point_base: bool = True

    @property
    def order(self) -> int | float:
        return p_order(self.p)

    def case(self) -> InvertibilityCase | None:
        return invertibility_case(self.tag, self.a, self.k, self.factor, self.order)


@dataclass(frozen=True)
class SplitForm:
    """u and v monomials (times units) in the exceptional variables."""
    tag: PreparedTag
    names: tuple[str, ...]
    u_exps: tuple[int, ...]
    v_exps: tuple[int, ...]


@dataclass(frozen=True)
class PreparedClass:
    """``germ`` is in prepared coordinates; over a 2 point of the base the
    roles of u and v may be exchanged, ``swapped`` records that."""
    tag: PreparedTag
    exponents: dict[str, int] = field(default_factory=dict)
    germ: MapGerm | None = None
    form: PreparedForm | SplitForm | None = None
    swapped: bool = False

    @property
    def prepared(self) -> bool:
        return self.tag != PreparedTag.NOT_PREPARED

    @property
    def split(self) -> bool:
        return self.tag in SPLIT_TAGS

    @property
    def base_germ(self) -> MapGerm:
        """The prepared germ with u and v in the order of the base parameters."""
        return swap_functions(self.germ) if self.swapped else self.germ


NOT_PREPARED = PreparedClass(PreparedTag.NOT_PREPARED)


def swap_functions(g: MapGerm) -> MapGerm:
    if g.base_type != BaseType.TWO_POINT:
        raise MalformedGerm("u and v can only be exchanged over a 2 point of the base")
    return MapGerm(g.v, g.u, g.exceptional_vars, g.base_type, g.precision)

_EXPONENT_NAMES = {
    PreparedTag.TWO_POINT_MONOMIAL: (("a", "b"), ("c", "d")),
    PreparedTag.TWO_POINT_LINEAR: (("a", "b"), ("c", "d")),
    PreparedTag.THREE_POINT: (("a", "b", "c"), ("d", "e", "f")),
}


def _exponent_record(form: PreparedForm) -> dict[str, int]:
    if form.tag == PreparedTag.ONE_POINT:
        return {"a": form.k, "b": form.factor[0]}
    base_names, factor_names = _EXPONENT_NAMES[form.tag]
    record = dict(zip(base_names, form.a))
    record["m"] = form.k
    record.update(zip(factor_names, form.factor))
    return record


def _linear_variable(nf: NormalizedForm) -> str | None:
    """A free variable with a non zero linear coefficient in F."""
    if nf.F.precision < 1:
        raise PrecisionExhausted("_linear_variable(): F is not known to first order",
                                 {"F": ps.format_series(nf.F)})
    for name in nf.free_vars:
        exps = tuple(1 if n == name else 0 for n in nf.vars)
        if ps.coefficient(nf.F, exps):
            return name
    return None


def _check_p_precision(nf: NormalizedForm) -> None:
    if nf.P.is_exact:
        return
    needed = max(math.ceil(Fraction(f, ai)) for ai, f in zip(nf.a, nf.factor)) if nf.factor else 0
    if nf.P.precision < needed:
        raise PrecisionExhausted(f"P is known to degree {nf.P.precision}, the form needs {needed}",
                                 {"P": ps.format_series(nf.P), "needed": needed})


def _p_image(nf: NormalizedForm, terms: Mapping[int, Fraction]) -> TruncatedSeries:
    base = nf.base_monomial()
    total = ps.zero(nf.vars)
    for j, coeff in sorted(terms.items()):
        total = ps.add(total, ps.scale(ps.power(base, j), coeff))
    return total


def _straighten(nf: NormalizedForm, form: PreparedForm, terms: Mapping[int, Fraction]) -> MapGerm:
    """The germ in the coordinate w' = (v - P(base)) / (factor monomial).

    w' has a non zero linear term in the linear variable w and replaces it,
    so v = P(base) + (factor monomial) * w' exactly. ``terms`` are the
    terms of P left outside the factor.
    """
    w_var = ps.variable(form.linear, nf.vars)
    v = ps.add(_p_image(nf, terms), ps.multiply_monomial(w_var, nf.exponent_vector(form.factor)))
    v = ps.truncate(v, nf.germ.v.precision)
    return MapGerm(nf.germ.u, v, nf.germ.exceptional_vars, nf.germ.base_type, nf.germ.precision)


def _classify_split(g: MapGerm, u_exps: Sequence[int]) -> PreparedClass:
    split = ps.monomial_and_unit(g.v)
    if split is None:
        return NOT_PREPARED
    v_mono, _ = split
    names = g.vars
    for n, e in zip(names, v_mono):
        if e and n not in g.exceptional_vars:
            return NOT_PREPARED
    exc = [i for i, n in enumerate(names) if n in g.exceptional_vars]
    u_set = {i for i in exc if u_exps[i]}
    v_set = {i for i in exc if v_mono[i]}
    rest = set(exc) - u_set
    if not rest <= v_set:
        return NOT_PREPARED
    shared = u_set & v_set
    if len(exc) == 2 and len(u_set) == 1 and not shared:
        tag = PreparedTag.SPLIT_2PT
    elif len(exc) == 3 and not shared and len(u_set) in (1, 2):
        tag = PreparedTag.SPLIT_3PT
    elif len(exc) == 3 and len(u_set) == 2 and len(shared) == 1:
        tag = PreparedTag.CHAIN_3PT
    else:
        return NOT_PREPARED
    ex_names = tuple(names[i] for i in exc)
    form = SplitForm(tag, ex_names, tuple(u_exps[i] for i in exc), tuple(v_mono[i] for i in exc))
    exponents = {f"u_{n}": e for n, e in zip(ex_names, form.u_exps) if e}
    exponents.update({f"v_{n}": e for n, e in zip(ex_names, form.v_exps) if e})
    _LOGGER.debug(f"_classify_split(): {tag.value} {exponents}")
    return PreparedClass(tag, exponents, g, form)


def classify_prepared(g: MapGerm) -> PreparedClass:
    """Match g against the prepared and strongly prepared forms.

    NOT_PREPARED means no form is certified in the presented coordinates
    after the available normalizations.
    """
    split_u = ps.monomial_and_unit(g.u)
    if split_u is None:
        raise MalformedGerm(f"u = {ps.format_series(g.u)} is not a monomial times a unit")
    u_exps = split_u[0]
    dividing = {n for n, e in zip(g.vars, u_exps) if e}
    if g.base_type == BaseType.TWO_POINT and dividing != set(g.exceptional_vars):
        split_v = ps.monomial_and_unit(g.v)
        if split_v is not None and {n for n, e in zip(g.vars, split_v[0]) if e} == set(g.exceptional_vars):
            pc = classify_prepared(swap_functions(g))
            _LOGGER.debug(f"classify_prepared(): v carries every exceptional divisor, u and v exchanged")
            return replace(pc, swapped=True) if pc.prepared else pc
        return _classify_split(g, u_exps)

    nf = normalize(g)
    if nf.degenerate:
        _LOGGER.warning("classify_prepared(): v is a series in u to precision, no form certified")
        return NOT_PREPARED
    _check_p_precision(nf)
    unit = ps.is_unit(nf.F)
    linear = None if unit else _linear_variable(nf)
    if nf.point_type == 1:
        tag = PreparedTag.ONE_POINT if linear else None
    elif nf.point_type == 2:
        det = nf.a[0] * nf.factor[1] - nf.a[1] * nf.factor[0]
        if linear:
            tag = PreparedTag.TWO_POINT_LINEAR
        else:
            tag = PreparedTag.TWO_POINT_MONOMIAL if unit and det else None
    else:
        tag = PreparedTag.THREE_POINT if unit and _rank_two(nf.a, nf.factor) else None
    if tag is None:
        _LOGGER.debug(f"classify_prepared(): {nf.point_type} point with F = {ps.format_series(nf.F)} "
                      f"matches no form")
        return NOT_PREPARED

    one_point_base = g.base_type == BaseType.ONE_POINT
    terms = {j: c for (j,), c in nf.P.terms().items()}
    kept = reduce_p(terms, nf.a, nf.m, nf.factor, one_point_base)
    form = PreparedForm(tag, nf.monomial_vars, nf.a, nf.m, nf.factor, kept, linear, one_point_base)
    germ = nf.germ
    if linear:
        # powers of u stay in v: removing them changes the parameters of the base
        outside = {j: c for j, c in terms.items() if not absorbable(j, nf.a, nf.factor)}
        germ = _straighten(nf, form, outside)
    _LOGGER.debug(f"classify_prepared(): {tag.value} a={nf.a} k={nf.m} factor={nf.factor} P'={kept}")
    return PreparedClass(tag, _exponent_record(form), germ, form)


def _rank_two(a: Sequence[int], factor: Sequence[int]) -> bool:
    minors = [a[i] * factor[j] - a[j] * factor[i] for i, j in itertools.combinations(range(3), 2)]
    zeros = sum(1 for m in minors if m == 0)
    if zeros == 3:
        return False
    if zeros > 1:
        raise MalformedGerm("a rank 2 exponent matrix with every entry of u positive has at most one "
                            "vanishing minor", {"u": list(a), "v": list(factor)})
    return True


def prepared_form(g: MapGerm) -> PreparedClass:
    """classify_prepared that refuses germs it cannot certify."""
    pc = classify_prepared(g)
    if not pc.prepared:
        raise WrongForm("the germ is not strongly prepared in its presented coordinates",
                        {"u": ps.format_series(g.u), "v": ps.format_series(g.v)})
    return pc


# --- good and bad points ------------------------------------------------------------

@dataclass(frozen=True)
class GoodForm:
    tag: GoodTag
    alpha: Fraction | None = None
    witness: dict[str, int | bool] = field(default_factory=dict)

    @property
    def good(self) -> bool:
        return self.tag != GoodTag.BAD


_SPLIT_GOOD = {
    PreparedTag.SPLIT_2PT: GoodTag.SPLIT_2PT,
    PreparedTag.SPLIT_3PT: GoodTag.SPLIT_3PT,
    PreparedTag.CHAIN_3PT: GoodTag.CHAIN_3PT,
}


def good_form(pc: PreparedClass) -> GoodForm:
    if pc.split:
        return GoodForm(_SPLIT_GOOD[pc.tag])
    form = pc.form
    p = form.p
    if form.tag == PreparedTag.ONE_POINT:
        c = form.factor[0]
        if set(p) <= {c}:
            return GoodForm(GoodTag.ONE_POINT, p.get(c, Fraction(0)))
        d = form.order
        witness: dict[str, int | bool] = {"d": d, "c": c, "a": form.k}
        if form.one_point_base:
            witness["a_divides_d"] = d % form.k == 0
        return GoodForm(GoodTag.BAD, None, witness)
    if form.tag == PreparedTag.TWO_POINT_LINEAR:
        low, high = _lambdas(form.a, form.factor)
        if low == high and low.denominator == 1 and set(p) <= {int(low)}:
            return GoodForm(GoodTag.POWER_2PT, p.get(int(low), Fraction(0)))
        if not p:
            return GoodForm(GoodTag.LINEAR_2PT)
    elif not p:
        tag = GoodTag.MONOMIAL_2PT if form.tag == PreparedTag.TWO_POINT_MONOMIAL else GoodTag.MONOMIAL_3PT
        return GoodForm(tag)
    return GoodForm(GoodTag.BAD, None, {"d": form.order, "factor": list(form.factor), "a": list(form.a)})


def classify_good(g: MapGerm) -> GoodForm:
    """The good form of a strongly prepared germ, or BAD with the exponents that witness it."""
    result = good_form(prepared_form(g))
    _LOGGER.debug(f"classify_good(): {result.tag.value} alpha={result.alpha} {result.witness}")
    return result


def good_openness_points(g: MapGerm, values: Iterable[Fraction | int] = (1, -1)) -> list[MapGerm]:
    """Nearby points reached by translating one free variable by a rational value."""
    points = []
    for name, value in itertools.product(g.free_vars, values):
        try:
            points.append(generic_point(g, name, value))
        except PrecisionExhausted as err:
            _LOGGER.debug(f"good_openness_points(): {name}+{value} skipped: {err.message}")
    return points


# --- invertibility --------------------------------------------------------------------

@dataclass(frozen=True)
class Invertibility:
    invertible: bool
    case: InvertibilityCase | None = None


def invertibility_of(pc: PreparedClass) -> InvertibilityCase | None:
    if pc.split:
        form = pc.form
        u, v = form.u_exps, form.v_exps
        if all(x <= y for x, y in zip(u, v)) or all(y <= x for x, y in zip(u, v)):
            return None
        return invertibility_case(pc.tag, (), 0, (), EXACT)
    return pc.form.case()


def is_mq_invertible(g: MapGerm) -> Invertibility:
    """Whether the ideal (u, v) is principal at the point, with the case when it is not."""
    case = invertibility_of(prepared_form(g))
    if case is None:
        return Invertibility(True)
    _LOGGER.debug(f"is_mq_invertible(): not invertible, {case.value}")
    return Invertibility(False, case)


def monomial_invertibility(g: MapGerm) -> bool:
    """u | v or v | u checked on the truncated series themselves."""
    if ps.divides(g.u, g.v):
        return True
    return ps.monomial_and_unit(g.v) is not None and ps.divides(g.v, g.u)


# --- A, C and I ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorInvariant:
    """A and C of the divisor {name = 0} through the point."""
    name: str
    A: int
    C: tuple[int, int] | None
    nu: int


def divisor_invariants(pc: PreparedClass) -> list[DivisorInvariant]:
    if pc.split:
        return [DivisorInvariant(n, 0, None, 0) for n in pc.form.names]
    form = pc.form
    order = form.order
    result = []
    for name, ai, f in zip(form.names, form.a, form.factor):
        nu = f if order == EXACT else min(f, ai * order)
        A = f - nu
        C = (A, nu + ai * form.k) if A > 0 else None
        result.append(DivisorInvariant(name, A, C, nu))
    return result


def A_C_invariants(g: MapGerm) -> dict[str, DivisorInvariant]:
    """A and C per exceptional divisor through the point, keyed by its variable."""
    result = {d.name: d for d in divisor_invariants(prepared_form(g))}
    _LOGGER.debug(f"A_C_invariants(): {[(d.name, d.A, d.C) for d in result.values()]}")
    return result


def i_value(pc: PreparedClass) -> int:
    form = pc.form
    if pc.tag != PreparedTag.ONE_POINT or not form.one_point_base:
        raise WrongForm("I is defined at 1 points over a 1 point of the base",
                        {"tag": pc.tag.value})
    c = form.factor[0]
    if not set(form.p) <= {c}:
        raise WrongForm("I needs the form u=x^a, v=x^c (alpha + y)", {"P": {str(j): str(v) for j, v in form.p.items()}})
    return c - form.k


def I_invariant(g: MapGerm) -> int:
    return i_value(prepared_form(g))


# --- curve invariants ---------------------------------------------------------------------

@dataclass(frozen=True)
class CurveCandidate:
    """A coordinate curve along whose generic point (u, v) is not principal."""
    first: str
    second: str
    invariant: CurveInvariant
    two_curve: bool

    def __str__(self) -> str:
        return f"({self.first},{self.second}) {self.invariant}"


def curve_value(form: PreparedForm | SplitForm, kind: CurveInvariantKind) -> CurveValue:
    """sigma, Omega or omega of the curve through the point that the form singles out."""
    if isinstance(form, SplitForm):
        if kind != CurveInvariantKind.LITTLE_OMEGA or form.tag != PreparedTag.SPLIT_2PT:
            raise WrongForm(f"{kind.value} is not defined on {form.tag.value}")
        return monomial_pair_invariant(form.u_exps, form.v_exps)
    if kind == CurveInvariantKind.OMEGA:
        if form.tag != PreparedTag.ONE_POINT or form.p:
            raise WrongForm("Omega needs u=x^k, v=x^c y", {"tag": form.tag.value})
        c = form.factor[0]
        return form.k - c if c < form.k else MINUS_INFINITY
    if form.tag not in (PreparedTag.TWO_POINT_MONOMIAL, PreparedTag.TWO_POINT_LINEAR):
        raise WrongForm(f"{kind.value} needs a 2 point form", {"tag": form.tag.value})
    if kind == CurveInvariantKind.SIGMA:
        if not form.p:
            raise WrongForm("sigma needs P != 0")
        return sigma_value(form.a, form.factor, form.order)
    if form.p or form.tag != PreparedTag.TWO_POINT_MONOMIAL:
        raise WrongForm("omega needs u=(x^a y^b)^k, v=x^c y^d")
    return omega_value(form.a, form.k, form.factor)


def curve_invariant(g: MapGerm, kind: CurveInvariantKind) -> CurveInvariant:
    value = curve_value(prepared_form(g).form, kind)
    return CurveInvariant(kind, value)


def _restrict(form: PreparedForm, curve: tuple[str, str]) -> PreparedForm | None:
    """The form at a generic point of the curve; None where (u, v) is principal there."""
    idx = [i for i, n in enumerate(form.names) if n in curve]
    if not idx:
        return None
    g = math.gcd(*(form.a[i] for i in idx))
    a = tuple(form.a[i] // g for i in idx)
    factor = tuple(form.factor[i] for i in idx)
    names = tuple(form.names[i] for i in idx)
    k = form.k * g
    terms = {j * g: c for j, c in form.p.items()}
    linear = form.linear if form.linear in curve else None
    if len(idx) == 1:
        if linear is None:
            return None
        tag = PreparedTag.ONE_POINT
    else:
        if factor[0] * a[1] == factor[1] * a[0]:
            return None
        tag = PreparedTag.TWO_POINT_MONOMIAL
    p = reduce_p(terms, a, k, factor, form.one_point_base)
    return PreparedForm(tag, names, a, k, factor, p, linear, form.one_point_base)


def _candidate(form: PreparedForm, curve: tuple[str, str]) -> CurveCandidate | None:
    restricted = _restrict(form, curve)
    if restricted is None or restricted.case() is None:
        return None
    if restricted.tag == PreparedTag.ONE_POINT:
        kind = CurveInvariantKind.OMEGA
    elif restricted.p:
        kind = CurveInvariantKind.SIGMA
    else:
        kind = CurveInvariantKind.LITTLE_OMEGA
    value = curve_value(restricted, kind)
    return CurveCandidate(curve[0], curve[1], CurveInvariant(kind, value), restricted.tag != PreparedTag.ONE_POINT)


def curve_candidates(pc: PreparedClass) -> list[CurveCandidate]:
    """Coordinate curves through the point along which (u, v) stays non principal."""
    germ = pc.germ
    curves = [pair for pair in itertools.combinations(germ.vars, 2)
              if any(n in germ.exceptional_vars for n in pair)]
    found = []
    if pc.split:
        form = pc.form
        for pair in curves:
            idx = [form.names.index(n) for n in pair if n in form.names]
            if len(idx) != 2 or not any(form.u_exps[i] for i in idx):
                continue
            value = monomial_pair_invariant([form.u_exps[i] for i in idx], [form.v_exps[i] for i in idx])
            if value != MINUS_INFINITY:
                found.append(CurveCandidate(pair[0], pair[1],
                                            CurveInvariant(CurveInvariantKind.LITTLE_OMEGA, value), True))
    else:
        for pair in curves:
            candidate = _candidate(pc.form, pair)
            if candidate is not None:
                found.append(candidate)
    _LOGGER.debug(f"curve_candidates(): {[str(c) for c in found]}")
    return found


# --- monomial and toroidal forms ----------------------------------------------------------

def monomial_form(pc: PreparedClass) -> bool:
    if not pc.prepared:
        return False
    return pc.split or not pc.form.p


def is_monomial(g: MapGerm) -> bool:
    return monomial_form(classify_prepared(g))


def toroidal_form(pc: PreparedClass) -> ToroidalForm | None:
    if not pc.prepared:
        return None
    if pc.split:
        return ToroidalForm.MONOMIAL_2PT if pc.tag == PreparedTag.SPLIT_2PT else ToroidalForm.MONOMIAL_3PT
    form = pc.form
    if form.one_point_base:
        if form.tag == PreparedTag.TWO_POINT_LINEAR and not any(form.factor):
            return ToroidalForm.MONOMIAL_LINEAR
        if form.tag == PreparedTag.ONE_POINT and form.factor == (0,):
            return ToroidalForm.CURVE
        return None
    if form.tag == PreparedTag.THREE_POINT and not form.p:
        return ToroidalForm.MONOMIAL_3PT
    if form.tag == PreparedTag.TWO_POINT_MONOMIAL and not form.p:
        return ToroidalForm.MONOMIAL_2PT
    good = good_form(pc)
    if good.tag == GoodTag.POWER_2PT and good.alpha:
        return ToroidalForm.POWER_2PT
    if good.tag == GoodTag.ONE_POINT and good.alpha and form.factor[0] > 0:
        return ToroidalForm.TRANSLATED_1PT
    return None


def is_toroidal(g: MapGerm) -> tuple[bool, ToroidalForm | None]:
    form = toroidal_form(classify_prepared(g))
    return form is not None, form
