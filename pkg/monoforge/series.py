"""Truncated multivariate power series over the rationals.

A series is a sparse sympy polynomial over ``QQ`` together with a precision
``N``: every coefficient of total degree <= N is exact, nothing is known
above. Polynomial literals carry ``EXACT`` (infinite) precision. All
operations propagate the precision pessimistically.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy import Symbol, integer_nthroot
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ
from sympy.polys.monomials import monomial_div, monomial_min, monomial_mul
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from .const import DEFAULT_PRECISION, EXACT
from .exceptions import (
    IrrationalRoot,
    MalformedGerm,
    NonUnit,
    NotDivisible,
    PrecisionExhausted,
    WrongForm,
)

_LOGGER = logging.getLogger(__name__)

Precision = int | float
Monomial = tuple[int, ...]


@dataclass(frozen=True)
class UnknownOrder:
    """All stored terms vanish; the order is at least ``at_least``."""
    at_least: int

    def __str__(self) -> str:
        return f"unknown>={self.at_least}"


Order = int | float | UnknownOrder


def is_known(value: Order) -> bool:
    return not isinstance(value, UnknownOrder)


@lru_cache(maxsize=None)
def series_ring(names: tuple[str, ...]) -> PolyRing:
    """The polynomial ring over QQ in 1 to 3 generators.

    Rings are memoized on the generator names so every series over the same
    variables shares one ring and their elements combine without conversion.
    """
    if not 1 <= len(names) <= 3 or len(set(names)) != len(names):
        raise MalformedGerm(f"invalid variable list {names}")
    return ring(",".join(names), QQ)[0]


def to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def to_qq(c: Fraction | int):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _truncated(p: PolyElement, limit: Precision) -> PolyElement:
    if limit == EXACT or all(sum(m) <= limit for m in p):
        return p
    return p.ring.from_dict({m: c for m, c in p.items() if sum(m) <= limit})


@dataclass(frozen=True)
class TruncatedSeries:
    poly: PolyElement
    precision: Precision = EXACT

    def __post_init__(self) -> None:
        if self.precision != EXACT:
            if self.precision < 0:
                raise PrecisionExhausted(f"negative precision {self.precision}")
            object.__setattr__(self, "precision", int(self.precision))
            object.__setattr__(self, "poly", _truncated(self.poly, self.precision))

    @property
    def ring(self) -> PolyRing:
        return self.poly.ring

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(str(s) for s in self.poly.ring.symbols)

    @property
    def is_exact(self) -> bool:
        return self.precision == EXACT

    def is_zero(self) -> bool:
        """True if every stored coefficient vanishes (not a certificate of 0)."""
        return not self.poly

    def terms(self) -> dict[Monomial, Fraction]:
        return {m: to_fraction(c) for m, c in self.poly.items()}

    def var_index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError as err:
            raise MalformedGerm(f"unknown variable {name} in {self.vars}") from err

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return add(self, neg(other))

    def __neg__(self) -> TruncatedSeries:
        return neg(self)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return mul(self, other)

    def __str__(self) -> str:
        return format_series(self)


# --- construction ---------------------------------------------------------

def zero(names: Sequence[str], precision: Precision = EXACT) -> TruncatedSeries:
    return TruncatedSeries(series_ring(tuple(names)).zero, precision)


def constant(c: Fraction | int, names: Sequence[str]) -> TruncatedSeries:
    R = series_ring(tuple(names))
    return TruncatedSeries(R.ground_new(to_qq(c)), EXACT)


def one(names: Sequence[str]) -> TruncatedSeries:
    return constant(1, names)


def monomial(exponents: Sequence[int], names: Sequence[str], coeff: Fraction | int = 1) -> TruncatedSeries:
    R = series_ring(tuple(names))
    return TruncatedSeries(R.from_dict({tuple(exponents): to_qq(coeff)}), EXACT)


def variable(name: str, names: Sequence[str]) -> TruncatedSeries:
    names = tuple(names)
    if name not in names:
        raise MalformedGerm(f"unknown variable {name} in {names}")
    return monomial(tuple(1 if n == name else 0 for n in names), names)


def from_terms(terms: Mapping[Monomial, Fraction | int], names: Sequence[str],
               precision: Precision = EXACT) -> TruncatedSeries:
    R = series_ring(tuple(names))
    return TruncatedSeries(R.from_dict({tuple(m): to_qq(c) for m, c in terms.items()}), precision)


def parse_series(text: str, names: Sequence[str], precision: Precision = EXACT) -> TruncatedSeries:
    """Parse a literal like ``3/2*x^2*y - (y-x^2)^3`` into an exact series."""
    names = tuple(names)
    R = series_ring(names)
    local = {n: Symbol(n) for n in names}
    try:
        expr = parse_expr(text, local_dict=local,
                          transformations=standard_transformations + (convert_xor,))
        poly = R.from_expr(expr)
    except (SyntaxError, TypeError, ValueError, CoercionFailed) as err:
        raise MalformedGerm(f"cannot parse series '{text}' in {names}: {err}") from err
    return TruncatedSeries(poly, precision)


def with_vars(f: TruncatedSeries, names: Sequence[str]) -> TruncatedSeries:
    """Re-embed f into the ring on ``names`` (variables of f not in names must not occur)."""
    names = tuple(names)
    if names == f.vars:
        return f
    R = series_ring(names)
    positions = []
    for i, n in enumerate(f.vars):
        positions.append(names.index(n) if n in names else None)
    out = {}
    for m, c in f.poly.items():
        target = [0] * len(names)
        for i, e in enumerate(m):
            if e == 0:
                continue
            if positions[i] is None:
                raise MalformedGerm(f"with_vars(): variable {f.vars[i]} occurs in the series but not in {names}")
            target[positions[i]] = e
        out[tuple(target)] = c
    return TruncatedSeries(R.from_dict(out), f.precision)


# --- basic arithmetic -------------------------------------------------------

def _same_ring(f: TruncatedSeries, g: TruncatedSeries) -> None:
    if f.ring != g.ring:
        raise MalformedGerm(f"series live in different rings {f.vars} and {g.vars}")


def order(f: TruncatedSeries) -> Order:
    """Least total degree of a nonzero term, or an ``UnknownOrder`` marker."""
    if not f.poly:
        return EXACT if f.is_exact else UnknownOrder(f.precision + 1)
    return min(sum(m) for m in f.poly)


def order_bound(f: TruncatedSeries) -> Precision:
    """A certified lower bound for the order."""
    o = order(f)
    return o.at_least if isinstance(o, UnknownOrder) else o


def truncate(f: TruncatedSeries, precision: Precision) -> TruncatedSeries:
    return TruncatedSeries(f.poly, min(f.precision, precision))


def neg(f: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(-f.poly, f.precision)


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    _same_ring(f, g)
    prec = min(f.precision, g.precision)
    return TruncatedSeries(_truncated(f.poly + g.poly, prec), prec)


def sub(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return add(f, neg(g))


def scale(f: TruncatedSeries, c: Fraction | int) -> TruncatedSeries:
    return TruncatedSeries(f.poly * to_qq(c), f.precision)


def _graded_product(p1: PolyElement, p2: PolyElement, limit: Precision) -> PolyElement:
    if limit == EXACT:
        return p1 * p2
    R = p1.ring
    p = R.zero
    get = p.get
    items2 = sorted(p2.items(), key=lambda e: sum(e[0]))
    for exp1, v1 in p1.items():
        d1 = sum(exp1)
        if d1 > limit:
            continue
        for exp2, v2 in items2:
            if d1 + sum(exp2) > limit:
                break
            exp = monomial_mul(exp1, exp2)
            p[exp] = get(exp, 0) + v1 * v2
    p.strip_zero()
    return p


def mul(f: TruncatedSeries, g: TruncatedSeries, cap: Precision = EXACT) -> TruncatedSeries:
    """Product, exact up to min(N_f + ord g, N_g + ord f) (and ``cap``)."""
    _same_ring(f, g)
    prec = min(f.precision + order_bound(g), g.precision + order_bound(f), cap)
    return TruncatedSeries(_graded_product(f.poly, g.poly, prec), prec)


def power(f: TruncatedSeries, n: int, cap: Precision = EXACT) -> TruncatedSeries:
    if n < 0:
        return power(invert_unit(f), -n, cap)
    result = one(f.vars)
    base = f
    while n:
        if n & 1:
            result = mul(result, base, cap)
        n >>= 1
        if n:
            base = mul(base, base, cap)
    return result


# --- coefficient access ---------------------------------------------------

def _check_degree(f: TruncatedSeries, degree: int, what: str) -> None:
    if degree > f.precision:
        raise PrecisionExhausted(f"{what}: degree {degree} exceeds precision {f.precision}",
                                 {"degree": degree, "precision": f.precision})


def coefficient(f: TruncatedSeries, exponents: Sequence[int]) -> Fraction:
    exponents = tuple(exponents)
    _check_degree(f, sum(exponents), "coefficient()")
    return to_fraction(f.poly.get(exponents, QQ.zero))


def constant_term(f: TruncatedSeries) -> Fraction:
    return coefficient(f, (0,) * len(f.vars))


def is_unit(f: TruncatedSeries) -> bool:
    return constant_term(f) != 0


def homogeneous_part(f: TruncatedSeries, degree: int) -> TruncatedSeries:
    _check_degree(f, degree, "homogeneous_part()")
    return TruncatedSeries(f.ring.from_dict({m: c for m, c in f.poly.items() if sum(m) == degree}), EXACT)


def leading_form(f: TruncatedSeries) -> TruncatedSeries:
    o = order(f)
    if not isinstance(o, int):
        raise PrecisionExhausted(f"leading_form(): order of series is {o}")
    return homogeneous_part(f, o)


def min_exponents(f: TruncatedSeries) -> Monomial:
    """Componentwise minimum of the exponents of the stored terms."""
    if not f.poly:
        raise PrecisionExhausted("min_exponents(): no stored terms")
    return monomial_min(*f.poly.keys())


def degree_in(f: TruncatedSeries, name: str) -> int:
    i = f.var_index(name)
    return max((m[i] for m in f.poly), default=0)


def min_degree_in(f: TruncatedSeries, names: Iterable[str]) -> Order:
    """Least summed exponent of ``names`` over the stored terms."""
    idx = [f.var_index(n) for n in names]
    if not f.poly:
        return EXACT if f.is_exact else UnknownOrder(f.precision + 1)
    return min(sum(m[i] for i in idx) for m in f.poly)


def monomial_divides(exponents: Sequence[int], f: TruncatedSeries) -> bool:
    exponents = tuple(exponents)
    return all(monomial_div(m, exponents) is not None for m in f.poly)


def divide_monomial(f: TruncatedSeries, exponents: Sequence[int]) -> TruncatedSeries:
    """Exact quotient f / x^exponents, known up to precision N - |exponents|."""
    exponents = tuple(exponents)
    out = {}
    for m, c in f.poly.items():
        q = monomial_div(m, exponents)
        if q is None:
            raise NotDivisible(f"divide_monomial(): {exponents} does not divide term {m}",
                               {"exponents": list(exponents), "term": list(m)})
        out[q] = c
    prec = f.precision - sum(exponents)
    if prec < 0:
        raise PrecisionExhausted(f"divide_monomial(): nothing certified after dividing by {exponents}")
    return TruncatedSeries(f.ring.from_dict(out), prec)


def multiply_monomial(f: TruncatedSeries, exponents: Sequence[int]) -> TruncatedSeries:
    exponents = tuple(exponents)
    out = {monomial_mul(m, exponents): c for m, c in f.poly.items()}
    return TruncatedSeries(f.ring.from_dict(out), f.precision + sum(exponents))


def restrict_zero(f: TruncatedSeries, names: Iterable[str]) -> TruncatedSeries:
    """f with the given variables set to 0 (still in the same ring)."""
    idx = [f.var_index(n) for n in names]
    return TruncatedSeries(f.ring.from_dict({m: c for m, c in f.poly.items()
                                             if all(m[i] == 0 for i in idx)}), f.precision)


def split_by(f: TruncatedSeries, predicate) -> tuple[TruncatedSeries, TruncatedSeries]:
    """Split f into (terms whose monomial satisfies predicate, the rest)."""
    yes, no = {}, {}
    for m, c in f.poly.items():
        (yes if predicate(m) else no)[m] = c
    R = f.ring
    return TruncatedSeries(R.from_dict(yes), f.precision), TruncatedSeries(R.from_dict(no), f.precision)


def monomial_and_unit(f: TruncatedSeries) -> tuple[Monomial, TruncatedSeries] | None:
    """Write f = x^m * w with w(0) != 0, or return None if f is not of that shape."""
    if not f.poly:
        return None
    m = min_exponents(f)
    w = divide_monomial(f, m)
    if w.precision < 0 or not w.poly.get((0,) * len(f.vars)):
        return None
    return m, w


def divides(f: TruncatedSeries, g: TruncatedSeries) -> bool:
    """Truncated divisibility f | g when f or g is a monomial times a unit."""
    _same_ring(f, g)
    split_f = monomial_and_unit(f)
    if split_f is not None:
        return monomial_divides(split_f[0], g)
    if monomial_and_unit(g) is not None:
        # divisors of a monomial times a unit are again of that shape
        return False
    raise WrongForm("divides(): neither series is a monomial times a unit")


# --- substitution -----------------------------------------------------------

def substitute(f: TruncatedSeries, images: Mapping[str, TruncatedSeries],
               target_vars: Sequence[str] | None = None) -> TruncatedSeries:
    """Compose f with the given images; variables without an image map to themselves."""
    if target_vars is None:
        if not images:
            return f
        target_vars = next(iter(images.values())).vars
    target_vars = tuple(target_vars)
    imgs = []
    for name in f.vars:
        img = images.get(name)
        imgs.append(variable(name, target_vars) if img is None else with_vars(img, target_vars))

    if f.is_exact:
        bound = EXACT
    else:
        o_min = min(order_bound(img) for img in imgs)
        bound = (f.precision + 1) * o_min - 1 if o_min != EXACT else EXACT
        if bound < 0:
            raise PrecisionExhausted(f"substitute(): a unit image into a series of precision {f.precision} certifies nothing",
                                     {"precision": f.precision})

    powers: dict[tuple[int, int], TruncatedSeries] = {}

    def img_power(i: int, e: int) -> TruncatedSeries:
        key = (i, e)
        if key not in powers:
            powers[key] = imgs[i] if e == 1 else mul(img_power(i, e - 1), imgs[i], bound)
        return powers[key]

    total = zero(target_vars)
    for m, c in f.poly.items():
        term = TruncatedSeries(series_ring(target_vars).ground_new(c), EXACT)
        for i, e in enumerate(m):
            if e:
                term = mul(term, img_power(i, e), bound)
        total = add(total, term)
    result = truncate(total, bound)
    if result.precision < 0:
        raise PrecisionExhausted("substitute(): no coefficient certifiable")
    return result


def translate(f: TruncatedSeries, name: str, value: Fraction | int) -> TruncatedSeries:
    """f with ``name`` replaced by ``name + value``."""
    image = add(variable(name, f.vars), constant(value, f.vars))
    return substitute(f, {name: image}, f.vars)


# --- units and roots --------------------------------------------------------

def rational_root(c: Fraction, q: int) -> Fraction:
    """The rational q-th root of c, or IrrationalRoot."""
    c = Fraction(c)
    if q == 1:
        return c
    if c < 0:
        if q % 2 == 0:
            raise IrrationalRoot(f"{c} has no real {q}-th root", {"value": str(c), "root": q})
        return -rational_root(-c, q)
    num, exact_num = integer_nthroot(c.numerator, q)
    den, exact_den = integer_nthroot(c.denominator, q)
    if not (exact_num and exact_den):
        raise IrrationalRoot(f"{c} is not a {q}-th power in QQ", {"value": str(c), "root": q})
    return Fraction(int(num), int(den))


def unit_power(f: TruncatedSeries, p: int, q: int = 1,
               precision: Precision | None = None) -> TruncatedSeries:
    """f^(p/q) for a unit f via the binomial series, exact to the working precision."""
    if q <= 0:
        raise ValueError(f"unit_power(): q must be positive, got {q}")
    c0 = constant_term(f)
    if c0 == 0:
        raise NonUnit("unit_power(): constant term vanishes", {"series": format_series(f)})
    lead = rational_root(c0, q) ** p
    h = sub(scale(f, 1 / c0), one(f.vars))
    if not h.poly and f.is_exact:
        return constant(lead, f.vars)
    working = DEFAULT_PRECISION if precision is None else precision
    limit = min(f.precision, working)
    exponent = Fraction(p, q)
    total = one(f.vars)
    h_k = one(f.vars)
    binom = Fraction(1)
    for k in range(1, int(limit) + 1):
        h_k = mul(h_k, h, limit)
        if not h_k.poly:
            break
        binom = binom * (exponent - (k - 1)) / k
        if binom:
            total = add(total, scale(h_k, binom))
    return truncate(scale(total, lead), limit)


def invert_unit(f: TruncatedSeries, precision: Precision | None = None) -> TruncatedSeries:
    return unit_power(f, -1, 1, precision)


def solve_fixed_point(name: str, target_vars: Sequence[str], step, limit: Precision) -> TruncatedSeries:
    """Solve ``name = step(name)`` for a series of positive order.

    ``step`` maps a guess to the next guess; each iteration must gain at
    least one certified degree, so ``limit`` + 1 iterations suffice.
    """
    guess = variable(name, target_vars)
    for _ in range(int(limit) + 2):
        nxt = truncate(step(guess), limit)
        if nxt == guess:
            break
        guess = nxt
    _LOGGER.debug(f"solve_fixed_point(): {name} = {format_series(guess)}")
    return guess


# --- formatting -------------------------------------------------------------

def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_series(f: TruncatedSeries, show_precision: bool = True) -> str:
    """Deterministic text: ascending degree, then descending lex on exponents."""
    items = sorted(f.terms().items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))
    out = ""
    for m, c in items:
        mono = _format_monomial(m, f.vars)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = format_coefficient(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_coefficient(mag)}*{mono}"
        if not out:
            out = f"-{body}" if sign == "-" else body
        else:
            out += f" {sign} {body}"
    if not out:
        out = "0"
    if show_precision and not f.is_exact:
        out += f" + O({f.precision + 1})"
    return out
