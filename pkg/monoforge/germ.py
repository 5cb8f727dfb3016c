"""Local germs (u, v) of a weakly prepared morphism and their normalized forms."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import IntEnum
from fractions import Fraction
from typing import Mapping, Sequence

from . import series as ps
from .const import BASE_VARIABLE, DEFAULT_PRECISION, EXACT, MARKER_NOT_APPLICABLE
from .exceptions import (
    IrrationalRoot,
    MalformedGerm,
    PrecisionExhausted,
    UnitChangeRequired,
)
from .series import Order, TruncatedSeries, UnknownOrder

_LOGGER = logging.getLogger(__name__)


class BaseType(IntEnum):
    ONE_POINT = 1   # u = 0 is a local equation of D_S
    TWO_POINT = 2   # uv = 0 is a local equation of D_S


@dataclass(frozen=True)
class NotApplicable:
    def __str__(self) -> str:
        return MARKER_NOT_APPLICABLE


NOT_APPLICABLE = NotApplicable()


@dataclass(frozen=True)
class MapGerm:
    u: TruncatedSeries
    v: TruncatedSeries
    exceptional_vars: tuple[str, ...]
    base_type: BaseType = BaseType.ONE_POINT
    precision: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if self.u.vars != self.v.vars:
            raise MalformedGerm(f"u and v use different variables {self.u.vars} / {self.v.vars}")
        if len(self.u.vars) not in (2, 3):
            raise MalformedGerm(f"germs live in dimension 2 or 3, got {self.u.vars}")
        unknown = set(self.exceptional_vars) - set(self.u.vars)
        if unknown:
            raise MalformedGerm(f"exceptional variables {sorted(unknown)} are not germ variables")
        ordered = tuple(n for n in self.u.vars if n in self.exceptional_vars)
        object.__setattr__(self, "exceptional_vars", ordered)
        object.__setattr__(self, "base_type", BaseType(self.base_type))

    @property
    def dim(self) -> int:
        return len(self.u.vars)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.u.vars

    @property
    def free_vars(self) -> tuple[str, ...]:
        return tuple(n for n in self.vars if n not in self.exceptional_vars)


def make_germ(u: str, v: str, names: Sequence[str], exceptional: Sequence[str],
              base: int = 1, precision: int = DEFAULT_PRECISION) -> MapGerm:
    """Build a germ from series literals."""
    names = tuple(names)
    return MapGerm(ps.parse_series(u, names), ps.parse_series(v, names),
                   tuple(exceptional), BaseType(base), precision)


def apply_substitution(g: MapGerm, images: Mapping[str, TruncatedSeries],
                       exceptional: Sequence[str] | None = None,
                       base_type: BaseType | None = None) -> MapGerm:
    """The germ in new coordinates given by ``images`` (old var -> series in the same names)."""
    u = ps.substitute(g.u, images, g.vars)
    v = ps.substitute(g.v, images, g.vars)
    return MapGerm(u, v,
                   tuple(g.exceptional_vars if exceptional is None else exceptional),
                   g.base_type if base_type is None else base_type,
                   g.precision)


def _monomial_part(g: MapGerm) -> tuple[tuple[int, ...], TruncatedSeries]:
    split = ps.monomial_and_unit(g.u)
    if split is None:
        raise MalformedGerm(f"u = {ps.format_series(g.u)} is not a monomial times a unit")
    mono, unit = split
    for name, e in zip(g.vars, mono):
        if e and name not in g.exceptional_vars:
            raise MalformedGerm(f"u is divisible by the non exceptional variable {name}",
                                {"u": ps.format_series(g.u), "exceptional": list(g.exceptional_vars)})
    if not any(mono):
        raise MalformedGerm(f"u = {ps.format_series(g.u)} is a unit, the point does not lie over D_S")
    return mono, unit


def classify_point(g: MapGerm) -> int:
    """Number of exceptional variables dividing u (1, 2 or 3)."""
    mono, _ = _monomial_part(g)
    count = sum(1 for e in mono if e)
    if count < len(g.exceptional_vars) and g.base_type == BaseType.ONE_POINT:
        raise MalformedGerm("every exceptional variable must divide u over a 1 point of the base",
                            {"u": ps.format_series(g.u), "exceptional": list(g.exceptional_vars)})
    return count


def absorb_unit(g: MapGerm, strict: bool = False) -> tuple[MapGerm, dict[str, TruncatedSeries], Fraction]:
    """Change coordinates so that u = lambda * monomial exactly.

    Returns the new germ, the images of the old variables and lambda
    (1 when its root is rational and could be absorbed too).
    """
    mono, unit = _monomial_part(g)
    names = g.vars
    lam = ps.constant_term(unit)
    images: dict[str, TruncatedSeries] = {}
    current = g

    w1 = ps.scale(unit, 1 / lam)
    if w1 != ps.one(names):
        pivot = next(i for i, e in enumerate(mono) if e)
        x = names[pivot]
        big_w = ps.unit_power(w1, -1, mono[pivot], g.precision)
        x_bar = ps.variable(x, names)
        limit = min(g.precision, big_w.precision)
        solution = ps.solve_fixed_point(
            x, names, lambda guess: ps.mul(x_bar, ps.substitute(big_w, {x: guess}, names), limit), limit)
        images[x] = solution
        current = apply_substitution(g, images)
        expected = ps.scale(ps.monomial(mono, names), lam)
        if ps.truncate(expected, current.u.precision) != current.u:
            raise PrecisionExhausted("absorb_unit(): unit absorption did not converge",
                                     {"u": ps.format_series(current.u)})
        _LOGGER.debug(f"absorb_unit(): {x} = {ps.format_series(solution)}")
        current = replace(current, u=expected)

    if lam != 1:
        for i, e in enumerate(mono):
            if not e:
                continue
            try:
                r = ps.rational_root(lam, e)
            except IrrationalRoot:
                continue
            name = names[i]
            scaled = ps.scale(ps.variable(name, names), 1 / r)
            current = replace(apply_substitution(current, {name: scaled}), u=ps.monomial(mono, names))
            images = {k: ps.substitute(img, {name: scaled}, names) for k, img in images.items()}
            images.setdefault(name, scaled)
            lam = Fraction(1)
            break
        else:
            if strict:
                raise UnitChangeRequired(f"u = {lam} * monomial needs an irrational root of {lam}",
                                         {"scale": str(lam), "exponents": list(mono)})
            _LOGGER.debug(f"absorb_unit(): keeping scale {lam} on u")
    return current, images, lam


@dataclass(frozen=True)
class NormalizedForm:
    point_type: int
    monomial_vars: tuple[str, ...]
    a: tuple[int, ...]
    m: int
    factor: tuple[int, ...]
    P: TruncatedSeries
    F: TruncatedSeries
    germ: MapGerm
    u_scale: Fraction = Fraction(1)
    degenerate: bool = False
    absorption: dict[str, TruncatedSeries] = field(default_factory=dict, compare=False)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.germ.vars

    @property
    def free_vars(self) -> tuple[str, ...]:
        return tuple(n for n in self.vars if n not in self.monomial_vars)

    def exponent_vector(self, exps: Sequence[int]) -> tuple[int, ...]:
        """Embed exponents of the monomial variables into a full exponent vector."""
        full = dict(zip(self.monomial_vars, exps))
        return tuple(full.get(n, 0) for n in self.vars)

    def base_monomial(self) -> TruncatedSeries:
        return ps.monomial(self.exponent_vector(self.a), self.vars)

    def p_order(self) -> Order:
        return ps.order(self.P)

    def reconstruct(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        """(u, v) rebuilt from the form, in the normalized coordinates."""
        names = self.vars
        base = self.base_monomial()
        u = ps.scale(ps.power(base, self.m), self.u_scale)
        p_image = ps.substitute(self.P, {BASE_VARIABLE: base}, names)
        v = ps.add(p_image, ps.multiply_monomial(self.F, self.exponent_vector(self.factor)))
        return u, v


def _p_terms(v: TruncatedSeries, base_exps: tuple[int, ...]) -> tuple[TruncatedSeries, TruncatedSeries, dict[int, Fraction]]:
    def is_base_power(m: tuple[int, ...]) -> bool:
        j = None
        for e, b in zip(m, base_exps):
            if b == 0:
                if e:
                    return False
                continue
            if e % b:
                return False
            if j is None:
                j = e // b
            elif j != e // b:
                return False
        return True

    pure, rest = ps.split_by(v, is_base_power)
    k = next(i for i, b in enumerate(base_exps) if b)
    coeffs = {m[k] // base_exps[k]: c for m, c in pure.terms().items()}
    return pure, rest, coeffs


def normalize(g: MapGerm, strict: bool = False) -> NormalizedForm:
    """v = P(base monomial) + (factor monomial) * F with F free of base powers."""
    classify_point(g)
    current, absorption, lam = absorb_unit(g, strict)
    names = current.vars
    mono, _ = _monomial_part(current)
    monomial_vars = tuple(n for n, e in zip(names, mono) if e)
    exps = tuple(e for e in mono if e)
    m = math.gcd(*exps)
    a = tuple(e // m for e in exps)
    base_exps = tuple(e // m for e in mono)
    base_degree = sum(a)

    _, rest, coeffs = _p_terms(current.v, base_exps)
    if current.v.is_exact:
        p_precision = EXACT
    else:
        p_precision = current.v.precision // base_degree
    P = ps.from_terms({(j,): c for j, c in coeffs.items() if j <= p_precision}, (BASE_VARIABLE,), p_precision)

    if rest.is_zero():
        _LOGGER.debug(f"normalize(): v is a series in the base monomial to precision - degenerate")
        factor = (0,) * len(monomial_vars)
        F = rest
        degenerate = True
    else:
        mins = ps.min_exponents(rest)
        factor = tuple(mins[names.index(n)] for n in monomial_vars)
        F = ps.divide_monomial(rest, tuple(mins[i] if names[i] in monomial_vars else 0 for i in range(len(names))))
        degenerate = False

    nf = NormalizedForm(
        point_type=len(monomial_vars),
        monomial_vars=monomial_vars,
        a=a,
        m=m,
        factor=factor,
        P=P,
        F=F,
        germ=current,
        u_scale=lam,
        degenerate=degenerate,
        absorption=absorption,
    )
    _LOGGER.debug(f"normalize(): {nf.point_type} point a={a} m={m} factor={factor} "
                  f"P={ps.format_series(P)} F={ps.format_series(F)}")
    return nf


@dataclass(frozen=True)
class InvariantVector:
    nu: Order
    gamma: Order | NotApplicable
    tau: int | NotApplicable
    leading_form: TruncatedSeries | None


def invariants(nf: NormalizedForm) -> InvariantVector:
    """nu = ord F, gamma = ord of F on the exceptional locus, tau = top free degree of L_p."""
    if nf.degenerate:
        _LOGGER.warning("invariants(): degenerate normal form, nu is not determined")
        unknown = UnknownOrder(nf.F.precision + 1)
        return InvariantVector(unknown, unknown, NOT_APPLICABLE, None)
    nu = ps.order(nf.F)
    if not isinstance(nu, int):
        raise PrecisionExhausted(f"invariants(): nu = {nu} is not certified", {"F": ps.format_series(nf.F)})
    lead = ps.leading_form(nf.F)
    if nf.point_type == 3:
        return InvariantVector(nu, NOT_APPLICABLE, NOT_APPLICABLE, lead)
    gamma = ps.order(ps.restrict_zero(nf.F, nf.monomial_vars))
    free = [nf.vars.index(n) for n in nf.free_vars]
    tau = max(sum(mon[i] for i in free) for mon in lead.poly)
    return InvariantVector(nu, gamma, tau, lead)


def a_r_violations(nf: NormalizedForm, r: int) -> list[str]:
    """The pointwise A_r conditions that fail at p, empty when p satisfies all of them.

    1 and 2 points need nu <= r, 3 points nu <= r - 1; a 1 point with nu = r
    needs gamma = r and a 2 point with nu = r needs tau > 0.
    """
    if r < 2:
        raise MalformedGerm(f"a_r_violations(): r={r} must be at least 2")
    inv = invariants(nf)
    if not isinstance(inv.nu, int):
        raise PrecisionExhausted(f"a_r_violations(): nu = {inv.nu} is not certified")
    if nf.point_type == 3:
        return [f"3 point with nu={inv.nu} > r-1"] if inv.nu > r - 1 else []
    if inv.nu > r:
        return [f"{nf.point_type} point with nu={inv.nu} > r"]
    if inv.nu < r:
        return []
    if nf.point_type == 1:
        if isinstance(inv.gamma, UnknownOrder):
            raise PrecisionExhausted(f"a_r_violations(): gamma = {inv.gamma} is not certified")
        return [] if inv.gamma == r else [f"1 point with nu=r and gamma={inv.gamma}"]
    return [] if inv.tau > 0 else ["2 point with nu=r and tau=0"]


@dataclass(frozen=True)
class CoordinateIdeal:
    """The ideal (first, second - phi), phi a series in the remaining variables."""
    first: str
    second: str
    phi: TruncatedSeries | None = None

    def __str__(self) -> str:
        if self.phi is None:
            return f"({self.first},{self.second})"
        return f"({self.first},{self.second}-({ps.format_series(self.phi, False)}))"


def straighten_ideal(f: TruncatedSeries, ideal: CoordinateIdeal) -> TruncatedSeries:
    """f in coordinates where the ideal is generated by two variables."""
    if ideal.phi is None:
        return f
    phi = ps.with_vars(ideal.phi, f.vars)
    if ps.degree_in(phi, ideal.second) or ps.degree_in(phi, ideal.first):
        raise MalformedGerm(f"phi must not involve {ideal.first} or {ideal.second}")
    image = ps.add(ps.variable(ideal.second, f.vars), phi)
    return ps.substitute(f, {ideal.second: image}, f.vars)


def curve_membership(nf: NormalizedForm, ideal: CoordinateIdeal) -> int:
    """Largest s (up to precision) with F in ideal^s."""
    F = straighten_ideal(nf.F, ideal)
    s = ps.min_degree_in(F, (ideal.first, ideal.second))
    if s == EXACT:
        raise PrecisionExhausted("curve_membership(): F vanishes, every power of the ideal contains it")
    if isinstance(s, UnknownOrder):
        _LOGGER.debug(f"curve_membership(): F vanishes to precision, reporting {F.precision}")
        return int(F.precision)
    return int(s if F.is_exact else min(s, F.precision))


# --- coordinate changes used to probe invariance --------------------------------

def generic_point(g: MapGerm, name: str, value: Fraction | int = 1) -> MapGerm:
    """The germ at the nearby point where ``name`` takes ``value``.

    The translated variable stops being exceptional.
    """
    u = ps.translate(g.u, name, value)
    v = ps.translate(g.v, name, value)
    exceptional = tuple(n for n in g.exceptional_vars if n != name)
    return MapGerm(u, v, exceptional, g.base_type, g.precision)


def swap_vars(g: MapGerm, first: str, second: str) -> MapGerm:
    names = g.vars
    images = {first: ps.variable(second, names), second: ps.variable(first, names)}
    return apply_substitution(g, images)


def rescale_functions(g: MapGerm, alpha: TruncatedSeries, beta: TruncatedSeries,
                      gamma: TruncatedSeries | None = None) -> MapGerm:
    """(u, v) -> (alpha*u, beta*v + gamma*u) with alpha, beta units."""
    if g.base_type == BaseType.TWO_POINT and gamma is not None:
        raise MalformedGerm("v -> v + gamma*u is not permissible over a 2 point of the base")
    u = ps.mul(alpha, g.u)
    v = ps.mul(beta, g.v)
    if gamma is not None:
        v = ps.add(v, ps.mul(gamma, g.u))
    return MapGerm(u, v, g.exceptional_vars, g.base_type, g.precision)
