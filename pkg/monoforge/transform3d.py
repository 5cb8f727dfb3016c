"""Blowup charts of 3-fold germs and the descent harness run along them."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import series as ps
from .const import EXACT
from .exceptions import CenterNotInLocus, MalformedGerm, MonoforgeError
from .germ import (
    BaseType,
    CoordinateIdeal,
    InvariantVector,
    MapGerm,
    NormalizedForm,
    a_r_violations,
    apply_substitution,
    curve_membership,
    invariants,
    normalize,
    straighten_ideal,
)
from .series import TruncatedSeries

_LOGGER = logging.getLogger(__name__)

POINT_KIND = "point"
CURVE_KIND = "curve"
TWO_CURVE_KIND = "2 curve"
ONE_POINT_CURVE_KIND = "curve through 1 points"


@dataclass(frozen=True)
class PointCenter:
    def __str__(self) -> str:
        return "point"


@dataclass(frozen=True)
class CurveCenter:
    """The curve (first = second - phi = 0)."""
    first: str
    second: str
    phi: TruncatedSeries | None = None

    @property
    def ideal(self) -> CoordinateIdeal:
        return CoordinateIdeal(self.first, self.second, self.phi)

    def __str__(self) -> str:
        return str(self.ideal)


BlowupCenter3D = PointCenter | CurveCenter


@dataclass(frozen=True)
class ChartMap3D:
    label: str
    substitution: Mapping[str, TruncatedSeries]
    exceptional: tuple[str, ...]
    kind: str = POINT_KIND
    translations: tuple[tuple[str, Fraction], ...] = ()


@dataclass
class ChartEdge:
    """One chart of a blowup with the germ it produces (or the reason it could not)."""
    chart: ChartMap3D
    raw: MapGerm | None = None
    nf: NormalizedForm | None = None
    error: MonoforgeError | None = None

    @property
    def germ(self) -> MapGerm | None:
        return None if self.nf is None else self.nf.germ

    @property
    def renormalizer(self) -> dict[str, TruncatedSeries]:
        return {} if self.nf is None else dict(self.nf.absorption)


def _label(images: Mapping[str, TruncatedSeries]) -> str:
    return ", ".join(f"{name}={ps.format_series(img, False)}" for name, img in images.items())


def _blowup_images(names: Sequence[str], lead: str, others: Sequence[str],
                   shifts: Mapping[str, Fraction]) -> dict[str, TruncatedSeries]:
    lead_var = ps.variable(lead, names)
    images = {}
    for name in others:
        shifted = ps.add(ps.variable(name, names), ps.constant(shifts.get(name, 0), names))
        images[name] = ps.mul(lead_var, shifted)
    return images


def _chart_exceptional(exceptional: Sequence[str], lead: str, shifts: Mapping[str, Fraction]) -> tuple[str, ...]:
    kept = {n for n in exceptional if n != lead and not shifts.get(n, 0)}
    return tuple(sorted(kept | {lead}))


def point_chart(names: Sequence[str], exceptional: Sequence[str], lead: str,
                shifts: Mapping[str, Fraction] | None = None) -> ChartMap3D:
    """The chart of the blowup of the origin where ``lead`` generates the exceptional divisor."""
    names = tuple(names)
    shifts = {k: Fraction(v) for k, v in (shifts or {}).items() if v}
    if lead in shifts:
        raise MalformedGerm(f"the leading variable {lead} cannot be translated")
    images = _blowup_images(names, lead, [n for n in names if n != lead], shifts)
    return ChartMap3D(_label(images), images, _chart_exceptional(exceptional, lead, shifts), POINT_KIND,
                      tuple(sorted(shifts.items())))


def curve_chart(names: Sequence[str], exceptional: Sequence[str], center: CurveCenter, lead: str,
                alpha: Fraction | int = 0) -> ChartMap3D:
    names = tuple(names)
    if lead not in (center.first, center.second):
        raise MalformedGerm(f"{lead} does not generate the ideal {center}")
    other = center.second if lead == center.first else center.first
    shifts = {other: Fraction(alpha)} if alpha else {}
    images = _blowup_images(names, lead, [other], shifts)
    chart = ChartMap3D(_label(images), images, _chart_exceptional(exceptional, lead, shifts), CURVE_KIND,
                       tuple(sorted(shifts.items())))
    if center.phi is None:
        return chart
    straighten = {center.second: ps.add(ps.variable(center.second, names), ps.with_vars(center.phi, names))}
    return compose_charts(ChartMap3D(_label(straighten), straighten, tuple(exceptional), CURVE_KIND), chart)


def compose_charts(first: ChartMap3D, second: ChartMap3D) -> ChartMap3D:
    """The chart ``first`` followed by ``second`` as a single substitution."""
    names = next(iter(second.substitution.values())).vars
    images = {}
    for name, img in first.substitution.items():
        images[name] = ps.substitute(img, second.substitution, names)
    for name, img in second.substitution.items():
        images.setdefault(name, img)
    return ChartMap3D(f"{first.label}; {second.label}", images, second.exceptional, second.kind,
                      first.translations + second.translations)


def apply_chart(g: MapGerm, chart: ChartMap3D) -> MapGerm:
    return apply_substitution(g, chart.substitution, chart.exceptional)


def _edge(g: MapGerm, chart: ChartMap3D) -> ChartEdge:
    edge = ChartEdge(chart)
    try:
        edge.raw = apply_chart(g, chart)
        edge.nf = normalize(edge.raw)
    except MonoforgeError as err:
        _LOGGER.debug(f"_edge(): chart {chart.label} failed: {err.message}")
        edge.error = err
    return edge


def quadratic_charts(g: MapGerm, translations: Iterable[tuple[Fraction | int, Fraction | int]] = ()) -> list[ChartEdge]:
    """The three monomial charts of the blowup of the origin, plus translated first charts.

    A translation (alpha, beta) selects the point
    x = x1, y = x1*(y1 + alpha), z = x1*(z1 + beta) in the first chart.
    """
    names = g.vars
    charts = [point_chart(names, g.exceptional_vars, lead) for lead in names]
    seen = set()
    for pair in translations:
        shifts = dict(zip(names[1:], (Fraction(t) for t in pair)))
        key = tuple(sorted(shifts.items()))
        if key in seen or not any(shifts.values()):
            continue
        seen.add(key)
        charts.append(point_chart(names, g.exceptional_vars, names[0], shifts))
    edges = [_edge(g, chart) for chart in charts]
    _LOGGER.debug(f"quadratic_charts(): {len(edges)} charts, {sum(e.error is not None for e in edges)} failed")
    return edges


def permissible_center(g: MapGerm, center: BlowupCenter3D) -> str:
    """The kind of permissible center through p: a point, a 2 curve or a curve through 1 points.

    Raises when the center is not weakly permissible, i.e. not a curve in the
    exceptional divisor. The coordinate curves accepted here make SNCs with the
    2 curves at p; whether they also do so together with S_r is a global
    question the caller answers.
    """
    if isinstance(center, PointCenter):
        return POINT_KIND
    exceptional = set(g.exceptional_vars)
    for name in (center.first, center.second):
        if name not in g.vars:
            raise MalformedGerm(f"center variable {name} is not a germ variable")
    if center.phi is not None and center.second in exceptional:
        raise MalformedGerm(f"{center.second} is exceptional and cannot be translated by phi")
    if center.phi is None and {center.first, center.second} <= exceptional:
        return TWO_CURVE_KIND
    if center.first not in exceptional and (center.phi is not None or center.second not in exceptional):
        raise CenterNotInLocus(f"the curve {center} does not lie in the exceptional divisor",
                               {"exceptional": list(g.exceptional_vars)})
    return ONE_POINT_CURVE_KIND


def monoidal_charts(g: MapGerm, center: CurveCenter, translations: Iterable[Fraction | int] = (),
                    expected_r: int | None = None) -> list[ChartEdge]:
    """Charts of the blowup of a coordinate curve through the origin."""
    names = g.vars
    permissible_center(g, center)
    if expected_r is not None:
        nf = normalize(g)
        s = curve_membership(nf, center.ideal)
        if s < expected_r:
            raise CenterNotInLocus(f"F lies in the {s}-th power of {center}, expected {expected_r}",
                                   {"membership": s, "expected": expected_r, "center": str(center)})
    charts = [curve_chart(names, g.exceptional_vars, center, center.first),
              curve_chart(names, g.exceptional_vars, center, center.second)]
    for alpha in dict.fromkeys(Fraction(a) for a in translations):
        if alpha:
            charts.append(curve_chart(names, g.exceptional_vars, center, center.first, alpha))
    return [_edge(g, chart) for chart in charts]


# --- descent harness ----------------------------------------------------------

@dataclass(frozen=True)
class TheoremCheck:
    statement: str
    passed: bool
    detail: str
    certified: bool = True


@dataclass
class TheoremReport:
    parent: str
    center: str
    checks: list[TheoremCheck] = field(default_factory=list)
    untested: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Every certified check passed; uncertified ones are counted apart."""
        return not self.failures

    @property
    def failures(self) -> list[TheoremCheck]:
        return [c for c in self.checks if c.certified and not c.passed]

    @property
    def uncertified(self) -> list[TheoremCheck]:
        return [c for c in self.checks if not c.certified]


@dataclass(frozen=True)
class _PointData:
    kind: int
    nu: int | None
    gamma: int | float | None   # EXACT when F vanishes on the free axis
    tau: int | None
    inv: InvariantVector | None


def _certified(value, allow_exact: bool = False) -> int | float | None:
    if isinstance(value, int) or (allow_exact and value == EXACT):
        return value
    return None


def _point_data(nf: NormalizedForm) -> _PointData:
    inv = invariants(nf)
    gamma = _certified(inv.gamma, allow_exact=True)
    return _PointData(nf.point_type, _certified(inv.nu), gamma, _certified(inv.tau), inv)


def _is_certified(d: _PointData) -> bool:
    return d.nu is not None and (d.kind == 3 or (d.gamma is not None and d.tau is not None))


class _Checker:
    def __init__(self, report: TheoremReport, label: str) -> None:
        self.report = report
        self.label = label

    def expect(self, statement: str, condition: bool, detail: str) -> None:
        self.report.checks.append(TheoremCheck(f"{statement}", condition, f"{self.label}: {detail}"))

    def uncertified(self, statement: str, detail: str) -> None:
        self.report.checks.append(TheoremCheck(statement, False, f"{self.label}: {detail}", certified=False))


def _point_checks(p: _PointData, q: _PointData, c: _Checker) -> None:
    r, r1 = p.nu, q.nu
    # quadratic transforms, pointwise order bounds
    if p.kind == 1:
        c.expect(f"1 point -> {q.kind} point: r1 <= r", r1 <= r, f"r={r} r1={r1}")
        if q.kind == 2 and r1 == r:
            c.expect("1 point -> 2 point: r1 = r implies tau(q) > 0", q.tau > 0, f"tau(q)={q.tau}")
    elif p.kind == 2:
        if q.kind == 1:
            c.expect("2 point -> 1 point: r1 <= r + 1", r1 <= r + 1, f"r={r} r1={r1}")
            if r1 == r + 1:
                c.expect("2 point -> 1 point: r1 = r + 1 implies gamma(q) = r + 1", q.gamma == r + 1,
                         f"gamma(q)={q.gamma}")
        else:
            c.expect(f"2 point -> {q.kind} point: r1 <= r", r1 <= r, f"r={r} r1={r1}")
    else:
        if q.kind in (1, 2):
            c.expect(f"3 point -> {q.kind} point: r1 <= r + 1", r1 <= r + 1, f"r={r} r1={r1}")
            if r1 == r + 1 and q.kind == 1:
                c.expect("3 point -> 1 point: r1 = r + 1 implies gamma(q) = r + 1", q.gamma == r + 1,
                         f"gamma(q)={q.gamma}")
            if r1 == r + 1 and q.kind == 2:
                c.expect("3 point -> 2 point: r1 = r + 1 implies tau(q) > 0", q.tau > 0, f"tau(q)={q.tau}")
        else:
            c.expect("3 point -> 3 point: r1 <= r", r1 <= r, f"r={r} r1={r1}")
            lead_vars = {i for m in p.inv.leading_form.poly for i, e in enumerate(m) if e}
            if r >= 1 and len(lead_vars) == 3:
                c.expect("3 point with L(x,y,z) -> 3 point: r1 <= r - 1", r1 <= r - 1, f"r={r} r1={r1}")

    # refinements with the tau and gamma hypotheses
    if p.kind == 1:
        if q.kind == 1:
            if p.tau < r:
                c.expect("1 point, tau(p) < r -> 1 point: r1 < r", r1 < r, f"tau(p)={p.tau} r={r} r1={r1}")
            if r1 == r:
                c.expect("1 point -> 1 point: r1 = r implies tau(q) = r", q.tau == r, f"tau(q)={q.tau}")
            c.expect("1 point -> 1 point: gamma(q) <= r", q.gamma <= r, f"gamma(q)={q.gamma} r={r}")
        elif q.kind == 2:
            if r1 == r:
                c.expect("1 point -> 2 point: r1 = r implies tau(p) <= tau(q)", p.tau <= q.tau,
                         f"tau(p)={p.tau} tau(q)={q.tau}")
            if p.gamma == r:
                c.expect("1 point, gamma(p) = r -> 2 point: gamma(q) <= r", q.gamma <= r, f"gamma(q)={q.gamma}")
    elif p.kind == 2 and p.tau >= 1:
        if q.kind == 1:
            c.expect("2 point, tau(p) >= 1 -> 1 point: r1 <= r and gamma(q) <= r",
                     r1 <= r and q.gamma <= r, f"r={r} r1={r1} gamma(q)={q.gamma}")
        elif q.kind == 2:
            if r1 == r:
                c.expect("2 point, tau(p) >= 1 -> 2 point: r1 = r implies tau(p) <= tau(q)", p.tau <= q.tau,
                         f"tau(p)={p.tau} tau(q)={q.tau}")
            if p.gamma == r:
                c.expect("2 point, gamma(p) = r -> 2 point: gamma(q) <= r", q.gamma <= r, f"gamma(q)={q.gamma}")
        else:
            c.expect("2 point, tau(p) >= 1 -> 3 point: r1 <= r - tau(p)", r1 <= r - p.tau,
                     f"r={r} tau(p)={p.tau} r1={r1}")


def _only_first_power(nf: NormalizedForm, center: CurveCenter, s: int) -> bool:
    """F = tau'(y) * first^s mod ideal^(s+1): no second in the degree s part."""
    F = straighten_ideal(nf.F, center.ideal)
    i, k = F.var_index(center.first), F.var_index(center.second)
    return all(m[k] == 0 for m in F.poly if m[i] + m[k] == s)


def _curve_checks(p: _PointData, nf_p: NormalizedForm, center: CurveCenter, curve_r: int,
                  children: Sequence[tuple[_PointData, ChartEdge]], report: TheoremReport) -> None:
    r = curve_r
    two_curve = permissible_center(nf_p.germ, center) == TWO_CURVE_KIND
    membership = curve_membership(nf_p, center.ideal)
    if two_curve:
        if membership < r - 1:
            report.untested.append(f"2 curve blowup: F is not in I^{r - 1} at p")
            return
        for q, edge in children:
            c = _Checker(report, edge.chart.label)
            if p.kind == 2 and p.nu == r - 1:
                if q.kind == 1:
                    c.expect("2 curve, 2 point with nu = r-1 -> 1 point: nu <= r and gamma <= r",
                             q.nu <= r and q.gamma <= r, f"nu={q.nu} gamma={q.gamma} r={r}")
                else:
                    c.expect("2 curve, 2 point with nu = r-1 -> 2 point: nu <= r-1", q.nu <= r - 1,
                             f"nu={q.nu} r={r}")
            elif p.kind == 2 and p.nu == r and p.tau > 0:
                if q.kind == 1:
                    c.expect("2 curve, 2 point with nu = r -> 1 point: nu <= r, nu = r implies gamma = r",
                             q.nu <= r and (q.nu < r or q.gamma == r), f"nu={q.nu} gamma={q.gamma}")
                else:
                    c.expect("2 curve, 2 point with nu = r -> 2 point: nu <= r, nu = r implies tau > 0",
                             q.nu <= r and (q.nu < r or q.tau > 0), f"nu={q.nu} tau={q.tau}")
            elif p.kind == 3 and p.nu == r - 1:
                if q.kind == 2:
                    c.expect("2 curve, 3 point with nu = r-1 -> 2 point: nu <= r and gamma <= r",
                             q.nu <= r and q.gamma <= r, f"nu={q.nu} gamma={q.gamma}")
                elif q.kind == 3:
                    c.expect("2 curve, 3 point with nu = r-1 -> 3 point: nu <= r-1", q.nu <= r - 1, f"nu={q.nu}")
        report.untested.append("2 curve blowup over points of S_r: statements about the closure of S_r")
        return

    if membership >= r and p.nu == r:
        one_points_high = 0
        two_points_high = 0
        for q, edge in children:
            c = _Checker(report, edge.chart.label)
            if p.kind == 1 and p.gamma == r:
                if q.kind == 1:
                    c.expect("r big curve, 1 point with gamma = r -> 1 point: gamma <= r", q.gamma <= r,
                             f"gamma={q.gamma}")
                    one_points_high += q.gamma > r - 1
                else:
                    c.expect("r big curve, 1 point with gamma = r -> 2 point: nu = 0", q.nu == 0, f"nu={q.nu}")
            elif p.kind == 1:
                if q.kind == 1:
                    c.expect("r big curve, 1 point with gamma != r -> 1 point: gamma < r", q.gamma < r,
                             f"gamma={q.gamma}")
                else:
                    c.expect("r big curve, 1 point with gamma != r -> 2 point: nu <= r-1", q.nu <= r - 1,
                             f"nu={q.nu}")
            elif p.kind == 2:
                if p.gamma == r:
                    if q.kind == 2:
                        c.expect("r big curve, 2 point with gamma = r -> 2 point: nu <= r and gamma <= r",
                                 q.nu <= r and q.gamma <= r, f"nu={q.nu} gamma={q.gamma}")
                        two_points_high += q.gamma > r - 1
                    else:
                        c.expect("r big curve, 2 point with gamma = r -> 3 point: nu = 0", q.nu == 0, f"nu={q.nu}")
                if p.tau > 0:
                    if q.kind == 2:
                        c.expect("r big curve, 2 point with tau > 0 -> 2 point: gamma <= r", q.gamma <= r,
                                 f"gamma={q.gamma}")
                    else:
                        c.expect("r big curve, 2 point with tau > 0 -> 3 point: nu <= r - tau(p)",
                                 q.nu <= r - p.tau, f"nu={q.nu} tau(p)={p.tau}")
        c = _Checker(report, "all charts")
        if p.kind == 1 and p.gamma == r:
            c.expect("r big curve: at most one 1 point with gamma > r-1", one_points_high <= 1,
                     f"count={one_points_high}")
        if p.kind == 2 and p.gamma == r:
            c.expect("r big curve: at most one 2 point with gamma > r-1", two_points_high <= 1,
                     f"count={two_points_high}")
        return

    if p.kind == 2 and p.nu == r - 1 and membership == r - 1 and _only_first_power(nf_p, center, r - 1):
        z_power = center.phi is None and center.second in nf_p.vars
        gamma_r = p.gamma == r if z_power else False
        for q, edge in children:
            c = _Checker(report, edge.chart.label)
            if q.kind == 2:
                c.expect("r small curve, 2 point with nu = r-1 -> 2 point: nu = 0", q.nu == 0, f"nu={q.nu}")
            elif q.kind == 3:
                c.expect("r small curve, 2 point with nu = r-1 -> 3 point: nu <= r-1", q.nu <= r - 1, f"nu={q.nu}")
                if gamma_r:
                    c.expect("r small curve with gamma = r, 2 point with nu = r-1 -> 3 point: nu <= 1",
                             q.nu <= 1, f"nu={q.nu}")
        return
    report.untested.append(f"curve blowup at a {p.kind} point with nu={p.nu}, membership={membership}, r={r}")


def check_descent(parent: MapGerm, edges: Sequence[ChartEdge], center: BlowupCenter3D | None = None,
                  curve_r: int | None = None) -> TheoremReport:
    """Check every applicable order inequality on the edges of one blowup.

    ``curve_r`` is the r for which the curve center is asserted to be r big,
    r-1 big or r small; it is required for curve centers.
    """
    center = center or PointCenter()
    report = TheoremReport(parent=f"u={ps.format_series(parent.u)}, v={ps.format_series(parent.v)}",
                           center=str(center))
    nf_p = normalize(parent)
    p = _point_data(nf_p)
    if not _is_certified(p):
        report.checks.append(TheoremCheck("parent invariants certified", False,
                                          f"nu(p)={p.inv.nu} gamma(p)={p.inv.gamma} tau(p)={p.inv.tau}",
                                          certified=False))
        return report

    children: list[tuple[_PointData, ChartEdge]] = []
    for edge in edges:
        if edge.nf is None:
            report.untested.append(f"{edge.chart.label}: {edge.error.message if edge.error else 'no germ'}")
            continue
        q = _point_data(edge.nf)
        checker = _Checker(report, edge.chart.label)
        if not _is_certified(q):
            checker.uncertified("child invariants certified",
                                f"nu(q)={q.inv.nu} gamma(q)={q.inv.gamma} tau(q)={q.inv.tau}")
            continue
        children.append((q, edge))

    if isinstance(center, PointCenter):
        for q, edge in children:
            _point_checks(p, q, _Checker(report, edge.chart.label))
        report.untested.append("closure of S_(r+1) along the exceptional plane")
    else:
        if curve_r is None:
            raise MalformedGerm("check_descent(): curve centers need the asserted r")
        kind = permissible_center(nf_p.germ, center)
        if curve_r >= 2:
            violated = a_r_violations(nf_p, curve_r)
            if violated:
                _LOGGER.debug(f"check_descent(): A_{curve_r} fails at p: {violated}")
                report.untested.append(f"A_{curve_r} fails at p ({'; '.join(violated)}): S_r statements do not apply")
        if kind == ONE_POINT_CURVE_KIND:
            report.untested.append(f"{center} together with S_r makes SNCs with the 2 curves")
        _curve_checks(p, nf_p, center, curve_r, children, report)

    for failed in report.failures:
        _LOGGER.error(f"check_descent(): {failed.statement} fails on certified data ({failed.detail})")
    if report.uncertified:
        _LOGGER.debug(f"check_descent(): {len(report.uncertified)} checks left uncertified")
    return report


# --- randomized corpora ---------------------------------------------------------

CELLS: tuple[tuple[int, int], ...] = ((1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3))


@dataclass
class CorpusReport:
    cases: dict[tuple[int, int], int] = field(default_factory=dict)
    target: int = 0
    checks: int = 0
    uncertified: int = 0
    failures: list[tuple[str, TheoremCheck]] = field(default_factory=list)

    @property
    def underfilled(self) -> list[tuple[int, int]]:
        return [cell for cell, n in self.cases.items() if n < self.target]

    @property
    def ok(self) -> bool:
        return not self.failures and not self.underfilled


def random_germ(rng: random.Random, point_type: int, nu_max: int = 4, degree: int = 6,
                precision: int = 24) -> MapGerm:
    """A random normalized germ u = (monomial)^m, v = P + monomial * F with ord F <= nu_max."""
    names = ("x", "y", "z")
    exceptional = names[:point_type]
    a = [rng.randint(1, 3) for _ in exceptional]
    exps_u = tuple(a) + (0,) * (3 - point_type)
    nu = rng.randint(0, nu_max)
    terms: dict[tuple[int, ...], Fraction] = {}
    # a term of exact order nu
    lead = [0, 0, 0]
    for _ in range(nu):
        lead[rng.randrange(3)] += 1
    terms[tuple(lead)] = Fraction(rng.choice([1, -1, 2, 3, Fraction(1, 2)]))
    for _ in range(rng.randint(1, 5)):
        total = rng.randint(nu, degree)
        m = [0, 0, 0]
        for _ in range(total):
            m[rng.randrange(3)] += 1
        terms[tuple(m)] = terms.get(tuple(m), Fraction(0)) + rng.randint(-3, 3)
    # a free variable term keeps F away from the exceptional locus
    if point_type < 3:
        terms[(0,) * point_type + (degree,) + (0,) * (2 - point_type)] = Fraction(1)
    else:
        terms[(0, 0, degree)] = Fraction(1)
    F = ps.from_terms(terms, names)
    factor = tuple(rng.randint(0, 3) for _ in exceptional) + (0,) * (3 - point_type)
    v = ps.multiply_monomial(F, factor)
    if rng.random() < 0.5:
        v = ps.add(v, ps.monomial(exps_u, names, rng.randint(1, 3)))
    u = ps.monomial(exps_u, names)
    return MapGerm(u, v, exceptional, BaseType.ONE_POINT, precision)


_NONZERO_SHIFTS = (-2, -1, 1, 2)


def _cell_translations(rng: random.Random) -> list[tuple[int, int]]:
    """A y shift and a y, z shift: every child type of the parent shows up."""
    return [(rng.choice(_NONZERO_SHIFTS), 0),
            (rng.choice(_NONZERO_SHIFTS), rng.choice(_NONZERO_SHIFTS))]


def run_corpus(count: int = 20, seed: int = 0, nu_max: int = 4, degree: int = 6,
               precision: int = 24, cells: Sequence[tuple[int, int]] = CELLS) -> CorpusReport:
    """Point blowups of random germs, checking every edge, grouped by (parent, child) type."""
    rng = random.Random(seed)
    report = CorpusReport({cell: 0 for cell in cells}, target=count)
    wanted = set(cells)
    for parent_type in sorted({cell[0] for cell in cells}):
        attempts = 0
        while min(report.cases[c] for c in wanted if c[0] == parent_type) < count and attempts < 40 * count:
            attempts += 1
            g = random_germ(rng, parent_type, nu_max, degree, precision)
            try:
                nf = normalize(g)
            except MonoforgeError:
                continue
            if nf.degenerate or nf.point_type != parent_type:
                continue
            translations = _cell_translations(rng)
            edges = quadratic_charts(g, translations)
            theorem = check_descent(g, edges)
            report.checks += len(theorem.checks)
            report.uncertified += len(theorem.uncertified)
            for check in theorem.failures:
                report.failures.append((theorem.parent, check))
            for edge in edges:
                if edge.nf is not None and (parent_type, edge.nf.point_type) in wanted:
                    report.cases[(parent_type, edge.nf.point_type)] += 1
    for cell in report.underfilled:
        _LOGGER.warning(f"run_corpus(): cell {cell} has {report.cases[cell]} of {count} cases")
    _LOGGER.info(f"run_corpus(): {report.checks} checks, {report.uncertified} uncertified, "
                 f"{len(report.failures)} failures")
    return report
