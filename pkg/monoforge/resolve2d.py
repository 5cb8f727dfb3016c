"""Resolution of (u, v) in two variables by quadratic transforms.

The invariant driving termination is Inv(p) = (nu_bar, sigma, delta),
which drops lexicographically along every quadratic transform centered at
a point that is not 1-resolved.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import series as ps
from .const import DEFAULT_PRECISION, DEFAULT_RESOLVE_DEPTH, DELTA_SUP_MAX_STEPS
from .exceptions import (
    DepthExceeded,
    DescentViolation,
    IrrationalCriticalPoint,
    MalformedGerm,
    PrecisionExhausted,
    WrongForm,
)
from .germ import BaseType, MapGerm, NormalizedForm, apply_substitution, normalize
from .series import TruncatedSeries

_LOGGER = logging.getLogger(__name__)

X, Y = "x", "y"
VARS_2D = (X, Y)
INFINITY = math.inf


@dataclass(frozen=True)
class Germ2D:
    germ: MapGerm
    nf: NormalizedForm

    @property
    def point_type(self) -> int:
        return self.nf.point_type

    @property
    def F(self) -> TruncatedSeries:
        return self.nf.F


def make_germ2d(g: MapGerm) -> Germ2D:
    if g.vars != VARS_2D:
        raise MalformedGerm(f"surface germs use the variables {VARS_2D}, got {g.vars}")
    nf = normalize(g)
    if nf.point_type == 1 and nf.monomial_vars != (X,):
        raise MalformedGerm("at a 1 point the exceptional variable must be x")
    return Germ2D(nf.germ, nf)


def germ2d_from_strings(u: str, v: str, exceptional: Sequence[str] = (X,),
                        precision: int = DEFAULT_PRECISION) -> Germ2D:
    g = MapGerm(ps.parse_series(u, VARS_2D), ps.parse_series(v, VARS_2D),
                tuple(exceptional), BaseType.ONE_POINT, precision)
    return make_germ2d(g)


@dataclass(frozen=True, order=True)
class Inv2D:
    nu_bar: int
    sigma: Fraction
    delta: Fraction | float

    def __str__(self) -> str:
        delta = "inf" if self.delta == INFINITY else str(self.delta)
        return f"({self.nu_bar},{self.sigma},{delta})"


@dataclass(frozen=True)
class DeltaResult:
    value: Fraction | float
    pending: bool = False   # infinite only up to precision


def _multiplicity(g: Germ2D) -> int:
    if g.nf.degenerate:
        raise PrecisionExhausted("F vanishes to precision, the germ looks analytically dependent")
    r = ps.order(g.F)
    if not isinstance(r, int):
        raise PrecisionExhausted(f"mult(F) = {r} is not certified")
    return r


def nu_bar(g: Germ2D) -> int:
    """mult(F) - 1 at 1 points, mult(F) at 2 points."""
    r = _multiplicity(g)
    return r - 1 if g.point_type == 1 else r


def sigma(g: Germ2D) -> Fraction:
    """0 or 1 at 1 points (mult F = mult F(0,y) or not), 1/2 at 2 points."""
    if g.point_type == 2:
        return Fraction(1, 2)
    r = _multiplicity(g)
    on_line = ps.order(ps.restrict_zero(g.F, (X,)))
    if not isinstance(on_line, int):
        raise PrecisionExhausted(f"mult F(0,y) = {on_line} is not certified")
    return Fraction(0) if on_line == r else Fraction(1)


def delta_of(f: TruncatedSeries, first: str = X, second: str = Y) -> DeltaResult:
    """min(i/(r-j)) over terms a_ij first^i second^j with j < r = mult f."""
    r = ps.order(f)
    if not isinstance(r, int) or r == 0:
        raise WrongForm(f"delta_of(): needs a non unit series, mult = {r}")
    i_pos, j_pos = f.var_index(first), f.var_index(second)
    best = None
    for m in f.poly:
        j = m[j_pos]
        if j < r:
            value = Fraction(m[i_pos], r - j)
            best = value if best is None else min(best, value)
    if best is None:
        return DeltaResult(INFINITY, pending=not f.is_exact)
    if not f.is_exact and best > Fraction(f.precision + 1, r):
        # unseen terms of degree > precision have i/(r-j) >= (precision+1)/r
        _LOGGER.debug(f"delta_of(): {best} exceeds the certified bound {Fraction(f.precision + 1, r)}, pending")
        return DeltaResult(INFINITY, pending=True)
    return DeltaResult(best)


def delta_chart(g: Germ2D) -> DeltaResult:
    """delta(F; x, y) in the presented coordinates; at 2 points the max over both orders."""
    d = delta_of(g.F, X, Y)
    if g.point_type == 2:
        d2 = delta_of(g.F, Y, X)
        if d2.value > d.value:
            return d2
    return d


def _shape_constant(f: TruncatedSeries, delta: Fraction, r: int) -> Fraction | None:
    """c with delta-form = tau*(y - c*x^delta)^r + lambda*x^(r*delta), or None."""
    if delta.denominator != 1:
        return None
    k = int(delta)
    ps._check_degree(f, k * r, "delta_sup()")
    tau = ps.coefficient(f, (0, r))
    if tau == 0:
        return None
    c = -ps.coefficient(f, (k, r - 1)) / (tau * r)
    if c == 0:
        return None
    for j in range(1, r - 1):
        expected = tau * math.comb(r, j) * (-c) ** (r - j)
        if ps.coefficient(f, (k * (r - j), j)) != expected:
            return None
    return c


@dataclass(frozen=True)
class DeltaSup:
    value: Fraction | float
    translation: TruncatedSeries   # t(x), delta(p) = delta(p; x, y - t(x))
    pending: bool = False
    steps: int = 0


def _delta_sup_loop(f: TruncatedSeries, strip_pure_x: bool, limit: int) -> DeltaSup:
    names = f.vars
    r = ps.order(f)
    t = ps.zero(names)
    previous = None
    for step in range(DELTA_SUP_MAX_STEPS):
        if strip_pure_x:
            f = ps.split_by(f, lambda m: m[1] == 0)[1]
        current = delta_of(f, X, Y)
        if current.value == INFINITY:
            return DeltaSup(INFINITY, t, current.pending, step)
        if previous is not None and current.value <= previous:
            raise DescentViolation(f"delta_sup(): delta {current.value} did not rise above {previous}",
                                   {"t": ps.format_series(t)})
        if r * current.value > limit:
            # t(x) has no finite closed form within the working precision
            _LOGGER.debug(f"delta_sup(): delta={current.value} passed precision {limit}, pending infinity")
            return DeltaSup(INFINITY, t, True, step)
        previous = current.value
        c = _shape_constant(f, current.value, r)
        if c is None:
            return DeltaSup(current.value, t, False, step)
        shift = ps.monomial((int(current.value), 0), names, c)
        _LOGGER.debug(f"delta_sup(): delta={current.value} degenerate, y <- y + {c}*x^{current.value}")
        f = ps.substitute(f, {Y: ps.add(ps.variable(Y, names), shift)}, names)
        t = ps.add(t, shift)
    raise PrecisionExhausted(f"delta_sup(): no stable delta after {DELTA_SUP_MAX_STEPS} translations",
                             {"t": ps.format_series(t)})


def delta_sup_of(f: TruncatedSeries) -> DeltaSup:
    """sup of delta(f; x, y - t(x)) over polynomials t of positive order, for a raw series f."""
    if ps.order(ps.restrict_zero(f, (X,))) != ps.order(f):
        raise WrongForm("delta_sup_of(): needs mult f(0,y) = mult f")
    limit = DEFAULT_PRECISION if f.is_exact else f.precision
    return _delta_sup_loop(f, strip_pure_x=False, limit=limit)


def delta_sup(g: Germ2D) -> DeltaSup:
    """delta(p) at a 1 point with sigma(p) = 0, with its witness translation."""
    if g.point_type != 1 or sigma(g) != 0:
        raise WrongForm("delta_sup(): needs a 1 point with sigma = 0")
    return _delta_sup_loop(g.F, strip_pure_x=True, limit=min(g.germ.precision, g.F.precision))


def delta(g: Germ2D) -> DeltaResult:
    """delta(p) (sup over permissible parameters)."""
    if g.point_type == 2:
        return delta_chart(g)
    if sigma(g) == 1:
        return DeltaResult(Fraction(1))
    sup = delta_sup(g)
    return DeltaResult(sup.value, sup.pending)


def inv2d(g: Germ2D) -> Inv2D:
    return Inv2D(nu_bar(g), sigma(g), delta(g).value)


def is_one_resolved(g: Germ2D) -> bool:
    """2 point: F a unit. 1 point: delta(p) is infinite (F = g^d + h(x))."""
    if g.point_type == 2:
        return nu_bar(g) == 0
    d = delta(g)
    if d.pending:
        _LOGGER.warning("is_one_resolved(): delta is infinite only up to precision")
    return d.value == INFINITY


def analytic_dependence_hint(g: MapGerm) -> bool:
    """True when v looks like a series in the base monomial to precision (not decisive)."""
    return normalize(g).degenerate


# --- quadratic transforms ---------------------------------------------------

@dataclass(frozen=True)
class Translate:
    alpha: Fraction = Fraction(0)

    def __str__(self) -> str:
        return f"x=x1, y=x1*(y1+{self.alpha})" if self.alpha else "x=x1, y=x1*y1"


@dataclass(frozen=True)
class InfinityChart:
    def __str__(self) -> str:
        return "x=x1*y1, y=y1"


Chart2D = Translate | InfinityChart


def chart_substitution(chart: Chart2D) -> dict[str, TruncatedSeries]:
    x, y = ps.variable(X, VARS_2D), ps.variable(Y, VARS_2D)
    if isinstance(chart, InfinityChart):
        return {X: ps.mul(x, y)}
    shifted = ps.add(y, ps.constant(chart.alpha, VARS_2D))
    return {Y: ps.mul(x, shifted)}


def quadratic_transform_2d(g: Germ2D, chart: Chart2D) -> Germ2D:
    """The germ at the point of the exceptional line selected by ``chart``."""
    if isinstance(chart, InfinityChart):
        exceptional = VARS_2D
    elif chart.alpha == 0 and g.point_type == 2:
        exceptional = VARS_2D
    else:
        exceptional = (X,)
    child = apply_substitution(g.germ, chart_substitution(chart), exceptional)
    return make_germ2d(child)


def _leading_coefficients(g: Germ2D) -> tuple[int, list[Fraction]]:
    r = _multiplicity(g)
    lead = ps.homogeneous_part(g.F, r)
    return r, [ps.coefficient(lead, (r - j, j)) for j in range(r + 1)]


def obstruction_polynomial(g: Germ2D) -> TruncatedSeries:
    """Univariate polynomial in t whose roots contain every bad point on the exceptional line."""
    r, a = _leading_coefficients(g)
    names = ("t",)
    if g.point_type == 1:
        terms = {(j - 1,): j * a[j] for j in range(1, r + 1) if a[j]}
    else:
        (a_exp, b_exp), (c, d) = g.nf.a, g.nf.factor
        lam = d - Fraction(b_exp * (c + d + r), a_exp + b_exp)
        terms = {(j,): (j + lam) * a[j] for j in range(r + 1) if (j + lam) * a[j]}
    return ps.from_terms(terms, names)


def critical_translations(g: Germ2D) -> list[Fraction]:
    """Nonzero rational roots of the obstruction polynomial, ascending by (denominator, numerator)."""
    poly = obstruction_polynomial(g)
    if poly.is_zero():
        raise IrrationalCriticalPoint("obstruction polynomial vanishes identically", {"germ": str(g.F)})
    _, factors = poly.poly.factor_list()
    roots = set()
    for factor, _mult in factors:
        degree = factor.degree()
        if degree == 0:
            continue
        if degree > 1:
            raise IrrationalCriticalPoint(f"critical points are roots of {factor.as_expr()}",
                                          {"polynomial": str(factor.as_expr())})
        root = -ps.to_fraction(factor.get((0,), 0) or ps.QQ.zero) / ps.to_fraction(factor.get((1,)))
        if root != 0:
            roots.add(root)
    return sorted(roots, key=lambda q: (q.denominator, q.numerator))


# --- descent checks ---------------------------------------------------------

@dataclass(frozen=True)
class EdgeCheck:
    name: str
    passed: bool
    detail: str


def check_edge(parent: Germ2D, child: Germ2D, parent_inv: Inv2D, child_inv: Inv2D) -> list[EdgeCheck]:
    """Runtime checks of the descent statements along one quadratic transform."""
    checks = [EdgeCheck("nu_bar non increasing", child_inv.nu_bar <= parent_inv.nu_bar,
                        f"{parent_inv.nu_bar} -> {child_inv.nu_bar}")]
    if child_inv.nu_bar == parent_inv.nu_bar:
        checks.append(EdgeCheck("sigma non increasing", child_inv.sigma <= parent_inv.sigma,
                                f"{parent_inv.sigma} -> {child_inv.sigma}"))
        if parent.point_type == 2 and child.point_type == 1:
            checks.append(EdgeCheck("1 point over 2 point has sigma 0", child_inv.sigma == 0,
                                    f"sigma={child_inv.sigma}"))
        if parent.point_type == 1 and child.point_type == 1:
            checks.append(EdgeCheck("1 point over 1 point has sigma 0", child_inv.sigma == 0,
                                    f"sigma={child_inv.sigma}"))
        both_two = parent.point_type == 2 and child.point_type == 2
        both_one = (parent.point_type == 1 and child.point_type == 1 and parent_inv.sigma == 0
                    and parent_inv.delta != INFINITY)
        if both_two or both_one:
            checks.append(EdgeCheck("delta drops by one", child_inv.delta == parent_inv.delta - 1,
                                    f"{parent_inv.delta} -> {child_inv.delta}"))
    if parent.point_type == 1 and parent_inv.sigma == 0 and child.point_type == 2:
        checks.append(EdgeCheck("2 point over sigma 0 has nu_bar 0", child_inv.nu_bar == 0,
                                f"nu_bar={child_inv.nu_bar}"))
    if parent_inv.nu_bar > 0 and parent_inv.delta != INFINITY:
        checks.append(EdgeCheck("Inv drops", child_inv < parent_inv, f"{parent_inv} -> {child_inv}"))
    return checks


# --- the resolver -----------------------------------------------------------

@dataclass
class ChartNode2D:
    id: int
    parent: int | None
    chart: Chart2D | None
    germ: Germ2D
    inv: Inv2D
    resolved: bool
    pending: bool = False
    depth: int = 0
    checks: list[EdgeCheck] = field(default_factory=list)


@dataclass
class ChartTree2D:
    nodes: list[ChartNode2D] = field(default_factory=list)

    def children(self, node_id: int) -> list[ChartNode2D]:
        return [n for n in self.nodes if n.parent == node_id]

    def leaves(self) -> list[ChartNode2D]:
        parents = {n.parent for n in self.nodes}
        return [n for n in self.nodes if n.id not in parents]


def _node(node_id: int, parent: int | None, chart: Chart2D | None, g: Germ2D, depth: int) -> ChartNode2D:
    try:
        resolved = is_one_resolved(g)
        pending = False
    except PrecisionExhausted:
        if not g.nf.degenerate:
            raise
        _LOGGER.warning(f"resolve_all(): node {node_id} resolved-pending-precision (F vanishes)")
        return ChartNode2D(node_id, parent, chart, g, Inv2D(0, Fraction(0), INFINITY), True, True, depth)
    if resolved:
        d = delta(g) if g.point_type == 1 else DeltaResult(INFINITY)
        inv = Inv2D(nu_bar(g), sigma(g), INFINITY)
        pending = d.pending
    else:
        inv = inv2d(g)
    return ChartNode2D(node_id, parent, chart, g, inv, resolved, pending, depth)


def descent_depth_bound(g: Germ2D, inv: Inv2D) -> Fraction | float:
    """r!*delta + r*(nu_bar + 1) for r = mult F, or infinity when delta is infinite."""
    if inv.delta == INFINITY:
        return INFINITY
    r = ps.order(g.F)
    if not isinstance(r, int):
        return INFINITY
    return math.factorial(r) * Fraction(inv.delta) + r * (inv.nu_bar + 1)


def resolve_all(g: Germ2D, max_depth: int = DEFAULT_RESOLVE_DEPTH) -> ChartTree2D:
    """Expand quadratic transforms at every point that is not 1-resolved."""
    tree = ChartTree2D()
    root = _node(0, None, None, g, 0)
    tree.nodes.append(root)
    bound = INFINITY if root.resolved else descent_depth_bound(g, root.inv)
    frontier = [root]
    while frontier:
        next_frontier = []
        for node in frontier:
            if node.resolved:
                continue
            if node.depth >= max_depth:
                raise DepthExceeded(f"resolve_all(): depth {max_depth} reached at node {node.id}",
                                    {"node": node.id, "inv": str(node.inv)})
            if node.depth + 1 > bound:
                _LOGGER.error(f"resolve_all(): node {node.id} at depth {node.depth} is unresolved past {bound}")
                raise DescentViolation(f"depth {node.depth + 1} exceeds the descent bound {bound}",
                                       {"node": node.id, "inv": str(node.inv), "bound": str(bound)})
            charts: list[Chart2D] = [Translate(Fraction(0))]
            charts += [Translate(alpha) for alpha in critical_translations(node.germ)]
            charts.append(InfinityChart())
            for chart in charts:
                child_germ = quadratic_transform_2d(node.germ, chart)
                child = _node(len(tree.nodes), node.id, chart, child_germ, node.depth + 1)
                child.checks = check_edge(node.germ, child_germ, node.inv, child.inv)
                failed = [c for c in child.checks if not c.passed]
                if failed:
                    _LOGGER.error(f"resolve_all(): descent failure on edge {node.id}->{child.id}: {failed}")
                    raise DescentViolation(f"{failed[0].name} fails: {failed[0].detail}",
                                           {"parent": node.id, "chart": str(chart)})
                tree.nodes.append(child)
                next_frontier.append(child)
        frontier = next_frontier
    _LOGGER.debug(f"resolve_all(): {len(tree.nodes)} nodes, {len(tree.leaves())} leaves")
    return tree


# --- exponent dynamics ------------------------------------------------------

class Move(str, Enum):
    CHART_X = "chart_x"        # (alpha, beta) -> (alpha, alpha + beta)
    CHART_Y = "chart_y"        # (alpha, beta) -> (alpha + beta, beta)
    RESOLVE_X = "resolve_x"    # (alpha, beta) -> (alpha + beta - j, beta)
    RESOLVE_Y = "resolve_y"    # (alpha, beta) -> (alpha, alpha + beta - j)


@dataclass(frozen=True)
class DynamicsReport:
    pairs: tuple[tuple[int, int], ...]
    deltas: dict[tuple[int, int], Fraction]
    gains: dict[tuple[int, int], Fraction]


def cross_deltas(pairs: Sequence[tuple[int, int]], start: int = 1) -> dict[tuple[int, int], Fraction]:
    out = {}
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            ji, jj = i + start, j + start
            (ai, bi), (aj, bj) = pairs[i], pairs[j]
            out[(ji, jj)] = (Fraction(ai, ji) - Fraction(aj, jj)) * (Fraction(bi, ji) - Fraction(bj, jj))
    return out


def _move_pair(pair: tuple[int, int], j: int, move: Move) -> tuple[int, int]:
    a, b = pair
    if move == Move.CHART_X:
        return a, a + b
    if move == Move.CHART_Y:
        return a + b, b
    if move == Move.RESOLVE_X:
        return a + b - j, b
    return a, a + b - j


def exponent_dynamics_step(pairs: Sequence[tuple[int, int]], move: Move, start: int = 1) -> DynamicsReport:
    """Apply one move to every pair and check the cross terms never decrease."""
    r = start + len(pairs) - 1
    for idx, (a, b) in enumerate(pairs):
        if a < 0 or b < 0 or a + b < idx + start:
            raise MalformedGerm(f"exponent pair {(a, b)} at j={idx + start} needs alpha+beta >= j")
    before = cross_deltas(pairs, start)
    moved = tuple(_move_pair(p, idx + start, move) for idx, p in enumerate(pairs))
    after = cross_deltas(moved, start)
    gains = {}
    for key, old in before.items():
        gain = after[key] - old
        gains[key] = gain
        if gain < 0 or (old < 0 and gain < Fraction(1, r ** 4)):
            raise DescentViolation(f"cross term {key} moved {old} -> {after[key]} under {move.value}",
                                   {"pairs": [list(p) for p in pairs], "move": move.value})
    return DynamicsReport(moved, after, gains)


def exponent_dynamics(pairs: Sequence[tuple[int, int]], moves: Sequence[Move], start: int = 1) -> list[DynamicsReport]:
    reports = []
    current = tuple(pairs)
    for move in moves:
        report = exponent_dynamics_step(current, move, start)
        reports.append(report)
        current = report.pairs
    return reports


def stable_minimizer(pairs: Sequence[tuple[int, int]], start: int = 1) -> int | None:
    """An index j whose (alpha_j/j, beta_j/j) is componentwise minimal, if one exists."""
    ratios = [(Fraction(a, idx + start), Fraction(b, idx + start)) for idx, (a, b) in enumerate(pairs)]
    for idx, (ra, rb) in enumerate(ratios):
        if all(ra <= oa and rb <= ob for oa, ob in ratios):
            return idx + start
    return None


def fractional_part_sum(pairs: Sequence[tuple[int, int]], i: int, start: int = 1) -> Fraction:
    a, b = pairs[i - start]
    fa, fb = Fraction(a, i), Fraction(b, i)
    return (fa - math.floor(fa)) + (fb - math.floor(fb))
