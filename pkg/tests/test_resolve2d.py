"""Tests for the surface resolver and its exponent dynamics."""
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies

from monoforge import resolve2d
from monoforge import series as ps
from monoforge.exceptions import DescentViolation, IrrationalCriticalPoint, MalformedGerm
from monoforge.resolve2d import (
    INFINITY,
    VARS_2D,
    Inv2D,
    InfinityChart,
    Move,
    Translate,
    critical_translations,
    cross_deltas,
    delta_of,
    delta_sup,
    delta_sup_of,
    descent_depth_bound,
    exponent_dynamics,
    exponent_dynamics_step,
    fractional_part_sum,
    germ2d_from_strings,
    inv2d,
    is_one_resolved,
    nu_bar,
    quadratic_transform_2d,
    resolve_all,
    sigma,
    stable_minimizer,
)


def test_smooth_curve_is_resolved():
    """u = x, v = y is 1-resolved with Inv = (0, 0, inf)."""
    g = germ2d_from_strings("x", "y")
    assert nu_bar(g) == 0
    assert sigma(g) == 0
    assert is_one_resolved(g)
    tree = resolve_all(g)
    assert len(tree.nodes) == 1


def test_two_point_with_unit_is_resolved():
    """At a 2 point with F a unit nu_bar is 0."""
    g = germ2d_from_strings("x*y", "x^2*y", ("x", "y"))
    assert g.point_type == 2
    assert nu_bar(g) == 0
    assert sigma(g) == Fraction(1, 2)
    assert is_one_resolved(g)


def test_sigma_one_when_the_line_has_higher_order():
    """F = xy + y^3 has mult 2 but order 3 on x = 0."""
    g = germ2d_from_strings("x^3", "y^3 + x*y")
    assert nu_bar(g) == 1
    assert sigma(g) == 1
    assert inv2d(g) == Inv2D(1, Fraction(1), Fraction(1))


def test_delta_of_presented_coordinates():
    """delta(y^3 - x y^2) = 1."""
    g = germ2d_from_strings("x", "y^3 - x*y^2")
    assert delta_of(g.F).value == 1
    assert inv2d(g) == Inv2D(2, Fraction(0), Fraction(1))
    assert not is_one_resolved(g)


def test_degenerate_delta_is_translated_away():
    """F = (y + x/2)^2 - x^2/4 is resolved after y -> y - x/2."""
    g = germ2d_from_strings("x", "y^2 + x*y")
    assert is_one_resolved(g)


def test_critical_translations():
    """The obstruction polynomial of y^3 - x y^2 has the root 2/3."""
    g = germ2d_from_strings("x", "y^3 - x*y^2")
    assert critical_translations(g) == [Fraction(2, 3)]


def test_resolve_all_terminates():
    """Every leaf is resolved and every edge passed its checks."""
    g = germ2d_from_strings("x", "y^3 - x*y^2")
    tree = resolve_all(g)
    assert len(tree.nodes) > 1
    assert all(leaf.resolved for leaf in tree.leaves())
    assert all(check.passed for node in tree.nodes for check in node.checks)


def test_quadratic_transform_charts():
    """The infinity chart gives a 2 point, the origin chart of a 1 point stays a 1 point."""
    g = germ2d_from_strings("x", "y^2")
    infinity = quadratic_transform_2d(g, InfinityChart())
    assert infinity.germ.exceptional_vars == ("x", "y")
    origin = quadratic_transform_2d(g, Translate(Fraction(0)))
    assert origin.germ.exceptional_vars == ("x",)
    assert str(Translate(Fraction(2))) == "x=x1, y=x1*(y1+2)"


def test_inv_order():
    """Inv compares lexicographically."""
    assert Inv2D(1, Fraction(0), Fraction(3)) < Inv2D(1, Fraction(1), Fraction(1))
    assert Inv2D(0, Fraction(1), INFINITY) < Inv2D(1, Fraction(0), Fraction(1))


def test_surface_germ_needs_x_and_y():
    """Surface germs live in the variables x, y."""
    with pytest.raises(MalformedGerm):
        germ2d_from_strings("y", "x", ("y",))


def test_cross_deltas():
    """(a_i/i - a_j/j)(b_i/i - b_j/j) over pairs i < j."""
    assert cross_deltas([(2, 0), (0, 4)]) == {(1, 2): Fraction(-4)}


def test_chart_move_raises_cross_terms():
    """The x chart move turns a negative cross term into zero."""
    report = exponent_dynamics_step([(2, 0), (0, 4)], Move.CHART_X)
    assert report.pairs == ((2, 2), (0, 4))
    assert report.deltas == {(1, 2): Fraction(0)}
    assert report.gains == {(1, 2): Fraction(4)}


def test_dynamics_sequence():
    """Moves compose."""
    reports = exponent_dynamics([(2, 0), (0, 4)], [Move.CHART_X, Move.CHART_Y])
    assert len(reports) == 2
    assert reports[-1].pairs == ((4, 2), (4, 4))


def test_dynamics_rejects_small_pairs():
    """alpha + beta must reach the index."""
    with pytest.raises(MalformedGerm):
        exponent_dynamics_step([(0, 0)], Move.CHART_X)


def test_resolve_move_gains():
    """Resolving along x lowers alpha by j - beta and still raises the cross term."""
    report = exponent_dynamics_step([(1, 0), (0, 2)], Move.RESOLVE_X)
    assert report.pairs == ((0, 0), (0, 2))
    assert report.gains == {(1, 2): Fraction(1)}


def test_stable_minimizer():
    """A componentwise minimal ratio pair exists or it does not."""
    assert stable_minimizer([(1, 1), (4, 4)]) == 1
    assert stable_minimizer([(2, 0), (0, 4)]) is None


def test_fractional_part_sum():
    """{3/2} + {1/2} = 1."""
    assert fractional_part_sum([(1, 1), (3, 1)], 2) == 1


def test_infinite_delta_sup_is_pending():
    """F = y^2 + xy + y^3 is unit*(y - t(x))^2 + h(x) with t an infinite series."""
    g = germ2d_from_strings("x", "y^2 + x*y + y^3")
    sup = delta_sup(g)
    assert sup.value == INFINITY
    assert sup.pending
    assert ps.coefficient(sup.translation, (1, 0)) == Fraction(-1, 2)
    assert ps.coefficient(sup.translation, (2, 0)) == Fraction(-3, 8)
    tree = resolve_all(g)
    assert len(tree.nodes) == 1
    assert tree.nodes[0].resolved and tree.nodes[0].pending


def test_infinite_delta_in_a_child_chart():
    g = germ2d_from_strings("x", "x^2*y^4 - x^2*y + 3*x*y^2 + y^4")
    tree = resolve_all(g)
    assert len(tree.nodes) > 1
    assert all(leaf.resolved for leaf in tree.leaves())
    assert any(node.pending for node in tree.nodes)


def test_delta_of_past_precision_is_pending():
    """y^2 + x^3 y known to degree 4: the bound (4+1)/2 is below 3."""
    f = ps.parse_series("y^2 + x^3*y", VARS_2D, precision=4)
    d = delta_of(f)
    assert d.value == INFINITY
    assert d.pending
    assert delta_of(ps.parse_series("y^2 + x^2*y", VARS_2D, precision=4)).value == 2


def test_descent_depth_bound():
    """3! * 1 + 3 * (2 + 1) for y^3 - x y^2."""
    g = germ2d_from_strings("x", "y^3 - x*y^2")
    assert descent_depth_bound(g, inv2d(g)) == 15
    tree = resolve_all(g)
    assert max(node.depth for node in tree.nodes) <= 15
    assert descent_depth_bound(g, Inv2D(2, Fraction(0), INFINITY)) == INFINITY


def test_descent_depth_bound_is_enforced(monkeypatch):
    monkeypatch.setattr(resolve2d, "descent_depth_bound", lambda g, inv: 0)
    with pytest.raises(DescentViolation):
        resolve_all(germ2d_from_strings("x", "y^3 - x*y^2"))


def _random_germ2d(rng: random.Random):
    """u = x^a, v = x^e * (c*(y - b*x)^r + terms of degree r+1..6)."""
    r = rng.randint(1, 3)
    b = rng.choice([0, 0, 1, -1, 2])
    terms = [f"({rng.choice([1, 2, -1])})*(y - ({b})*x)^{r}"]
    for _ in range(rng.randint(0, 4)):
        total = rng.randint(r + 1, 6)
        i = rng.randint(0, total)
        terms.append(f"({rng.randint(-3, 3)})*x^{i}*y^{total - i}")
    v = f"x^{rng.randint(0, 2)}*({' + '.join(terms)})"
    return germ2d_from_strings(f"x^{rng.randint(1, 3)}", v)


def _resolves_within_bound(g) -> bool:
    try:
        tree = resolve_all(g)
    except IrrationalCriticalPoint:
        return False
    root = tree.nodes[0]
    assert all(leaf.resolved for leaf in tree.leaves())
    assert all(check.passed for node in tree.nodes for check in node.checks)
    if not root.resolved:
        assert max(node.depth for node in tree.nodes) <= descent_depth_bound(g, root.inv)
    return True


def _resolve_corpus(count: int, seed: int) -> int:
    rng = random.Random(seed)
    resolved = attempts = 0
    while resolved < count and attempts < 20 * count:
        attempts += 1
        resolved += _resolves_within_bound(_random_germ2d(rng))
    return resolved


def test_random_germs_resolve():
    assert _resolve_corpus(25, seed=3) == 25


@pytest.mark.corpus
def test_random_germs_resolve_corpus():
    """500 surface germs of degree <= 6 with rational critical points."""
    assert _resolve_corpus(500, seed=0) == 500


def _valid_moves(pairs: list[tuple[int, int]]) -> list[Move]:
    moves = [Move.CHART_X, Move.CHART_Y]
    if all(a + 2 * b >= 2 * j for j, (a, b) in enumerate(pairs, start=1)):
        moves.append(Move.RESOLVE_X)
    if all(2 * a + b >= 2 * j for j, (a, b) in enumerate(pairs, start=1)):
        moves.append(Move.RESOLVE_Y)
    return moves


def _run_dynamics(rng: random.Random) -> int:
    """Random moves until a stable minimizer has fractional part sum < 1."""
    r = rng.randint(1, 6)
    pairs = []
    for j in range(1, r + 1):
        a = rng.randint(0, 2 * j)
        pairs.append((a, rng.randint(max(0, j - a), 2 * j)))
    worst = min(cross_deltas(pairs).values(), default=Fraction(0))
    # every negative cross term gains 1/r^4 per move, then at most r moves settle the fractional parts
    bound = math.ceil(max(Fraction(0), -worst) * r ** 4) + r
    steps = 0
    while True:
        i = stable_minimizer(pairs)
        if i is not None and fractional_part_sum(pairs, i) < 1:
            return steps
        assert steps < bound, pairs
        before = cross_deltas(pairs)
        report = exponent_dynamics_step(pairs, rng.choice(_valid_moves(pairs)))
        for key, old in before.items():
            assert report.deltas[key] >= old
            if old < 0:
                assert report.gains[key] >= Fraction(1, r ** 4)
        pairs = list(report.pairs)
        steps += 1


@given(strategies.integers(0, 2 ** 32))
def test_dynamics_reach_fractional_part_bound(seed):
    _run_dynamics(random.Random(seed))


@pytest.mark.corpus
def test_dynamics_corpus():
    rng = random.Random(0)
    for _ in range(10 ** 4):
        _run_dynamics(rng)


def _unit_times_power(rng: random.Random):
    """unit * (y - t(x))^r + x^s with deg t <= 4 and s/r not an integer above deg t."""
    r = rng.randint(2, 4)
    t_terms = {(k, 0): Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for k in range(1, 5)}
    t = ps.from_terms(t_terms, VARS_2D)
    unit = ps.from_terms({(0, 0): rng.choice([1, 2, -3]), (1, 0): rng.randint(-2, 2),
                          (0, 1): rng.randint(-2, 2)}, VARS_2D)
    s = 4 * r + 1
    power = ps.power(ps.sub(ps.variable("y", VARS_2D), t), r)
    f = ps.add(ps.mul(unit, power), ps.monomial((s, 0), VARS_2D))
    return f, t_terms, Fraction(s, r)


def test_delta_sup_recovers_translation():
    """The witness translation of unit*(y - t)^r + x^s is t itself."""
    rng = random.Random(5)
    for _ in range(100):
        f, t_terms, expected = _unit_times_power(rng)
        sup = delta_sup_of(f)
        assert sup.value == expected
        assert not sup.pending
        assert {k: ps.coefficient(sup.translation, k) for k in t_terms} == t_terms
        assert len(sup.translation.poly) == sum(1 for c in t_terms.values() if c)
