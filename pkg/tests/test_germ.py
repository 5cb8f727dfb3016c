"""Tests for germs, normal forms and point invariants."""
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies

from monoforge import series as ps
from monoforge.exceptions import MalformedGerm, MonoforgeError, UnitChangeRequired
from monoforge.germ import (
    BaseType,
    CoordinateIdeal,
    a_r_violations,
    curve_membership,
    generic_point,
    invariants,
    make_germ,
    normalize,
    rescale_functions,
    swap_vars,
)
from monoforge.transform3d import quadratic_charts, random_germ

XYZ = ("x", "y", "z")


def test_two_point_normal_form():
    """u = xy, v = x^2 y has factor (2, 1), P = 0 and a unit F."""
    nf = normalize(make_germ("x*y", "x^2*y", XYZ, ("x", "y")))
    assert nf.point_type == 2
    assert nf.monomial_vars == ("x", "y")
    assert nf.a == (1, 1)
    assert nf.m == 1
    assert nf.factor == (2, 1)
    assert nf.P.is_zero()
    assert ps.format_series(nf.F) == "1"
    inv = invariants(nf)
    assert inv.nu == 0
    assert inv.gamma == 0
    assert inv.tau == 0


def test_one_point_normal_form(bad_one_point):
    """u = x^3, v = x^2 + x^5 y splits into P = t^2 and F = y."""
    nf = normalize(bad_one_point)
    assert nf.point_type == 1
    assert nf.a == (1,)
    assert nf.m == 3
    assert nf.factor == (5,)
    assert nf.P.terms() == {(2,): 1}
    assert ps.format_series(nf.F) == "y"
    assert invariants(nf).nu == 1


def test_reconstruct_exact_germ(bad_one_point):
    """An exact germ is rebuilt from its normal form."""
    u, v = normalize(bad_one_point).reconstruct()
    assert u == bad_one_point.u
    assert v == bad_one_point.v


def test_chart_point_of_two_point_germ():
    """x = x1, y = x1 (y1 + 1), z = x1 z1 over u = xy, v = x^2 y is a 1 point with P = t^3 and nu = 1."""
    g = make_germ("x*y", "x^2*y", XYZ, ("x", "y"))
    edges = quadratic_charts(g, [(1, 0)])
    assert len(edges) == 4
    edge = edges[-1]
    assert edge.error is None
    assert edge.germ.exceptional_vars == ("x",)
    assert edge.nf.point_type == 1
    assert edge.nf.P.terms() == {(3,): 1}
    assert invariants(edge.nf).nu == 1


def test_translated_chart_points_have_order_one():
    """Every non zero rational translation on the exceptional line gives nu = 1."""
    g = make_germ("x*y", "x^2*y", XYZ, ("x", "y"))
    for edge in quadratic_charts(g, [(2, 0), (-1, 3)])[3:]:
        assert edge.nf.point_type == 1
        assert invariants(edge.nf).nu == 1


def test_u_divisible_by_free_variable():
    """u may only involve exceptional variables."""
    with pytest.raises(MalformedGerm):
        normalize(make_germ("x*y", "z", XYZ, ("x",)))


def test_u_unit_is_rejected():
    """A point where u is a unit does not lie over the divisor."""
    with pytest.raises(MalformedGerm):
        normalize(make_germ("1 + x", "z", XYZ, ("x",)))


def test_rational_scale_is_absorbed():
    """u = 4 x^2 becomes x^2 after x -> x/2."""
    nf = normalize(make_germ("4*x^2", "y", XYZ, ("x",)))
    assert nf.u_scale == 1
    assert ps.format_series(nf.germ.u) == "x^2"


def test_irrational_scale_is_kept():
    """u = 2 x^2 keeps the scale unless a strict form is required."""
    g = make_germ("2*x^2", "y", XYZ, ("x",))
    assert normalize(g).u_scale == Fraction(2)
    with pytest.raises(UnitChangeRequired):
        normalize(g, strict=True)


def test_unit_on_u_is_absorbed():
    """u = x^2 (1 + y) is made an exact monomial."""
    nf = normalize(make_germ("x^2 + x^2*y", "z", XYZ, ("x",)))
    assert nf.germ.u == ps.monomial((2, 0, 0), XYZ)
    assert nf.point_type == 1


def test_curve_membership():
    """F = z^2 + xz lies in the square of (x, z)."""
    nf = normalize(make_germ("x*y", "z^2 + x*z", XYZ, ("x", "y")))
    assert curve_membership(nf, CoordinateIdeal("x", "z")) == 2
    assert curve_membership(nf, CoordinateIdeal("y", "z")) == 1


def test_a_r_conditions():
    """nu bounds at 1, 2 and 3 points, gamma at 1 points and tau at 2 points when nu = r."""
    one_point = normalize(make_germ("x", "x*z + y^3", XYZ, ("x",)))
    assert a_r_violations(one_point, 2) == ["1 point with nu=r and gamma=3"]
    assert a_r_violations(one_point, 3) == []
    assert a_r_violations(normalize(make_germ("x^2", "y^2 + x*z", XYZ, ("x",))), 2) == []
    two_point = normalize(make_germ("x*y", "x^2 + y^3", XYZ, ("x", "y")))
    assert a_r_violations(two_point, 2) == ["2 point with nu=r and tau=0"]
    assert a_r_violations(two_point, 3) == []
    three_point = normalize(make_germ("x*y*z", "x^2 + y^2 + z^2", XYZ, XYZ))
    assert a_r_violations(three_point, 2) == ["3 point with nu=2 > r-1"]
    assert a_r_violations(three_point, 3) == []
    with pytest.raises(MalformedGerm):
        a_r_violations(one_point, 1)


def test_generic_point_drops_exceptional():
    """Translating an exceptional variable takes it off the divisor."""
    g = make_germ("x*y", "z", XYZ, ("x", "y"))
    moved = generic_point(g, "y", 1)
    assert moved.exceptional_vars == ("x",)
    assert ps.format_series(moved.u) == "x + x*y"


def test_swap_vars():
    """Exchanging two coordinates permutes the series."""
    g = swap_vars(make_germ("x^2*y", "z", XYZ, ("x", "y")), "x", "y")
    assert ps.format_series(g.u) == "x*y^2"


def test_rescale_functions_over_two_point_base():
    """v -> v + gamma u is not a permissible change over a 2 point of the base."""
    g = make_germ("x", "y", XYZ, ("x",), base=BaseType.TWO_POINT)
    one = ps.one(XYZ)
    with pytest.raises(MalformedGerm):
        rescale_functions(g, one, one, one)
    scaled = rescale_functions(g, ps.constant(2, XYZ), one)
    assert ps.format_series(scaled.u) == "2*x"


def test_exceptional_vars_are_ordered():
    """Exceptional variables follow the order of the germ variables."""
    g = make_germ("x*z", "y", XYZ, ("z", "x"))
    assert g.exceptional_vars == ("x", "z")


def _random_normal_form(seed: int, point_type: int):
    g = random_germ(random.Random(seed), point_type)
    try:
        nf = normalize(g)
    except MonoforgeError:
        nf = None
    assume(nf is not None and not nf.degenerate and nf.point_type == point_type)
    return g, nf


def _nu_gamma_tau(nf) -> tuple[str, str, str]:
    inv = invariants(nf)
    return str(inv.nu), str(inv.gamma), str(inv.tau)


SWAPS = {1: ("y", "z"), 2: ("x", "y"), 3: ("x", "z")}


@given(strategies.integers(0, 2 ** 32), strategies.integers(1, 3))
def test_invariants_survive_coordinate_changes(seed, point_type):
    """nu, gamma and tau do not see a swap of like variables or a rescaling of u and v."""
    g, nf = _random_normal_form(seed, point_type)
    expected = _nu_gamma_tau(nf)
    assert _nu_gamma_tau(normalize(swap_vars(g, *SWAPS[point_type]))) == expected
    scaled = rescale_functions(g, ps.constant(4, XYZ), ps.constant(-3, XYZ), ps.constant(2, XYZ))
    assert _nu_gamma_tau(normalize(scaled)) == expected


@given(strategies.integers(0, 2 ** 32), strategies.integers(1, 3))
def test_reconstruct_random_germs(seed, point_type):
    """Exact random germs are rebuilt from their normal forms."""
    _, nf = _random_normal_form(seed, point_type)
    u, v = nf.reconstruct()
    assert u == nf.germ.u
    assert v == nf.germ.v
