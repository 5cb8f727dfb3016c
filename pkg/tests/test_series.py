"""Tests for truncated series arithmetic."""
from fractions import Fraction

import pytest
from hypothesis import given, strategies

from monoforge import series as ps
from monoforge.const import EXACT
from monoforge.exceptions import IrrationalRoot, MalformedGerm, NonUnit, NotDivisible, WrongForm

XY = ("x", "y")

monomials = strategies.tuples(strategies.integers(0, 3), strategies.integers(0, 3))
coefficients = strategies.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = strategies.dictionaries(monomials, coefficients, max_size=4).map(lambda t: ps.from_terms(t, XY))


def test_parse_and_format():
    """Terms print by ascending degree, then descending exponents."""
    f = ps.parse_series("x^2 + 3/2*x*y - y", XY)
    assert f.is_exact
    assert ps.format_series(f) == "-y + x^2 + 3/2*x*y"
    assert ps.order(f) == 1


def test_parse_rejects_garbage():
    """Unparseable text is a malformed germ."""
    with pytest.raises(MalformedGerm):
        ps.parse_series("x y", XY)


def test_rings_have_one_to_three_generators():
    assert ps.series_ring(("x", "y", "z")) is ps.series_ring(("x", "y", "z"))
    for names in ((), ("x", "x"), ("x", "y", "z", "t")):
        with pytest.raises(MalformedGerm):
            ps.series_ring(names)


def test_zero_orders():
    """An exact zero has infinite order, a truncated one only a lower bound."""
    assert ps.order(ps.zero(XY)) == EXACT
    unknown = ps.order(ps.zero(XY, 5))
    assert isinstance(unknown, ps.UnknownOrder)
    assert unknown.at_least == 6
    assert ps.order_bound(ps.zero(XY, 5)) == 6


def test_truncated_product_precision():
    """N(fg) = min(N(f) + ord g, N(g) + ord f)."""
    f = ps.parse_series("x + y^2", XY, precision=4)
    g = ps.parse_series("x^2", XY)
    h = ps.mul(f, g)
    assert h.precision == 6
    assert ps.format_series(h, False) == "x^3 + x^2*y^2"


def test_addition_takes_minimum_precision():
    """Adding a truncated series drops terms above the common precision."""
    f = ps.parse_series("x^5 + y", XY)
    g = ps.parse_series("x", XY, precision=3)
    h = ps.add(f, g)
    assert h.precision == 3
    assert h.terms() == {(1, 0): 1, (0, 1): 1}


def test_invert_unit():
    """(1 + x) (1 + x)^-1 = 1 up to the working precision."""
    f = ps.parse_series("1 + x", XY)
    inv = ps.invert_unit(f, 6)
    assert ps.coefficient(inv, (3, 0)) == -1
    product = ps.mul(f, inv)
    assert product.terms() == {(0, 0): 1}


def test_invert_constant_stays_exact():
    """Constant units invert exactly."""
    inv = ps.invert_unit(ps.constant(4, XY))
    assert inv.is_exact
    assert inv.terms() == {(0, 0): Fraction(1, 4)}


def test_unit_power_square_root():
    """(1 + x)^(1/2) squares back to 1 + x."""
    root = ps.unit_power(ps.parse_series("1 + x", XY), 1, 2, 8)
    assert ps.coefficient(root, (1, 0)) == Fraction(1, 2)
    assert ps.coefficient(root, (2, 0)) == Fraction(-1, 8)
    assert ps.mul(root, root).terms() == {(0, 0): 1, (1, 0): 1}


def test_unit_power_needs_unit():
    """A vanishing constant term is refused."""
    with pytest.raises(NonUnit):
        ps.unit_power(ps.parse_series("x + y", XY), 1, 2)


def test_rational_root():
    """Rational roots exist exactly when numerator and denominator are powers."""
    assert ps.rational_root(Fraction(9, 4), 2) == Fraction(3, 2)
    assert ps.rational_root(Fraction(-8), 3) == -2
    with pytest.raises(IrrationalRoot):
        ps.rational_root(Fraction(2), 2)
    with pytest.raises(IrrationalRoot):
        ps.rational_root(Fraction(-4), 2)


def test_divide_monomial():
    """Exact quotient by a monomial, and the failure when a term is not divisible."""
    f = ps.parse_series("x^2*y + x^3", XY)
    q = ps.divide_monomial(f, (2, 0))
    assert ps.format_series(q) == "x + y"
    with pytest.raises(NotDivisible):
        ps.divide_monomial(f, (0, 1))


def test_monomial_and_unit():
    """x^2 (1 + y) splits; x + y does not."""
    split = ps.monomial_and_unit(ps.parse_series("x^2 + x^2*y", XY))
    assert split is not None
    assert split[0] == (2, 0)
    assert ps.monomial_and_unit(ps.parse_series("x + y", XY)) is None


def test_divides():
    """Divisibility is decided when one side is a monomial times a unit."""
    u = ps.parse_series("x^2", XY)
    assert ps.divides(u, ps.parse_series("x^3 + x^2*y", XY))
    assert not ps.divides(u, ps.parse_series("x*y", XY))
    with pytest.raises(WrongForm):
        ps.divides(ps.parse_series("x + y", XY), ps.parse_series("x - y", XY))


def test_substitute_and_translate():
    """Composition with polynomial images is exact."""
    f = ps.parse_series("x*y", XY)
    g = ps.substitute(f, {"y": ps.parse_series("x*y + x", XY)}, XY)
    assert ps.format_series(g) == "x^2 + x^2*y"
    assert ps.format_series(ps.translate(f, "y", 2)) == "2*x + x*y"


def test_restrict_and_split():
    """Setting a variable to zero, and splitting by a monomial predicate."""
    f = ps.parse_series("x + y + x*y", XY)
    assert ps.format_series(ps.restrict_zero(f, ("x",))) == "y"
    pure, rest = ps.split_by(f, lambda m: m[1] == 0)
    assert ps.format_series(pure) == "x"
    assert ps.format_series(rest) == "y + x*y"


def test_truncated_format_shows_remainder():
    """Truncated series print their remainder."""
    f = ps.parse_series("x + y", XY, precision=3)
    assert ps.format_series(f) == "x + y + O(4)"


@given(polys, polys)
def test_product_commutes(f, g):
    """Exact multiplication is commutative."""
    assert ps.mul(f, g) == ps.mul(g, f)


@given(polys, polys, polys)
def test_product_distributes(f, g, h):
    """f (g + h) = f g + f h for exact series."""
    assert ps.mul(f, ps.add(g, h)) == ps.add(ps.mul(f, g), ps.mul(f, h))


@given(polys)
def test_negation_cancels(f):
    """f - f vanishes exactly."""
    assert ps.sub(f, f).is_zero()
    assert ps.order(ps.sub(f, f)) == EXACT


@given(polys, strategies.integers(1, 3))
def test_order_of_truncation(f, n):
    """Truncation never lowers the certified order."""
    t = ps.truncate(f, n)
    assert ps.order_bound(t) >= min(ps.order_bound(f), n + 1)
