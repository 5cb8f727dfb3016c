"""Tests for prepared forms, invertibility and the A, C, I and curve invariants."""
import itertools
from fractions import Fraction

import pytest

from monoforge import series as ps
from monoforge.exceptions import WrongForm
from monoforge.germ import BaseType, MapGerm, make_germ, rescale_functions
from monoforge.prepared import (
    MINUS_INFINITY,
    CurveInvariantKind,
    GoodTag,
    InvertibilityCase,
    PreparedTag,
    ToroidalForm,
    A_C_invariants,
    I_invariant,
    classify_good,
    classify_prepared,
    curve_candidates,
    curve_invariant,
    good_openness_points,
    invertibility_of,
    is_monomial,
    is_mq_invertible,
    is_toroidal,
    lex_pair,
    monomial_invertibility,
    omega_value,
    prepared_form,
    reduce_p,
)

XYZ = ("x", "y", "z")


def test_bad_one_point(bad_one_point):
    """u = x^3, v = x^2 + x^5 y is prepared, bad, with A = 3 and C = (3, 5)."""
    pc = classify_prepared(bad_one_point)
    assert pc.tag == PreparedTag.ONE_POINT
    assert pc.exponents == {"a": 3, "b": 5}
    assert pc.form.p == {2: 1}
    good = classify_good(bad_one_point)
    assert good.tag == GoodTag.BAD
    assert good.witness == {"d": 2, "c": 5, "a": 3, "a_divides_d": False}
    entry = A_C_invariants(bad_one_point)["x"]
    assert entry.A == 3
    assert entry.C == (3, 5)


def test_two_point_monomial(monomial_two_point):
    """u = x^2 y^3, v = x y^2 is a good 2 point in monomial form."""
    pc = classify_prepared(monomial_two_point)
    assert pc.tag == PreparedTag.TWO_POINT_MONOMIAL
    assert pc.exponents == {"a": 2, "b": 3, "m": 1, "c": 1, "d": 2}
    assert classify_good(monomial_two_point).tag == GoodTag.MONOMIAL_2PT
    assert is_monomial(monomial_two_point)
    assert all(d.A == 0 for d in A_C_invariants(monomial_two_point).values())


def test_not_prepared():
    """u = xy, v = z^2 + xz matches no prepared form."""
    g = make_germ("x*y", "z^2 + x*z", XYZ, ("x", "y"))
    assert classify_prepared(g).tag == PreparedTag.NOT_PREPARED
    with pytest.raises(WrongForm):
        prepared_form(g)
    assert not is_monomial(g)


def test_one_point_not_invertible(omega_one_point):
    """u = x^k, v = x^c y with c < k is not principal."""
    result = is_mq_invertible(omega_one_point)
    assert not result.invertible
    assert result.case == InvertibilityCase.ONE_POINT_LINEAR
    assert curve_invariant(omega_one_point, CurveInvariantKind.OMEGA).value == 3


def test_one_point_invertible():
    """u = x^2, v = x^5 y is principal."""
    result = is_mq_invertible(make_germ("x^2", "x^5*y", XYZ, ("x",)))
    assert result.invertible
    assert result.case is None


def test_two_point_not_invertible(omega_two_point):
    """u = (xy)^3, v = x^2 y^7 has omega = (4, 1)."""
    result = is_mq_invertible(omega_two_point)
    assert result.case == InvertibilityCase.TWO_POINT_MONOMIAL
    assert curve_invariant(omega_two_point, CurveInvariantKind.LITTLE_OMEGA).value == (4, 1)


def test_sigma_of_two_point_series():
    """u = (xy)^3, v = (xy)^2 + x y^5 is not principal with sigma = (3, 1)."""
    g = make_germ("x^3*y^3", "x^2*y^2 + x*y^5", XYZ, ("x", "y"))
    assert is_mq_invertible(g).case == InvertibilityCase.TWO_POINT_SERIES
    assert curve_invariant(g, CurveInvariantKind.SIGMA).value == (3, 1)


def test_curve_invariant_on_wrong_form(monomial_two_point):
    """Omega is only defined at 1 points."""
    with pytest.raises(WrongForm):
        curve_invariant(monomial_two_point, CurveInvariantKind.OMEGA)


def test_curve_values_survive_scaling(omega_one_point, omega_two_point):
    """(u, v) -> (2u, 3v) leaves Omega and omega unchanged."""
    two, three = ps.constant(2, XYZ), ps.constant(3, XYZ)
    scaled = rescale_functions(omega_one_point, two, three)
    assert curve_invariant(scaled, CurveInvariantKind.OMEGA).value == 3
    scaled = rescale_functions(omega_two_point, two, three)
    assert curve_invariant(scaled, CurveInvariantKind.LITTLE_OMEGA).value == (4, 1)


def test_curve_candidates(omega_one_point, omega_two_point):
    """The non principal curves are the ones the forms single out."""
    found = curve_candidates(classify_prepared(omega_one_point))
    assert [(c.first, c.second, c.invariant.value, c.two_curve) for c in found] == [("x", "y", 3, False)]
    found = curve_candidates(classify_prepared(omega_two_point))
    assert [(c.first, c.second, c.invariant.value, c.two_curve) for c in found] == [("x", "y", (4, 1), True)]


def test_i_invariant():
    """I = c - a for u = x^a, v = x^c (alpha + y)."""
    assert I_invariant(make_germ("x^2", "3*x^5 + x^5*y", XYZ, ("x",))) == 3
    assert I_invariant(make_germ("x^4", "3*x^3 + x^3*y", XYZ, ("x",))) == -1


def test_i_invariant_needs_good_one_point(bad_one_point, monomial_two_point):
    """I is not defined away from the good 1 point form."""
    with pytest.raises(WrongForm):
        I_invariant(bad_one_point)
    with pytest.raises(WrongForm):
        I_invariant(monomial_two_point)


def test_toroidal_forms():
    """The toroidal forms over 1 and 2 points of the base."""
    assert is_toroidal(make_germ("x^2*y^3", "z", XYZ, ("x", "y"))) == (True, ToroidalForm.MONOMIAL_LINEAR)
    assert is_toroidal(make_germ("x^2", "y", XYZ, ("x",))) == (True, ToroidalForm.CURVE)
    translated = make_germ("x^2", "2*x^3 + x^3*y", XYZ, ("x",), base=BaseType.TWO_POINT)
    assert is_toroidal(translated) == (True, ToroidalForm.TRANSLATED_1PT)
    untranslated = make_germ("x^2", "x^3*y", XYZ, ("x",), base=BaseType.TWO_POINT)
    assert is_toroidal(untranslated) == (False, None)


def test_split_two_point():
    """u = x^2, v = y^3 over a 2 point of the base."""
    g = make_germ("x^2", "y^3", XYZ, ("x", "y"), base=BaseType.TWO_POINT)
    pc = classify_prepared(g)
    assert pc.tag == PreparedTag.SPLIT_2PT
    assert pc.exponents == {"u_x": 2, "v_y": 3}
    assert invertibility_of(pc) == InvertibilityCase.TWO_POINT_SPLIT
    assert classify_good(g).tag == GoodTag.SPLIT_2PT
    assert is_toroidal(g) == (True, ToroidalForm.MONOMIAL_2PT)
    assert curve_invariant(g, CurveInvariantKind.LITTLE_OMEGA).value == (3, 2)


def test_swapped_functions():
    """Over a 2 point of the base v may carry the whole divisor instead of u."""
    g = make_germ("y", "x*y", XYZ, ("x", "y"), base=BaseType.TWO_POINT)
    pc = classify_prepared(g)
    assert pc.tag == PreparedTag.TWO_POINT_MONOMIAL
    assert pc.swapped
    assert pc.base_germ.u == g.u


def test_lex_pair_and_omega():
    """lex_pair picks the larger ordering; comparable exponents give -inf."""
    assert lex_pair(1, 4) == (4, 1)
    assert omega_value((1, 1), 3, (2, 7)) == (4, 1)
    assert omega_value((1, 1), 3, (4, 5)) == MINUS_INFINITY
    assert MINUS_INFINITY < 0


def test_reduce_p():
    """Absorbable terms and, over a 1 point of the base, powers of u leave P."""
    assert reduce_p({2: Fraction(1), 4: Fraction(1), 7: Fraction(1)}, (1,), 2, (5,), True) == {}
    assert reduce_p({2: Fraction(1), 4: Fraction(1), 7: Fraction(1)}, (1,), 2, (5,), False) == {2: 1, 4: 1}


def _one_point_grid(top: int = 5):
    for k, c, j in itertools.product(range(1, top + 1), range(0, top + 1), (None, *range(1, top + 1))):
        terms = {(c, 1, 0): 1}
        if j is not None:
            terms[(j, 0, 0)] = 1
        yield MapGerm(ps.monomial((k, 0, 0), XYZ), ps.from_terms(terms, XYZ), ("x",))


def _two_point_grid(top: int = 3, ab=((1, 1), (1, 2), (2, 1))):
    for (a, b), k, c, d, t in itertools.product(ab, range(1, top + 1), range(0, top + 2),
                                               range(0, top + 2), (None, *range(1, top + 1))):
        terms = {(c, d, 0): Fraction(1)}
        if t is not None:
            terms[(t * a, t * b, 0)] = terms.get((t * a, t * b, 0), Fraction(0)) + 1
        yield MapGerm(ps.monomial((k * a, k * b, 0), XYZ), ps.from_terms(terms, XYZ), ("x", "y"))


def _three_point_grid(top: int = 2, exponents=((1, 1, 1), (1, 2, 1))):
    monomials = itertools.product(range(0, top + 1), repeat=3)
    for a, k, exps, t in itertools.product(exponents, range(1, top + 1), monomials, (None, *range(1, top + 1))):
        terms = {exps: Fraction(1)}
        if t is not None:
            power = tuple(t * e for e in a)
            terms[power] = terms.get(power, Fraction(0)) + 1
        yield MapGerm(ps.monomial(tuple(k * e for e in a), XYZ), ps.from_terms(terms, XYZ), XYZ)


def _disagreements(germs) -> tuple[int, list[tuple[str, str]]]:
    checked, wrong = 0, []
    for g in germs:
        pc = classify_prepared(g)
        if not pc.prepared:
            continue
        checked += 1
        if (invertibility_of(pc) is None) != monomial_invertibility(g):
            wrong.append((ps.format_series(g.u), ps.format_series(g.v)))
    return checked, wrong


@pytest.mark.parametrize("grid", [_one_point_grid, _two_point_grid, _three_point_grid])
def test_invertibility_matches_division(grid):
    """The case classification agrees with divisibility of the series themselves."""
    checked, wrong = _disagreements(grid())
    assert checked > 0
    assert not wrong, wrong[:5]


def test_good_iff_A_vanishes():
    """A 1 point over a 1 point of the base is good exactly when A = 0."""
    for g in _one_point_grid():
        pc = classify_prepared(g)
        good = classify_good(g).good
        assert good == (A_C_invariants(g)["x"].A == 0), ps.format_series(g.v)
        assert pc.tag == PreparedTag.ONE_POINT


def test_good_points_stay_good():
    """Nearby points of a good germ are good."""
    g = make_germ("x^2", "3*x^5 + x^5*y", XYZ, ("x",))
    points = good_openness_points(g)
    assert len(points) == 4
    assert all(classify_good(p).good for p in points)


@pytest.mark.corpus
def test_invertibility_full_grid():
    """Exponents up to 5 over 1 and 2 points, up to 3 over 3 points."""
    pairs = list(itertools.product(range(1, 6), repeat=2))
    triples = list(itertools.product(range(1, 4), repeat=3))
    for germs in (_one_point_grid(5), _two_point_grid(5, pairs), _three_point_grid(3, triples)):
        checked, wrong = _disagreements(germs)
        assert checked > 0
        assert not wrong, wrong[:5]
