"""Shared germs and test settings."""
import pytest
from hypothesis import HealthCheck, settings

from monoforge.germ import make_germ

# sympy ring arithmetic is slow to warm up; keep example counts modest
settings.register_profile("monoforge", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("monoforge")

XYZ = ("x", "y", "z")


@pytest.fixture
def bad_one_point():
    """u = x^3, v = x^2 + x^5 y over a 1 point of the base."""
    return make_germ("x^3", "x^2 + x^5*y", XYZ, ("x",))


@pytest.fixture
def monomial_two_point():
    """u = x^2 y^3, v = x y^2."""
    return make_germ("x^2*y^3", "x*y^2", XYZ, ("x", "y"))


@pytest.fixture
def omega_one_point():
    """u = x^5, v = x^2 y: not principal along (x, y)."""
    return make_germ("x^5", "x^2*y", XYZ, ("x",))


@pytest.fixture
def omega_two_point():
    """u = (xy)^3, v = x^2 y^7."""
    return make_germ("x^3*y^3", "x^2*y^7", XYZ, ("x", "y"))


@pytest.fixture
def translated_one_point():
    """u = x^2, v = x^6 (2 + y): good with I = 4."""
    return make_germ("x^2", "2*x^6 + x^6*y", XYZ, ("x",))
