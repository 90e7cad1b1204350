import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from hardylamb.bessel import (
    bessel_j,
    bessel_j_prime,
    bessel_j_prime_series,
    first_zero,
    first_zero_of_derivative,
    squares_sum_identity,
)
from hardylamb.errors import DomainError, InvalidInput


def _bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 2.0, 3.0, 10.0])
def test_half_order_closed_form(z):
    assert bessel_j(0.5, z) == pytest.approx(math.sqrt(2 / (math.pi * z)) * math.sin(z), rel=1e-13, abs=1e-15)
    assert bessel_j(-0.5, z) == pytest.approx(math.sqrt(2 / (math.pi * z)) * math.cos(z), rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("nu", [0.0, 0.25, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("z", [0.01, 0.7, 3.3, 12.0, 40.0])
def test_matches_scipy(nu, z):
    assert bessel_j(nu, z) == pytest.approx(special.jv(nu, z), rel=1e-11, abs=1e-13)
    assert bessel_j_prime(nu, z) == pytest.approx(special.jvp(nu, z), rel=1e-10, abs=1e-12)


@given(st.floats(0.0, 6.0), st.floats(0.2, 15.0))
def test_derivative_matches_finite_difference(nu, z):
    h = 1e-5
    fd = (bessel_j(nu, z + h) - bessel_j(nu, z - h)) / (2 * h)
    assert bessel_j_prime(nu, z) == pytest.approx(fd, abs=1e-8)


@given(st.floats(0.1, 6.0), st.floats(0.1, 20.0))
def test_two_derivative_routes_agree(nu, z):
    assert bessel_j_prime(nu, z) == pytest.approx(bessel_j_prime_series(nu, z), abs=1e-12)


def test_zero_of_derivative_order_half_solves_tan_equation():
    # J'_{1/2}(z) = 0  <=>  tan z = 2z
    oracle = _bisect(lambda z: math.sin(z) - 2 * z * math.cos(z), 1.0, 1.5)
    assert first_zero_of_derivative(0.5).value == pytest.approx(oracle, abs=1e-12)


def test_zero_of_order_half_is_pi():
    assert first_zero(0.5).value == pytest.approx(math.pi, abs=1e-12)


@pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.0, 5.5, 10.0])
def test_zeros_match_scipy(nu):
    oracle = _bisect(lambda z: special.jv(nu, z), 1e-3 if nu == 0 else nu, nu + 2 * math.pi + 3)
    assert first_zero(nu).value == pytest.approx(oracle, abs=1e-11)
    doracle = _bisect(lambda z: special.jvp(nu, z), max(nu, 1e-3), first_zero(nu).value)
    if nu > 0:
        assert first_zero_of_derivative(nu).value == pytest.approx(doracle, abs=1e-11)


def test_first_derivative_zero_order_one_to_four_places():
    assert round(first_zero_of_derivative(1.0).value, 4) == 1.8412


@given(st.floats(0.0, 9.0), st.floats(0.01, 1.0))
def test_first_zero_increases_with_order(nu, dnu):
    assert first_zero(nu + dnu).value > first_zero(nu).value


@pytest.mark.parametrize("mu", [0.0, 1.0, 3.5])
def test_squares_sum(mu):
    lhs, total = squares_sum_identity(mu, 4.0, 40)
    assert lhs == pytest.approx(total, abs=1e-12)


def test_vectorised_evaluation():
    z = np.linspace(0.1, 5, 7)
    assert np.allclose(bessel_j(1.3, z), special.jv(1.3, z), rtol=1e-12)


def test_rejects_bad_arguments():
    with pytest.raises(InvalidInput):
        bessel_j(float("nan"), 1.0)
    with pytest.raises((DomainError, InvalidInput)):
        bessel_j(1.0, -1.0)
