import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from hardylamb.errors import AccuracyFailure, InvalidInput
from hardylamb.quadrature import integrate_segment, layer_cake_integral, monte_carlo_integral
from hardylamb.subjects import Ball, Box


def beta_fn(a, b):
    return math.gamma(a) * math.gamma(b) / math.gamma(a + b)


@pytest.mark.parametrize("a,b", [(-0.5, 0.0), (-0.9, 0.0), (-0.5, 1.5), (2.5, 0.25), (0.0, 3.0)])
def test_endpoint_singular_beta_integrals(a, b):
    res = integrate_segment(lambda x: x**a * (1 - x) ** b, 0, 1, True, True, rel_tol=1e-12)
    assert res.value == pytest.approx(beta_fn(a + 1, b + 1), rel=1e-10)
    assert res.error_estimate < 1e-9


def test_right_singularity_in_distance_form():
    # 1 - x is inexact near 1, so split at 1/2 and map the right half onto [0, 1/2]
    f = lambda t: t**-0.5 * (1 - t) ** -0.75
    left = integrate_segment(f, 0, 0.5, singular_left=True, rel_tol=1e-12).value
    right = integrate_segment(lambda t: (1 - t) ** -0.5 * t**-0.75, 0, 0.5, singular_left=True, rel_tol=1e-12).value
    assert left + right == pytest.approx(beta_fn(0.5, 0.25), rel=1e-10)


def test_log_singularity():
    res = integrate_segment(np.log, 0, 1, singular_left=True)
    assert res.value == pytest.approx(-1.0, rel=1e-10)


def test_kink_breakpoint_against_scipy():
    f = lambda x: np.abs(x - 0.3) ** 1.5 * np.exp(x)
    ours = integrate_segment(f, 0, 2, breakpoints=(0.3,)).value
    ref, _ = integrate.quad(f, 0, 2, points=[0.3], epsabs=1e-14, epsrel=1e-13)
    assert ours == pytest.approx(ref, rel=1e-10)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3.0))
def test_linearity(alpha, beta, p):
    f = lambda x: x ** (p - 1)
    g = lambda x: np.cos(3 * x)
    lin = integrate_segment(lambda x: alpha * f(x) + beta * g(x), 0, 1, True, False).value
    sep = alpha * integrate_segment(f, 0, 1, True).value + beta * integrate_segment(g, 0, 1).value
    assert lin == pytest.approx(sep, abs=1e-9 * (1 + abs(alpha) / p + abs(beta)))


@given(st.floats(0.05, 0.95))
def test_additivity(c):
    f = lambda x: x**-0.4 * np.sin(4 * x) ** 2
    whole = integrate_segment(f, 0, 1, True).value
    split = integrate_segment(f, 0, c, True).value + integrate_segment(f, c, 1).value
    assert whole == pytest.approx(split, rel=1e-9, abs=1e-12)


def test_interval_cap_reports_partial():
    with pytest.raises(AccuracyFailure) as info:
        integrate_segment(lambda x: np.sin(400 * x), 0, 1, rel_tol=1e-12, max_intervals=4)
    assert info.value.partial is not None
    assert info.value.partial.evaluations > 0


def test_interior_non_finite_rejected():
    with pytest.raises(AccuracyFailure), np.errstate(divide="ignore"):
        integrate_segment(lambda x: 1 / (x - 0.5) ** 2, 0, 1)


def test_bad_interval():
    with pytest.raises(InvalidInput):
        integrate_segment(np.sin, 1, 0)


def test_layer_cake_ball_distance():
    # int_{B^2} delta = int_0^1 t 2 pi (1 - t) dt = pi / 3
    assert layer_cake_integral(Ball(2, 1), lambda t: t).value == pytest.approx(math.pi / 3, rel=1e-10)


def test_layer_cake_ball3_power():
    # int_0^1 t^-0.5 4 pi (1 - t)^2 dt = 4 pi B(1/2, 3)
    res = layer_cake_integral(Ball(3, 1), lambda t: t**-0.5)
    assert res.value == pytest.approx(4 * math.pi * beta_fn(0.5, 3), rel=1e-9)


@pytest.mark.parametrize("domain", [Ball(2, 1.5), Ball(3, 1), Ball(4, 0.7), Box((1, 1)), Box((2, 1, 1)), Box((3, 1))])
def test_layer_cake_volume(domain):
    assert layer_cake_integral(domain, np.ones_like).value == pytest.approx(domain.volume, rel=1e-9)


def test_layer_cake_box_kink():
    # int_{[0,2]x[0,1]} delta: level sets have a kink where the long side runs out
    box = Box((2, 1))
    xs = np.linspace(0, 2, 2001)
    ys = np.linspace(0, 1, 1001)
    X, Y = np.meshgrid(xs, ys)
    D = np.minimum(np.minimum(X, 2 - X), np.minimum(Y, 1 - Y))
    ref = integrate.trapezoid(integrate.trapezoid(D, xs, axis=1), ys)
    assert layer_cake_integral(box, lambda t: t).value == pytest.approx(ref, rel=1e-5)


@pytest.mark.parametrize("domain", [Ball(2, 1), Ball(3, 1), Box((1, 1)), Box((2, 1, 1))])
def test_monte_carlo_agrees_with_layer_cake(domain):
    lc = layer_cake_integral(domain, lambda t: t**0.5).value
    mc, err = monte_carlo_integral(domain, lambda x: domain.dist(x) ** 0.5, 100_000, seed=7)
    assert abs(mc - lc) <= max(0.01 * abs(lc), 3 * err)


def test_monte_carlo_deterministic():
    ball = Ball(3, 1)
    f = lambda x: domain_sq(x)
    a = monte_carlo_integral(ball, f, 5000, seed=3)
    b = monte_carlo_integral(ball, f, 5000, seed=3)
    c = monte_carlo_integral(ball, f, 5000, seed=4)
    assert a == b and a != c


def domain_sq(x):
    return np.sum(x * x, axis=1)
