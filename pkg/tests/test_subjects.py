import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from hardylamb.errors import InvalidInput
from hardylamb.lamb import LambParams, solve_lamb
from hardylamb.subjects import (
    Ball,
    BesselProfile,
    Box,
    OneSidedSubject,
    PowerBump,
    RadialSubject,
    SegmentSubject,
    SinePower,
    SmoothTent,
    make_test_function,
    parse_domain,
)

FAMILIES = [PowerBump(2, 1), PowerBump(1.5, 0), SinePower(2), SmoothTent(3),
            BesselProfile(0.5, 1, solve_lamb(LambParams(0.5, 1, 0.2)).c)]


@pytest.mark.parametrize("u", FAMILIES, ids=lambda u: u.describe())
def test_derivative_matches_finite_difference(u):
    s = np.linspace(0.05, 0.95, 19)
    h = 1e-6
    fd = (u.eval(s + h) - u.eval(s - h)) / (2 * h)
    assert np.allclose(u.deriv(s), fd, atol=1e-7)


@pytest.mark.parametrize("u", FAMILIES, ids=lambda u: u.describe())
def test_critical_points_are_zeros_of_the_slope(u):
    for x in u.critical_points():
        assert abs(u.deriv(x)) < 1e-9


def test_bessel_profile_critical_point_when_lambda_negative():
    params = LambParams(0.25, 0.5, -1.0)
    u = BesselProfile(0.25, 0.5, solve_lamb(params).c)
    (x,) = u.critical_points()
    assert 0 < x < 1 and abs(u.deriv(x)) < 1e-9


def test_bessel_profile_log_slope_at_one_is_lambda():
    params = LambParams(1.0, 1.0, 0.3)
    u = BesselProfile(1.0, 1.0, solve_lamb(params).c)
    assert float(u.deriv(1.0) / u.eval(1.0)) == pytest.approx(0.3, abs=1e-10)


def test_bessel_profile_rejects_sign_change():
    with pytest.raises(InvalidInput):
        BesselProfile(0, 1, 5.0)


@pytest.mark.parametrize("spec,text", [("powerbump:2,1", "powerbump:2,1"), ("SinePower:1.5", "sinepower:1.5"),
                                       ("smoothtent:2", "smoothtent:2"), ("zero", "zero"),
                                       ("besselprofile:1,1,0.3", "besselprofile:1,1,0.3")])
def test_spec_round_trip(spec, text):
    assert make_test_function(spec).describe() == text


@pytest.mark.parametrize("bad", ["powerbump:2", "wave:1", "powerbump:a,b", "sinepower:-1", ""])
def test_bad_specs(bad):
    with pytest.raises(InvalidInput):
        make_test_function(bad)


def test_unknown_family_lists_valid_names():
    with pytest.raises(InvalidInput, match="powerbump"):
        make_test_function("wave:1")


@pytest.mark.parametrize("spec,vol", [("ball:2,1", math.pi), ("ball:3,2", 32 * math.pi / 3), ("box:2x1x1", 2.0)])
def test_domain_parse(spec, vol):
    d = parse_domain(spec)
    assert d.describe() == spec and d.volume == pytest.approx(vol)


@pytest.mark.parametrize("bad", ["ball:5,1", "ball:2,-1", "box:1x0", "disk:1", "box:axb"])
def test_bad_domains(bad):
    with pytest.raises(InvalidInput):
        parse_domain(bad)


@pytest.mark.parametrize("domain", [Ball(2, 1), Ball(3, 0.5), Box((2, 1)), Box((3, 1, 2))])
def test_area_is_minus_derivative_of_volume(domain):
    t = np.linspace(0.01, 0.95 * domain.inradius, 13)
    t = t[~np.isin(np.round(t, 8), np.round(domain.area_breakpoints(), 8))]
    h = 1e-6
    fd = -(domain.volume_profile(t + h) - domain.volume_profile(t - h)) / (2 * h)
    assert np.allclose(domain.area_profile(t), fd, rtol=1e-6)


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_box_distance_brute_force(point):
    box = Box((2, 1, 1.5))
    x = np.array(point) * 0.5 + np.array([1, 0.5, 0.75])
    d = box.dist(x[None])[0]
    assert d == pytest.approx(min(min(x[i], s - x[i]) for i, s in enumerate(box.sides)))


def _brute_segment(subject, a_pow, b_pow, s_pow):
    u, a, b = subject.profile, subject.a, subject.b
    L = b - a

    def g(x):
        if subject.embedding == "affine":
            return u.eval((x - a) / L), u.deriv((x - a) / L) / L
        d0 = L / 2
        d = min(x - a, b - x)
        sign = 1 if x - a < b - x else -1
        return u.eval(d / d0), sign * u.deriv(d / d0) / d0

    def f(x):
        v, dv = g(x)
        return abs(v) ** a_pow * abs(dv) ** b_pow / min(x - a, b - x) ** s_pow

    mid = 0.5 * (a + b)
    return sum(integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0] for lo, hi in ((a, mid), (mid, b)))


@pytest.mark.parametrize("embedding", ["affine", "radial"])
def test_segment_pieces_integrate_like_the_function(embedding):
    subject = SegmentSubject(PowerBump(2, 1.5), -0.5, 2.5, embedding)
    total = 0.0
    for piece in subject.pieces():
        w = piece.weight or (lambda t: 1.0)
        total += integrate.quad(lambda t: piece.value(t) * piece.slope(t) / t * w(t), 0, piece.length,
                                epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    assert total == pytest.approx(_brute_segment(subject, 1, 1, 1), rel=1e-8)


def test_affine_needs_two_sided_profile():
    with pytest.raises(InvalidInput):
        SegmentSubject(PowerBump(2, 0), 0, 1, "affine")


def test_one_sided_scale():
    subject = OneSidedSubject(PowerBump(2, 1), rho=3)
    assert subject.scale == 3 and subject.pieces()[0].length == 3


def test_radial_subject_value_and_gradient():
    ball = Ball(2, 2)
    subject = RadialSubject(ball, PowerBump(2, 0))
    x = np.array([[0.5, 0.0]])
    assert subject.value(x)[0] == pytest.approx((1.5 / 2) ** 2)
    assert subject.gradient_magnitude(x)[0] == pytest.approx(2 * 0.75 / 2)


def test_radial_subject_needs_zero_boundary_value():
    with pytest.raises(InvalidInput):
        RadialSubject(Ball(2, 1), _Constant())


class _Constant(PowerBump):
    def __init__(self):
        super().__init__(1, 0)

    def _value(self, s, sc):
        return np.ones_like(np.asarray(s, dtype=float))
