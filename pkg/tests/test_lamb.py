import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import optimize, special

from hardylamb.bessel import first_zero
from hardylamb.errors import InvalidInput, InvalidParams
from hardylamb.lamb import (
    LambParams,
    classical_lamb,
    closed_form_lamb,
    lamb_constant,
    lamb_ode_continuation,
    lamb_residual,
    solve_lamb,
    solve_lamb_ode,
)


def scipy_root(nu, m, lam):
    """First root by scanning scipy's J and J' then brentq."""
    def f(z):
        return (1 - 2 * lam) * special.jv(nu, z) + m * z * special.jvp(nu, z)

    j = first_zero(nu).value
    step = j / 2000
    z = 1e-9
    while f(z + step) > 0:
        z += step
    return optimize.brentq(f, z, z + step, xtol=1e-15, rtol=1e-15)


params_strategy = st.tuples(
    st.floats(0.0, 3.0), st.floats(0.2, 3.0), st.floats(-2.0, 0.99)
).map(lambda t: (t[0], t[1], t[2] * 0.5 * (1 + t[0] * t[1])))


@pytest.mark.parametrize("nu,m,lam", [(0, 1, 0), (1, 1, 0.3), (0.5, 2, -1), (2, 0.5, 0.6), (0.25, 3, 0.5)])
def test_matches_independent_root(nu, m, lam):
    root = solve_lamb(LambParams(nu, m, lam))
    assert root.z == pytest.approx(scipy_root(nu, m, lam), abs=1e-10)
    assert root.c == pytest.approx(0.5 * m * root.z, rel=1e-15)


@given(params_strategy)
def test_root_is_first_and_inside(t):
    nu, m, lam = t
    params = LambParams(nu, m, lam)
    root = solve_lamb(params)
    assert 0 < root.z < first_zero(nu).value
    assert abs(lamb_residual(params, root.z)) < 1e-10
    # positive before the root
    assert lamb_residual(params, 0.5 * root.z) > 0


@given(st.floats(0.0, 2.0), st.floats(0.3, 3.0), st.floats(0.05, 0.9), st.floats(0.05, 0.9))
def test_constant_decreases_in_lambda(nu, m, a, b):
    assume(abs(a - b) > 1e-3)
    upper = 0.5 * (1 + nu * m)
    lo, hi = sorted((a * upper, b * upper))
    assert solve_lamb(LambParams(nu, m, lo)).c > solve_lamb(LambParams(nu, m, hi)).c


def test_limit_value_is_exact_zero():
    root = solve_lamb(LambParams(1, 1, 1.0))
    assert root.c == 0.0 and root.limiting and root.method == "limit"


def test_beyond_limit_rejected():
    with pytest.raises(InvalidParams):
        solve_lamb(LambParams(1, 1, 1.01))


@pytest.mark.parametrize("bad", [(-1, 1, 0), (1, 0, 0), (float("nan"), 1, 0), (1, 1, float("inf"))])
def test_params_validation(bad):
    with pytest.raises(InvalidInput):
        LambParams(*bad)


def test_closed_form_bessel_zero_branch():
    # lambda = (1 - m nu)/2 gives z = j_{nu - 1}
    params = LambParams(1.5, 1.0, 0.5 * (1 - 1.5))
    root = closed_form_lamb(params)
    assert root.z == pytest.approx(first_zero(0.5).value, abs=1e-12)
    assert root.z == pytest.approx(solve_lamb(params).z, abs=1e-10)


def test_closed_form_half_order_matches_bisection():
    for m, lam in [(1, 0), (2, 0.2), (0.5, 0.4)]:
        params = LambParams(0.5, m, lam)
        assert closed_form_lamb(params).z == pytest.approx(solve_lamb(params).z, abs=1e-10)


def test_closed_form_absent():
    assert closed_form_lamb(LambParams(0.3, 1, 0.1)) is None
    with pytest.raises(InvalidParams):
        lamb_constant(LambParams(0.3, 1, 0.1), "closed")


@given(st.sampled_from([(1.0, 1.0), (0.5, 2.0), (0.0, 1.0), (2.0, 0.5)]), st.floats(-0.5, 0.45))
def test_ode_route_agrees_with_bisection(nm, lam):
    params = LambParams(nm[0], nm[1], lam)
    assume(lam < 0.95 * params.upper)
    assert solve_lamb_ode(params).c == pytest.approx(solve_lamb(params).c, abs=1e-8)


def test_ode_rejects_off_curve_start():
    with pytest.raises(InvalidInput):
        lamb_ode_continuation(1.0, 2.0, 1.0, 1.0)


def test_classical_m1_nu0():
    assert classical_lamb(0.0, 1.0).z == pytest.approx(scipy_root(0, 1, 0), abs=1e-10)


def test_dispatch_methods_agree():
    params = LambParams(0.5, 1.5, 0.2)
    values = [lamb_constant(params, m).c for m in ("auto", "bisect", "ode", "closed")]
    assert max(values) - min(values) < 1e-8
    with pytest.raises(InvalidInput):
        lamb_constant(params, "newton")
