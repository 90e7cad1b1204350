"""Parametric Lamb constants.

For a parameter triple (nu, m, lambda) the Lamb constant c is fixed by the
first root z in (0, j_nu) of

    F(z) = (1 - 2 lambda) J_nu(z) + m z J'_nu(z),        c = m z / 2.

(Substituting z = 2c/m into (1 - 2 lambda) J_nu(2c/m) + 2c J'_nu(2c/m) = 0
turns 2c into m z.)  lambda = 0 gives the classical Lamb constant C_nu(m).

The same root, viewed as a function of p = 2 (1 - 2 lambda) / m, solves
p J_nu(z) + 2 z J'_nu(z) = 0 and therefore the initial value problem
dz/dp = 2z / (p^2 - 4 nu^2 + 4 z^2); :func:`lamb_ode_continuation`
integrates it as an independent route to the same numbers.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._rootfind import bisect_newton, scan_first_sign_change
from .bessel import NU_MAX_ZERO, _jprime, _jv, bessel_j, bessel_j_prime, first_zero, first_zero_of_derivative
from .errors import ContinuationFailure, InternalError, InvalidInput, InvalidParams, SingularPath

SCAN_START = 1e-6
SCAN_FRACTION = 0.01  # scan step as a fraction of j_nu
CLOSED_FORM_ATOL = 1e-14

METHODS = ("bisect-newton", "ode-continuation", "closed-form", "limit")


@dataclass(frozen=True)
class LambParams:
    nu: float
    m: float
    lam: float

    def __post_init__(self):
        for name in ("nu", "m", "lam"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInput(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.nu < 0:
            raise InvalidInput(f"nu must be >= 0, got {self.nu!r}")
        if self.m <= 0:
            raise InvalidInput(f"m must be > 0, got {self.m!r}")

    @property
    def upper(self):
        """(1 + nu m) / 2, the supremum of x y'/y and the limit value of lambda."""
        return 0.5 * (1.0 + self.nu * self.m)

    @property
    def hardy_coeff(self):
        return 0.25 * (1.0 - (self.nu * self.m) ** 2)

    @property
    def p(self):
        """The parameter of the ODE form, p = 2 (1 - 2 lambda) / m."""
        return 2.0 * (1.0 - 2.0 * self.lam) / self.m

    def with_lambda(self, lam):
        return LambParams(self.nu, self.m, lam)

    def as_dict(self):
        return {"nu": self.nu, "m": self.m, "lambda": self.lam}


@dataclass(frozen=True)
class LambRoot:
    c: float
    z: float
    residual: float
    bracket: tuple
    method: str
    limiting: bool = False

    def as_dict(self):
        return {
            "c": self.c,
            "z": self.z,
            "residual": self.residual,
            "method": self.method,
            "bracket": list(self.bracket),
            "limiting": self.limiting,
        }


def lamb_residual(params, z):
    """F(z) = (1 - 2 lambda) J_nu(z) + m z J'_nu(z); z may be an array."""
    return (1.0 - 2.0 * params.lam) * bessel_j(params.nu, z) + params.m * z * bessel_j_prime(params.nu, z)


def _residual_and_slope(params):
    nu, m, a = params.nu, params.m, 1.0 - 2.0 * params.lam

    def f(z):
        return a * _jv(nu, z) + m * z * _jprime(nu, z)

    def fprime(z):
        # uses z J'' = -J' - (z - nu^2/z) J
        return a * _jprime(nu, z) - m * (z - nu * nu / z) * _jv(nu, z)

    return f, fprime


def _check_solvable(params):
    if params.nu > NU_MAX_ZERO:
        raise InvalidParams(f"nu must be <= {NU_MAX_ZERO}, got {params.nu!r}")
    if not 1.0 - 2.0 * params.lam + params.m * params.nu > 0:
        raise InvalidParams(
            "1 - 2*lambda + m*nu must be > 0 (lambda < (1 + nu m)/2), "
            f"got nu={params.nu}, m={params.m}, lambda={params.lam}"
        )


def _limit_root(params):
    return LambRoot(c=0.0, z=0.0, residual=0.0, bracket=(0.0, 0.0), method="limit", limiting=True)


def solve_lamb(params):
    """First root of the parametric Lamb equation, by scan + bisection + Newton.

    lambda exactly equal to (1 + nu m)/2 is the limiting case c = 0 and is
    returned without running the solver (``limiting=True``).
    """
    if params.lam == params.upper:
        return _limit_root(params)
    _check_solvable(params)
    j_nu = first_zero(params.nu).value
    f, fprime = _residual_and_slope(params)

    start = SCAN_START
    f_start = f(start)
    # lambda within ~1e-12 of the limit puts the root below the scan start
    while not f_start > 0.0 and start > 1e-150:
        start *= 1e-3
        f_start = f(start)
    f_end = f(j_nu)
    if not (f_start > 0.0 and f_end < 0.0):
        raise InternalError(
            f"residual does not change sign on ({start}, j_nu={j_nu}): F={f_start}, {f_end}"
        )
    if start < SCAN_START:
        lo, hi, f_lo, f_hi = start, SCAN_START, f_start, f(SCAN_START)
        if f_hi > 0:
            lo, hi, f_lo, f_hi = scan_first_sign_change(
                lambda zs: f(zs), SCAN_START, SCAN_FRACTION * j_nu, j_nu
            )
    else:
        lo, hi, f_lo, f_hi = scan_first_sign_change(lambda zs: f(zs), start, SCAN_FRACTION * j_nu, j_nu)
    z, _ = bisect_newton(f, fprime, lo, hi, f_lo, f_hi)
    return LambRoot(
        c=0.5 * params.m * z,
        z=z,
        residual=f(z),
        bracket=(lo, hi),
        method="bisect-newton",
    )


def classical_lamb(nu, m):
    """C_nu(m): the Lamb constant at lambda = 0."""
    return solve_lamb(LambParams(nu, m, 0.0))


def _trig_root(m, lam):
    """First root in (0, pi) of 2 m z cos z - (4 lambda + m - 2) sin z."""
    k = 4.0 * lam + m - 2.0

    def h(z):
        return 2.0 * m * z * np.cos(z) - k * np.sin(z)

    def dh(z):
        return (2.0 * m - k) * math.cos(z) - 2.0 * m * z * math.sin(z)

    lo, hi, f_lo, f_hi = scan_first_sign_change(h, SCAN_START, math.pi / 100, math.pi)
    z, _ = bisect_newton(lambda x: float(h(x)), dh, lo, hi, f_lo, f_hi)
    return z, (lo, hi)


def closed_form_lamb(params):
    """Closed-form root when one applies, else ``None``.

    (a) lambda = (1 - m nu)/2, nu > 0:  z = j_{nu-1}
    (b) lambda = 1/2, nu > 0:           z = j'_nu
    (c) nu = 1/2:                       first root of the trigonometric form
    """
    nu, m, lam = params.nu, params.m, params.lam
    if not 1.0 - 2.0 * lam + m * nu > 0 or nu > NU_MAX_ZERO:
        return None
    if nu > 0 and abs(lam - 0.5 * (1.0 - m * nu)) <= CLOSED_FORM_ATOL:
        z = first_zero(nu - 1.0).value
        bracket = (z, z)
    elif nu > 0 and abs(lam - 0.5) <= CLOSED_FORM_ATOL:
        z = first_zero_of_derivative(nu).value
        bracket = (z, z)
    elif nu == 0.5:
        z, bracket = _trig_root(m, lam)
    else:
        return None
    return LambRoot(
        c=0.5 * m * z,
        z=z,
        residual=float(lamb_residual(params, z)),
        bracket=bracket,
        method="closed-form",
    )


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def lamb_ode_continuation(nu, p_start, z_start, p_end, tol=1e-12, max_steps=100000):
    """Carry a root of p J_nu(z) + 2 z J'_nu(z) = 0 from p_start to p_end.

    Integrates dz/dp = 2z / (p^2 - 4 nu^2 + 4 z^2) with an adaptive
    Dormand-Prince 5(4) pair, local error per step <= tol * max(1, |z|).
    The result is not polished against the equation.
    """
    nu = float(nu)
    p_start, z_start, p_end = float(p_start), float(z_start), float(p_end)
    j_nu = first_zero(nu).value
    if not 0.0 < z_start < j_nu:
        raise InvalidInput(f"z_start must lie in (0, j_nu={j_nu}), got {z_start}")
    anchor = p_start * _jv(nu, z_start) + 2.0 * z_start * _jprime(nu, z_start)
    if abs(anchor) > 1e-9:
        raise InvalidInput(f"(p_start, z_start) is not on the root curve, residual {anchor:.3e}")

    def rhs(p, z):
        den = p * p - 4.0 * nu * nu + 4.0 * z * z
        if not den > 0.0:
            raise SingularPath(f"denominator p^2 - 4nu^2 + 4z^2 = {den:.3e} at p={p}, z={z}")
        return 2.0 * z / den

    p, z = p_start, z_start
    span = p_end - p_start
    if span == 0.0:
        return z
    direction = math.copysign(1.0, span)
    h = span / 20.0
    k1 = rhs(p, z)
    for _ in range(max_steps):
        if direction * (p + h - p_end) > 0:
            h = p_end - p
        ks = [k1]
        for i in range(1, 7):
            zi = z + h * sum(a * k for a, k in zip(_DP_A[i], ks))
            ks.append(rhs(p + _DP_C[i] * h, zi))
        z5 = z + h * sum(b * k for b, k in zip(_DP_B5, ks))
        z4 = z + h * sum(b * k for b, k in zip(_DP_B4, ks))
        err = abs(z5 - z4)
        scale = tol * max(1.0, abs(z5))
        if err <= scale:
            p += h
            z = z5
            k1 = ks[6]  # first-same-as-last
            if not 0.0 < z < j_nu:
                raise ContinuationFailure(f"z left (0, j_nu) at p={p}: z={z}")
            if p == p_end or direction * (p - p_end) >= 0:
                return z
        factor = 0.9 * (scale / err) ** 0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
    raise ContinuationFailure(f"no convergence within {max_steps} steps")


def solve_lamb_ode(params, anchor_lambda=0.0):
    """Lamb root reached by continuation from the lambda = 0 anchor, p = 2/m."""
    if params.lam == params.upper:
        return _limit_root(params)
    _check_solvable(params)
    anchor = solve_lamb(params.with_lambda(anchor_lambda))
    z = lamb_ode_continuation(params.nu, 2.0 * (1.0 - 2.0 * anchor_lambda) / params.m, anchor.z, params.p)
    return LambRoot(
        c=0.5 * params.m * z,
        z=z,
        residual=float(lamb_residual(params, z)),
        bracket=(z, z),
        method="ode-continuation",
    )


def lamb_constant(params, method="auto"):
    """Dispatch on ``method``: auto (closed form, else bisect), bisect, ode, closed."""
    if method == "bisect":
        return solve_lamb(params)
    if method == "ode":
        return solve_lamb_ode(params)
    if method == "closed":
        root = closed_form_lamb(params)
        if root is None:
            raise InvalidParams(
                f"no closed form for nu={params.nu}, m={params.m}, lambda={params.lam}"
            )
        return root
    if method == "auto":
        if params.lam == params.upper:
            return _limit_root(params)
        _check_solvable(params)
        root = closed_form_lamb(params)
        return root if root is not None else solve_lamb(params)
    raise InvalidInput(f"unknown method {method!r}; expected auto, bisect, ode or closed")
