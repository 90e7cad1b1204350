"""Bessel functions of the first kind of real order.

Everything here is built on the ascending power series

    J_nu(z) = (z/2)^nu / Gamma(nu+1) * sum_k (-(z/2)^2)^k / (k! (nu+1)_k)

The sum is accumulated in float64 with Neumaier compensation while an a
priori bound on its rounding error is tracked alongside.  The terms of the
series grow like I_nu(z) before they cancel down to J_nu(z), so for larger
arguments (roughly z > 7) the float64 sum cannot deliver 1e-11 absolute
accuracy; those entries are re-summed in 64-digit decimal arithmetic.
Arguments are capped at Z_MAX = 60, where the cancellation is about 26
digits and the decimal sum still keeps more than 30.
"""

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np

from ._rootfind import bisect_newton, scan_first_sign_change
from .errors import DomainError, InvalidInput

Z_MAX = 60.0
NU_MAX_ZERO = 12.0
ZERO_SCAN_START = 1e-6
ZERO_SCAN_STEP = 0.1  # consecutive zeros are > pi/2 apart for nu <= 12

_EPS = float(np.finfo(float).eps)
_FAST_PATH_ERR = 1e-12
_DECIMAL_PREC = 64


def gamma_real(x):
    """Gamma function for positive real arguments."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise InvalidInput(f"gamma_real needs a positive finite argument, got {x!r}")
    return math.gamma(x)


def _check_order(nu, lower=-1.0):
    nu = float(nu)
    if not math.isfinite(nu) or nu <= lower:
        raise InvalidInput(f"order must be > {lower}, got {nu!r}")
    return nu


def _prefactor(power, nu, half):
    """(z/2)^power / Gamma(nu + 1); half = z/2 may be a float or an array."""
    if nu + 1.0 < 170.0:
        return half**power / math.gamma(nu + 1.0)
    return np.exp(power * np.log(half) - math.lgamma(nu + 1.0))


# -- series kernels ---------------------------------------------------------
#
# All kernels return sum_k t_k * (a + b*k) with t_0 = 1 and
# t_k = -t_{k-1} * q / (k (k + nu)), q = (z/2)^2.  (a, b) = (1, 0) gives J,
# (nu/2, 1) gives the derivative series.


def _series_float(nu, q, a, b):
    t = 1.0
    s = a
    comp = 0.0
    mag = abs(a)
    bound = abs(a)
    k = 0
    while True:
        k += 1
        t = -t * q / (k * (k + nu))
        w = a + b * k
        term = t * w
        tmp = s + term
        if abs(s) >= abs(term):
            comp += (s - tmp) + term
        else:
            comp += (term - tmp) + s
        s = tmp
        at = abs(term)
        mag += at
        bound += at * (3 * k + 1)
        if t == 0.0 or (k * k > q and abs(t) * (abs(a) + abs(b) * k) <= 1e-18 * mag):
            break
    return s + comp, _EPS * bound


def _series_float_vec(nu, q, a, b):
    t = np.ones_like(q)
    s = np.full_like(q, a)
    comp = np.zeros_like(q)
    mag = np.full_like(q, abs(a))
    bound = np.full_like(q, abs(a))
    qmax = float(q.max()) if q.size else 0.0
    k = 0
    while True:
        k += 1
        t = -t * q / (k * (k + nu))
        term = t * (a + b * k)
        tmp = s + term
        big = np.abs(s) >= np.abs(term)
        comp += np.where(big, (s - tmp) + term, (term - tmp) + s)
        s = tmp
        at = np.abs(term)
        mag += at
        bound += at * (3 * k + 1)
        if k * k > qmax and np.all(np.abs(t) * (abs(a) + abs(b) * k) <= 1e-18 * mag):
            break
    return s + comp, _EPS * bound


def _series_decimal(nu, z, a, b):
    with localcontext() as ctx:
        ctx.prec = _DECIMAL_PREC
        half = Decimal(z) / 2
        q = half * half
        dnu = Decimal(nu)
        da = Decimal(a)
        db = Decimal(b)
        t = Decimal(1)
        s = da
        tiny = Decimal(10) ** (-_DECIMAL_PREC + 4)
        k = 0
        while True:
            k += 1
            t = -t * q / (k * (k + dnu))
            s += t * (da + db * k)
            if k * k > q and abs(t) * (abs(da) + abs(db) * k) <= tiny * (abs(s) + 1):
                break
        return float(s)


def _sum(nu, z, a, b, shift):
    """pref(nu + shift) * series(a, b), scalar or array z > 0."""
    if np.ndim(z) == 0:
        half = 0.5 * z
        s, err = _series_float(nu, half * half, a, b)
        pref = float(_prefactor(nu + shift, nu, half))
        if pref * err > _FAST_PATH_ERR:
            s = _series_decimal(nu, z, a, b)
        return pref * s
    half = 0.5 * z
    s, err = _series_float_vec(nu, half * half, a, b)
    pref = _prefactor(nu + shift, nu, half)
    for i in np.nonzero(pref * err > _FAST_PATH_ERR)[0]:
        s[i] = _series_decimal(nu, float(z[i]), a, b)
    return pref * s


def _as_argument(z):
    if np.ndim(z) == 0:
        zf = float(z)
        if not 0.0 <= zf <= Z_MAX:
            raise DomainError(f"argument must lie in [0, {Z_MAX}], got {zf!r}")
        return zf
    za = np.asarray(z, dtype=float)
    if za.size and (not np.all(np.isfinite(za)) or za.min() < 0.0 or za.max() > Z_MAX):
        raise DomainError(f"arguments must lie in [0, {Z_MAX}]")
    return za


def _jv(nu, z):
    """J_nu(z) for nu > -1 or a negative integer nu."""
    if nu <= -1.0:
        n = round(-nu)
        if n != -nu:
            raise InvalidInput(f"order must be > -1 or a negative integer, got {nu!r}")
        return (-1) ** n * _jv(float(n), z)
    if np.ndim(z) == 0:
        if z == 0.0:
            return 1.0 if nu == 0.0 else (0.0 if nu > 0 else math.inf)
        return _sum(nu, z, 1.0, 0.0, 0.0)
    out = np.empty_like(z)
    pos = z > 0
    out[~pos] = 1.0 if nu == 0.0 else (0.0 if nu > 0 else np.inf)
    if np.any(pos):
        out[pos] = _sum(nu, z[pos], 1.0, 0.0, 0.0)
    return out


def bessel_j(nu, z):
    """Bessel function of the first kind J_nu(z).

    Parameters
    ----------
    nu : float
        Order, nu > -1.
    z : float or array_like
        Argument(s) in [0, 60].

    Accuracy is better than 1e-11 absolute on the whole supported range.
    """
    return _jv(_check_order(nu), _as_argument(z))


def bessel_j_prime(nu, z):
    """J'_nu(z) through the half-difference (J_{nu-1} - J_{nu+1}) / 2.

    For nu = 0 this is -J_1.  At z = 0 the one-sided limit is returned
    (infinite for 0 < nu < 1).
    """
    nu = _check_order(nu, lower=-math.inf)
    if nu < 0:
        raise InvalidInput(f"bessel_j_prime needs nu >= 0, got {nu!r}")
    z = _as_argument(z)
    if nu == 0.0:
        return -_jv(1.0, z)
    if np.ndim(z) == 0:
        if z == 0.0:
            return _derivative_at_origin(nu)
        return 0.5 * (_jv(nu - 1.0, z) - _jv(nu + 1.0, z))
    out = np.empty_like(z)
    pos = z > 0
    out[~pos] = _derivative_at_origin(nu)
    if np.any(pos):
        zp = z[pos]
        out[pos] = 0.5 * (_jv(nu - 1.0, zp) - _jv(nu + 1.0, zp))
    return out


def _derivative_at_origin(nu):
    if nu == 1.0:
        return 0.5
    return math.inf if 0.0 < nu < 1.0 else 0.0


def bessel_j_prime_series(nu, z):
    """J'_nu(z) by term-wise differentiation of the power series.

    Independent of :func:`bessel_j_prime`; used to check the half-difference
    formula.  Needs z > 0 when nu < 1.
    """
    nu = _check_order(nu)
    z = _as_argument(z)
    if np.ndim(z) == 0:
        if z == 0.0:
            return _derivative_at_origin(nu) if nu > 0 else 0.0
        return _sum(nu, z, 0.5 * nu, 1.0, -1.0)
    if np.any(z == 0.0):
        raise DomainError("bessel_j_prime_series needs z > 0 for array input")
    return _sum(nu, z, 0.5 * nu, 1.0, -1.0)


def _jv_second_derivative(nu, z, j, jp):
    # Bessel's equation: z^2 J'' + z J' + (z^2 - nu^2) J = 0
    return -jp / z - (1.0 - (nu * nu) / (z * z)) * j


@dataclass(frozen=True)
class ZeroResult:
    value: float
    residual: float
    iterations: int


def _first_zero(f, fprime, fvec, what):
    lo, hi, f_lo, f_hi = scan_first_sign_change(fvec, ZERO_SCAN_START, ZERO_SCAN_STEP, Z_MAX)
    root, iterations = bisect_newton(f, fprime, lo, hi, f_lo, f_hi)
    return ZeroResult(value=root, residual=f(root), iterations=iterations)


def first_zero(nu):
    """First positive zero j_nu of J_nu.

    Scans forward from z = 1e-6 in steps of 0.1 until J_nu changes sign,
    then bisects and polishes with Newton.  Orders in (-1, 12] are accepted;
    the (-1, 0) part is needed for j_{nu-1} in the closed-form Lamb roots.
    """
    nu = _check_order(nu)
    if nu > NU_MAX_ZERO:
        raise InvalidInput(f"first_zero supports nu <= {NU_MAX_ZERO}, got {nu!r}")
    return _first_zero(
        lambda x: _jv(nu, x),
        lambda x: _jprime(nu, x),
        lambda xs: _jv(nu, xs),
        f"J_{nu}",
    )


def first_zero_of_derivative(nu):
    """First positive zero j'_nu of J'_nu, for 0 < nu <= 12."""
    nu = _check_order(nu, lower=-math.inf)
    if not 0.0 < nu <= NU_MAX_ZERO:
        raise InvalidInput(f"first_zero_of_derivative needs 0 < nu <= {NU_MAX_ZERO}, got {nu!r}")

    def fprime(x):
        return _jv_second_derivative(nu, x, _jv(nu, x), _jprime(nu, x))

    return _first_zero(
        lambda x: _jprime(nu, x),
        fprime,
        lambda xs: _jprime(nu, xs),
        f"J'_{nu}",
    )


def _jprime(nu, z):
    """J'_nu without argument validation, for any nu > -1 and z > 0."""
    if nu == 0.0:
        return -_jv(1.0, z)
    if nu < 0.0:
        return _sum(nu, z, 0.5 * nu, 1.0, -1.0)
    return 0.5 * (_jv(nu - 1.0, z) - _jv(nu + 1.0, z))


def squares_sum_identity(mu, z, terms):
    """Both sides of the squares-sum identity at order mu.

    Returns ``(lhs, partial_sum)`` with

        lhs         = (z^2/4) (J_mu^2 - J_{mu-1} J_{mu+1})
        partial_sum = sum_{n < terms} (mu + 1 + 2n) J_{mu+1+2n}^2
    """
    mu = _check_order(mu, lower=-math.inf)
    if mu < 0:
        raise InvalidInput(f"squares_sum_identity needs mu >= 0, got {mu!r}")
    terms = int(terms)
    if terms < 1:
        raise InvalidInput("terms must be >= 1")
    z = _as_argument(z)
    if z == 0.0:
        return 0.0, 0.0
    j_mu = _jv(mu, z)
    lhs = 0.25 * z * z * (j_mu * j_mu - _jv(mu - 1.0, z) * _jv(mu + 1.0, z))
    parts = []
    for n in range(terms):
        order = mu + 1.0 + 2.0 * n
        j = _jv(order, z)
        parts.append(order * j * j)
    return lhs, math.fsum(parts)
