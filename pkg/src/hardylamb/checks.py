"""Numerical checks of the Bessel identities, the profile monotonicity and the
constant comparison that the inequalities rest on."""

import math
from dataclasses import dataclass, field

import numpy as np

from .bessel import (
    _jprime,
    _jv,
    bessel_j,
    bessel_j_prime,
    bessel_j_prime_series,
    first_zero,
    squares_sum_identity,
)
from .errors import InvalidInput, InvalidParams
from .lamb import LambParams, classical_lamb, solve_lamb
from .subjects import BesselProfile

IDENTITIES = ("LEMMA1", "ODE5", "SQSUM", "RECURRENCE", "HALF_DIFF", "REDUCTION")

THRESHOLDS = {
    "LEMMA1": 1e-10,
    "ODE5": 1e-6,
    "SQSUM": 1e-10,
    "RECURRENCE": 1e-10,
    "HALF_DIFF": 1e-10,
    "REDUCTION": 1e-10,
}


@dataclass
class IdentityReport:
    which: str
    residual: float
    kind: str  # "absolute" or "relative"
    threshold: float
    points: int
    worst_at: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.residual <= self.threshold

    def to_dict(self):
        return {
            "identity": self.which,
            "residual": self.residual,
            "kind": self.kind,
            "threshold": self.threshold,
            "points": self.points,
            "passed": self.passed,
            "worst_at": self.worst_at,
        }


def ratio_identity_sides(nu, z):
    """Both sides of the ratio identity behind the profile monotonicity (nu > 0)."""
    jm, j0, jp = _jv(nu - 1.0, z), _jv(nu, z), _jv(nu + 1.0, z)
    q = (z / nu) ** 2
    lhs = 1.0 - ((jm - jp) / (jm + jp)) ** 2 - q
    rhs = q * (-1.0 + jp * jm / (j0 * j0))
    return lhs, rhs


def _ode5_residual(nu, m, c, h, xs):
    prof = BesselProfile(nu, m, c)
    worst, where = 0.0, None
    for x in xs:
        pts = x + h * np.arange(-2, 3)
        y = prof.eval(pts)
        ypp = (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / (12 * h * h)
        q = (1 - (nu * m) ** 2) / (4 * x * x) + c * c / x ** (2 - m)
        qy = q * y[2]
        scale = max(abs(qy), abs(ypp), 1e-300)
        rel = abs(ypp + qy) / scale
        if rel > worst:
            worst, where = rel, {"nu": nu, "m": m, "c": c, "x": float(x)}
    return worst, where


def _grid_max(pairs, fn):
    worst, where, count = 0.0, {}, 0
    for nu, z in pairs:
        value = fn(nu, z)
        count += 1
        if not math.isfinite(value):
            return math.inf, {"nu": nu, "z": z}, count
        if value > worst:
            worst, where = value, {"nu": nu, "z": z}
    return worst, where, count


def _nu_z_grid(nus, points, lo_frac, hi_frac):
    for nu in nus:
        j = first_zero(nu).value
        for z in np.linspace(lo_frac * j, hi_frac * j, points):
            yield float(nu), float(z)


def verify_identity(which, **inputs):
    """Maximum residual of one identity over its default (or supplied) grid.

    LEMMA1: ``nus`` (default 9 orders in [0.25, 8]) x z = j_nu k/10, k = 1..9.
    ODE5: ``cases`` of (nu, m, c), ``xs`` in (0.05, 0.95), ``h`` = 1e-3; relative.
    SQSUM: ``mus`` x ``zs`` with ``terms`` = 40.
    RECURRENCE / HALF_DIFF / REDUCTION: ``nus`` in [0.25, 8] x 50 points of (0, j_nu].
    """
    key = str(which).upper()
    if key not in IDENTITIES:
        raise InvalidInput(f"unknown identity {which!r}; valid: {', '.join(IDENTITIES)}")
    threshold = THRESHOLDS[key]

    if key == "LEMMA1":
        nus = inputs.get("nus", np.linspace(0.25, 8.0, 9))
        if min(nus) <= 0:
            raise InvalidInput("LEMMA1 needs nu > 0")
        pairs = [(float(nu), first_zero(nu).value * k / 10) for nu in nus for k in range(1, 10)]
        worst, where, n = _grid_max(pairs, lambda nu, z: abs(np.subtract(*ratio_identity_sides(nu, z))))
        return IdentityReport(key, worst, "absolute", threshold, n, where)

    if key == "ODE5":
        cases = inputs.get("cases")
        if cases is None:
            cases = [(1.0, 1.0, first_zero(0.0).value / 2)]
            for nu, m, lam in ((0.5, 1.0, 0.0), (0.25, 2.0, 0.3), (0.0, 0.5, -0.5), (0.4, 1.5, 0.2)):
                cases.append((nu, m, solve_lamb(LambParams(nu, m, lam)).c))
        xs = np.asarray(inputs.get("xs", np.linspace(0.05, 0.95, 19)), dtype=float)
        if xs.min() <= 0.0 or xs.max() >= 1.0:
            raise InvalidInput("ODE5 grid must lie in (0, 1)")
        h = float(inputs.get("h", 1e-3))
        worst, where, n = 0.0, {}, 0
        for nu, m, c in cases:
            r, w = _ode5_residual(nu, m, c, h, xs)
            n += xs.size
            if r > worst:
                worst, where = r, w
        return IdentityReport(key, worst, "relative", threshold, n, where)

    if key == "SQSUM":
        mus = inputs.get("mus", (0.0, 0.5, 1.0, 2.5, 6.0))
        zs = inputs.get("zs", (0.5, 1.0, 2.0, 5.0, 10.0, 20.0))
        terms = int(inputs.get("terms", 40))
        worst, where, n = _grid_max(
            [(float(mu), float(z)) for mu in mus for z in zs],
            lambda mu, z: abs(np.subtract(*squares_sum_identity(mu, z, terms))),
        )
        return IdentityReport(key, worst, "absolute", threshold, n, {"mu": where.get("nu"), "z": where.get("z")})

    nus = inputs.get("nus", np.linspace(0.25, 8.0, 9))
    points = int(inputs.get("points", 50))
    pairs = list(_nu_z_grid(nus, points, 1.0 / points, 1.0))
    if key == "RECURRENCE":
        fn = lambda nu, z: abs(bessel_j(nu - 1, z) + bessel_j(nu + 1, z) - 2 * nu / z * bessel_j(nu, z))
    elif key == "HALF_DIFF":
        fn = lambda nu, z: abs(bessel_j_prime(nu, z) - bessel_j_prime_series(nu, z))
    else:
        fn = lambda nu, z: abs(nu * bessel_j(nu, z) + z * bessel_j_prime(nu, z) - z * bessel_j(nu - 1, z))
    worst, where, n = _grid_max(pairs, fn)
    return IdentityReport(key, worst, "absolute", threshold, n, where)


# -- profile monotonicity ----------------------------------------------------


@dataclass
class ProfileReport:
    values: list
    grid: list
    monotone_decreasing: bool
    left_limit: float
    left_limit_err: float
    right_value_err: float
    lambda_err: float

    def to_dict(self):
        return {
            "monotone_decreasing": self.monotone_decreasing,
            "left_limit": self.left_limit,
            "left_limit_err": self.left_limit_err,
            "right_value_err": self.right_value_err,
            "lambda_err": self.lambda_err,
            "points": len(self.values),
        }


def _log_derivative(nu, m, c, x):
    """x y'(x)/y(x) for y = sqrt(x) J_nu((2c/m) x^(m/2))."""
    x = np.asarray(x, dtype=float)
    z = (2.0 * c / m) * x ** (0.5 * m)
    return 0.5 + c * x ** (0.5 * m) * _jprime(nu, z) / _jv(nu, z)


def _neville_at_zero(s, g):
    s, p = list(s), list(g)
    n = len(s)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (s[i + k] * p[i] - s[i] * p[i + 1]) / (s[i + k] - s[i])
    return p[0]


def profile_log_slope(params, grid=200, c=None):
    """Check that x y'/y decreases from (1 + nu m)/2 to its value at x = 1.

    ``c`` defaults to the Lamb constant of ``params``; the value at x = 1
    is then compared with lambda as well.  The left limit is extrapolated
    from x^m in {1e-3, ..., 1.25e-4} by polynomial (Neville) extrapolation.
    """
    grid = int(grid)
    if grid < 10:
        raise InvalidInput("grid must have at least 10 points")
    nu, m = params.nu, params.m
    solved = c is None
    if solved:
        c = solve_lamb(params).c
    c = float(c)
    if not c > 0:
        raise InvalidParams("profile_log_slope needs c > 0")
    j_nu = first_zero(nu).value
    if not 2.0 * c / m < j_nu:
        raise InvalidParams(f"y vanishes in (0, 1]: 2c/m = {2 * c / m} >= j_nu = {j_nu}")

    xs = np.linspace(1e-4, 1.0, grid)
    prof = BesselProfile(nu, m, c)
    values = xs * prof.deriv(xs) / prof.eval(xs)
    monotone = bool(np.all(np.diff(values) < 0))

    ss = [1e-3 / 2**k for k in range(4)]
    gs = [float(_log_derivative(nu, m, c, s ** (1.0 / m))) for s in ss]
    left = _neville_at_zero(ss, gs)
    left_err = abs(left - 0.5 * (1.0 + nu * m))

    # reference at x = 1 through the recurrence form when nu > 0
    z = 2.0 * c / m
    if nu > 0:
        jm, jp = _jv(nu - 1.0, z), _jv(nu + 1.0, z)
        ref = 0.5 + 0.5 * m * nu * (jm - jp) / (jm + jp)
    else:
        ref = 0.5 + c * _jprime(nu, z) / _jv(nu, z)
    right_err = abs(values[-1] - ref)
    lam_err = abs(values[-1] - params.lam) if solved else math.nan
    return ProfileReport(values.tolist(), xs.tolist(), monotone, float(left), float(left_err),
                         float(right_err), float(lam_err))


# -- constant comparison -----------------------------------------------------


def compare_with_classical(params):
    """Compare c^2 + (m-1)(lambda - lambda^2) with the classical C^2.

    The comparison is asserted only when 2(1 + nu m) - 4 lambda^2 <= 1;
    otherwise ``holds`` is reported as vacuously true.
    """
    nu, m, lam = params.nu, params.m, params.lam
    if not m > 1:
        raise InvalidParams(f"requires m > 1, got m={m}")
    if not (0 <= nu and nu * m <= 1 + 1e-12):
        raise InvalidParams(f"requires 0 <= nu <= 1/m, got nu={nu}, m={m}")
    if not 0 <= lam < params.upper:
        raise InvalidParams(f"requires 0 <= lambda < (1 + nu m)/2, got lambda={lam}")
    c = solve_lamb(params).c
    C = classical_lamb(nu, m).c
    lhs = c * c + (m - 1.0) * (lam - lam * lam)
    rhs = C * C
    condition = 2.0 * (1.0 + nu * m) - 4.0 * lam * lam <= 1.0
    holds = lhs <= rhs + 1e-12 if condition else True
    return {
        "params": params.as_dict(),
        "lhs": lhs,
        "rhs": rhs,
        "condition_met": condition,
        "holds": holds,
        "vacuous": not condition,
    }
