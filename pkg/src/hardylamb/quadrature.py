"""Quadrature for weighted integrands with endpoint singularities.

Subintervals that touch a flagged endpoint are integrated with a tanh-sinh
(double exponential) rule whose nodes are generated as offsets from that
endpoint, so x - a is known to full relative precision even when it is
1e-150.  Every other subinterval uses Gauss-Kronrod 7/15.  A global
adaptive loop bisects the subinterval with the largest error estimate.

Error estimates are the discrepancy between two rules of different order
(tanh-sinh levels, or Gauss against Kronrod).  They are honest but not
rigorous bounds.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyFailure, InvalidInput

DEFAULT_REL_TOL_1D = 1e-10
DEFAULT_REL_TOL_ND = 1e-8

_TS_TMAX = 5.4  # offsets from the endpoint go down to ~1e-151 of the length
_TS_MIN_LEVEL = 3
_TS_MAX_LEVEL = 8

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
# full 15-point abscissae on [-1, 1] and matching weights
_GK_X = np.concatenate((-_XGK[:-1], _XGK[::-1]))
_GK_WK = np.concatenate((_WGK[:-1], _WGK[::-1]))
_GK_WG = np.zeros(15)
_GK_WG[[1, 3, 5]] = _WG[:3]
_GK_WG[[13, 11, 9]] = _WG[:3]
_GK_WG[7] = _WG[3]


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    evaluations: int


def _finite(values, what):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise AccuracyFailure(f"integrand is not finite at some {what} node")
    return values


def _gk15(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid + half * _GK_X
    x[0], x[-1] = max(x[0], lo), min(x[-1], hi)
    y = _finite(f(x), "Gauss-Kronrod")
    k = half * float(np.dot(_GK_WK, y))
    g = half * float(np.dot(_GK_WG, y))
    return k, abs(k - g), 15


def _ts_nodes(level, tmax=_TS_TMAX):
    h = 2.0**-level
    n = int(tmax / h)
    if level == 0:
        tau = h * np.arange(-n, n + 1)
    else:
        # only the nodes new at this level (odd multiples of h)
        k = np.arange(-n, n + 1)
        tau = h * k[k % 2 != 0]
    y = 0.5 * math.pi * np.sinh(tau)
    # sigma(2y) = (1 + tanh y)/2 and its complement, both without cancellation
    right = 1.0 / (1.0 + np.exp(2.0 * y))  # (1 - tanh y)/2, distance to the upper end
    left = 1.0 / (1.0 + np.exp(-2.0 * y))  # distance to the lower end
    weight = math.pi * np.cosh(tau) * left * right
    return tau, left, right, weight


def _tanh_sinh(f, lo, hi, rel_tol):
    """Tanh-sinh on [lo, hi]; returns (value, error, evaluations)."""
    length = hi - lo
    total = 0.0
    prev = None
    evals = 0
    estimate = 0.0
    for level in range(_TS_MAX_LEVEL + 1):
        tau, left, right, weight = _ts_nodes(level)
        lower = tau < 0
        x = np.where(lower, lo + length * left, hi - length * right)
        # nodes that round onto an endpoint carry negligible weight
        keep = (x > lo) & (x < hi) & (weight > 0)
        x = x[keep]
        w = weight[keep]
        y = np.asarray(f(x), dtype=float)
        evals += x.size
        bad = ~np.isfinite(y)
        if np.any(bad):
            # only tolerated extremely close to a flagged endpoint
            dist = np.minimum(x - lo, hi - x)[bad] / length
            if np.any(dist > 1e-100):
                raise AccuracyFailure("integrand is not finite at an interior tanh-sinh node")
            y = np.where(bad, 0.0, y)
        total += float(np.dot(w, y))
        h = 2.0**-level
        estimate = total * h * length
        if prev is not None and level >= _TS_MIN_LEVEL:
            err = abs(estimate - prev)
            if err <= 0.25 * rel_tol * abs(estimate) or err == 0.0:
                return estimate, err, evals
        prev = estimate
    return estimate, abs(estimate - prev), evals


def integrate_segment(integrand, a, b, singular_left=False, singular_right=False,
                      rel_tol=DEFAULT_REL_TOL_1D, breakpoints=(), abs_tol=0.0, max_intervals=400):
    """Integrate a vectorised ``integrand`` over [a, b].

    ``singular_left``/``singular_right`` mark endpoints where the integrand
    may blow up (integrably).  ``breakpoints`` are interior points where the
    integrand has a kink; they become subinterval ends.  Raises
    :class:`AccuracyFailure` with ``partial`` set to the best
    :class:`IntegralResult` if the tolerance is not met.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise InvalidInput(f"need finite a < b, got [{a}, {b}]")
    if not rel_tol > 0:
        raise InvalidInput("rel_tol must be positive")
    cuts = sorted({float(p) for p in breakpoints if a < p < b})
    edges = [a, *cuts, b]

    heap = []
    total = 0.0
    evals = 0
    seq = 0

    def evaluate(lo, hi):
        nonlocal evals
        sl = singular_left and lo == a
        sr = singular_right and hi == b
        if sl or sr:
            v, e, n = _tanh_sinh(integrand, lo, hi, rel_tol)
        else:
            v, e, n = _gk15(integrand, lo, hi)
        evals += n
        return v, e

    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = evaluate(lo, hi)
        heapq.heappush(heap, (-e, seq, lo, hi, v))
        seq += 1
        total += v

    def error_sum():
        return math.fsum(-item[0] for item in heap)

    while True:
        err = error_sum()
        total = math.fsum(item[4] for item in heap)
        if err <= max(abs_tol, rel_tol * abs(total)) or err == 0.0:
            return IntegralResult(total, err, evals)
        if len(heap) >= max_intervals:
            break
        neg_e, _, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_e, seq, lo, hi, v))
            break
        for sub in ((lo, mid), (mid, hi)):
            sv, se = evaluate(*sub)
            heapq.heappush(heap, (-se, seq, sub[0], sub[1], sv))
            seq += 1
    partial = IntegralResult(math.fsum(item[4] for item in heap), error_sum(), evals)
    raise AccuracyFailure(
        f"no convergence on [{a}, {b}]: estimate {partial.value:.16g} +- {partial.error_estimate:.3g}",
        partial=partial,
    )


def layer_cake_integral(domain, profile, rel_tol=DEFAULT_REL_TOL_ND, breakpoints=()):
    """Integral over ``domain`` of profile(delta(x)), as int_0^delta0 profile(t) A(t) dt.

    Valid because |grad delta| = 1 almost everywhere in a convex domain, so
    the coarea formula turns the level sets {delta = t} into the weight A(t).
    """
    d0 = domain.inradius
    knots = tuple(breakpoints) + tuple(domain.area_breakpoints())
    return integrate_segment(
        lambda t: profile(t) * domain.area_profile(t),
        0.0,
        d0,
        singular_left=True,
        singular_right=True,
        rel_tol=rel_tol,
        breakpoints=knots,
    )


def monte_carlo_integral(domain, integrand, samples, seed):
    """Plain Monte Carlo over ``domain`` by rejection from its bounding box.

    ``integrand`` maps an (N, n) array of points to N values.  Uses a
    counter-based Philox stream keyed by ``seed``, so the estimate depends
    only on (samples, seed).  Returns ``(value, std_error)``.
    """
    samples = int(samples)
    if samples < 2:
        raise InvalidInput("need at least 2 samples")
    lo, hi = domain.bounding_box()
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    box_volume = float(np.prod(hi - lo))
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    pts = lo + (hi - lo) * rng.random((samples, lo.size))
    inside = domain.contains(pts)
    values = np.zeros(samples)
    if np.any(inside):
        values[inside] = integrand(pts[inside])
    if not np.all(np.isfinite(values)):
        raise AccuracyFailure("integrand is not finite at a sample point")
    mean = float(values.mean())
    std = float(values.std(ddof=1))
    return box_volume * mean, box_volume * std / math.sqrt(samples)
