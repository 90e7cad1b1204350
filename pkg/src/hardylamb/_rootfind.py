"""Forward scan for the first sign change, then bisection with a Newton polish."""

import math

import numpy as np

from .errors import SearchFailure

_CHUNK = 32


def scan_first_sign_change(fvec, start, step, stop):
    """Return ``(lo, hi, f_lo, f_hi)`` bracketing the first sign change.

    ``fvec`` must accept a 1-D array.  The grid is ``start + k*step``; the
    last point is clamped to ``stop``.  Points are evaluated in chunks so a
    root near ``start`` never pays for the whole range.
    """
    prev_x = None
    prev_f = None
    k0 = 0
    while True:
        xs = start + step * np.arange(k0, k0 + _CHUNK, dtype=float)
        xs = xs[xs < stop]
        last = xs.size == 0 or xs[-1] + step >= stop
        if last:
            xs = np.append(xs, stop)
        fs = np.asarray(fvec(xs), dtype=float)
        if prev_x is not None:
            xs = np.concatenate(([prev_x], xs))
            fs = np.concatenate(([prev_f], fs))
        sign = np.sign(fs)
        # an exact zero on a grid node counts as the root itself
        hit = np.nonzero(sign == 0)[0]
        change = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        first_hit = hit[0] if hit.size else None
        first_change = change[0] if change.size else None
        if first_hit is not None and (first_change is None or first_hit <= first_change):
            x = float(xs[first_hit])
            return x, x, 0.0, 0.0
        if first_change is not None:
            i = int(first_change)
            return float(xs[i]), float(xs[i + 1]), float(fs[i]), float(fs[i + 1])
        if last:
            raise SearchFailure(f"no sign change in [{start}, {stop}]")
        prev_x, prev_f = float(xs[-1]), float(fs[-1])
        k0 += _CHUNK


def bisect_newton(f, fprime, lo, hi, f_lo=None, f_hi=None, xtol=1e-6, max_iter=200):
    """Refine a bracketed simple root.

    Bisection shrinks the bracket to ``xtol`` (relative to ``hi``); Newton
    steps then polish to full precision.  A Newton step that would leave the
    current bracket is replaced by a bisection step, so the bracket stays
    valid throughout.  Returns ``(root, iterations)``.
    """
    if lo == hi:
        return lo, 0
    f_lo = f(lo) if f_lo is None else f_lo
    f_hi = f(hi) if f_hi is None else f_hi
    if f_lo == 0.0:
        return lo, 0
    if f_hi == 0.0:
        return hi, 0
    if (f_lo < 0) == (f_hi < 0):
        raise SearchFailure(f"[{lo}, {hi}] does not bracket a root")
    it = 0

    def shrink(x, fx):
        nonlocal lo, hi, f_lo, f_hi
        if (fx < 0) == (f_lo < 0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx

    while hi - lo > xtol * max(1.0, abs(hi)) and it < max_iter:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        it += 1
        if fm == 0.0:
            return mid, it
        shrink(mid, fm)
    x = lo if abs(f_lo) < abs(f_hi) else hi
    fx = f(x)
    eps = np.finfo(float).eps
    while it < max_iter:
        it += 1
        if fx == 0.0:
            break
        dfx = fprime(x)
        x_new = x - fx / dfx if dfx != 0.0 and math.isfinite(dfx) else math.nan
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4 * eps * abs(x) or hi - lo <= 4 * eps * abs(hi):
            x = x_new
            break
        x = x_new
        fx = f(x)
        shrink(x, fx)
    return x, it
