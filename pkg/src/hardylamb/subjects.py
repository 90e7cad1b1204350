"""Test functions, convex domains and the subjects built from them.

A test function lives on the canonical interval [0, 1] with u(0) = 0.  A
*subject* places it somewhere: on [0, rho] (one-sided), on a segment [a, b]
(affine or distance-radial embedding) or on a convex domain as
F(x) = u(delta(x) / delta0).

Every subject reduces to a list of :class:`Piece` objects.  A piece is a
one-dimensional integral over t in (0, length) where t is the distance to
the boundary; statement integrals are sums over pieces of

    int_0^length  v(t)^a  d(t)^b  t^(-s)  w(t)  dt

with v = |f|, d = |f'| (or |grad f|) and w a Jacobian weight (1, 2 or the
level-set area A(t)).
"""

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bessel import _jprime, _jv, first_zero
from .errors import InvalidInput
from .lamb import LambParams, solve_lamb
from ._rootfind import bisect_newton, scan_first_sign_change


# -- test functions on [0, 1] ----------------------------------------------


class TestFunction1D:
    """Base class.  Subclasses implement ``_value``/``_slope`` on (s, 1 - s)."""

    __test__ = False  # not a pytest class
    name = "base"
    decay_left = 1.0
    decay_right = 0.0
    two_sided = False

    def critical_points(self):
        return ()

    def eval(self, s):
        s = np.asarray(s, dtype=float)
        return self._value(s, 1.0 - s)

    def deriv(self, s):
        s = np.asarray(s, dtype=float)
        return self._slope(s, 1.0 - s)

    def describe(self):
        raise NotImplementedError


class Zero(TestFunction1D):
    name = "zero"
    decay_left = math.inf
    decay_right = math.inf
    two_sided = True

    def _value(self, s, sc):
        return np.zeros_like(s)

    def _slope(self, s, sc):
        return np.zeros_like(s)

    def describe(self):
        return "zero"


class PowerBump(TestFunction1D):
    """u(s) = s^alpha (1 - s)^beta."""

    name = "powerbump"

    def __init__(self, alpha, beta):
        alpha, beta = float(alpha), float(beta)
        if not (alpha > 0 and beta >= 0 and math.isfinite(alpha) and math.isfinite(beta)):
            raise InvalidInput(f"powerbump needs alpha > 0, beta >= 0, got {alpha}, {beta}")
        self.alpha, self.beta = alpha, beta
        self.decay_left = alpha
        self.decay_right = beta
        self.two_sided = beta > 0

    def critical_points(self):
        if self.beta > 0:
            return (self.alpha / (self.alpha + self.beta),)
        return ()

    def _value(self, s, sc):
        return s**self.alpha * sc**self.beta

    def _slope(self, s, sc):
        a, b = self.alpha, self.beta
        if b == 0:
            return a * s ** (a - 1)
        return s ** (a - 1) * sc ** (b - 1) * (a * sc - b * s)

    def describe(self):
        return f"powerbump:{_num(self.alpha)},{_num(self.beta)}"


class SinePower(TestFunction1D):
    """u(s) = sin(pi s)^alpha."""

    name = "sinepower"
    two_sided = True

    def __init__(self, alpha):
        alpha = float(alpha)
        if not (alpha > 0 and math.isfinite(alpha)):
            raise InvalidInput(f"sinepower needs alpha > 0, got {alpha}")
        self.alpha = alpha
        self.decay_left = self.decay_right = alpha

    def critical_points(self):
        return (0.5,)

    def _value(self, s, sc):
        return np.sin(np.pi * np.minimum(s, sc)) ** self.alpha

    def _slope(self, s, sc):
        a = self.alpha
        sine = np.sin(np.pi * np.minimum(s, sc))
        cosine = np.where(s <= 0.5, np.cos(np.pi * s), -np.cos(np.pi * sc))
        return a * np.pi * sine ** (a - 1) * cosine

    def describe(self):
        return f"sinepower:{_num(self.alpha)}"


class SmoothTent(TestFunction1D):
    """u(s) = (4 s (1 - s))^k, a bump with k-th order contact at both ends."""

    name = "smoothtent"
    two_sided = True

    def __init__(self, k):
        k = float(k)
        if not (k > 0 and math.isfinite(k)):
            raise InvalidInput(f"smoothtent needs k > 0, got {k}")
        self.k = k
        self.decay_left = self.decay_right = k

    def critical_points(self):
        return (0.5,)

    def _value(self, s, sc):
        return (4.0 * s * sc) ** self.k

    def _slope(self, s, sc):
        k = self.k
        return 4.0 * k * (4.0 * s * sc) ** (k - 1) * (sc - s)

    def describe(self):
        return f"smoothtent:{_num(self.k)}"


class BesselProfile(TestFunction1D):
    """u(s) = sqrt(s) J_nu((2c/m) s^(m/2)), positive on (0, 1] when 2c/m < j_nu.

    ``lam`` is only recorded for the spec string; the function itself is
    fixed by (nu, m, c).
    """

    name = "besselprofile"

    def __init__(self, nu, m, c, lam=None):
        nu, m, c = float(nu), float(m), float(c)
        if not (nu >= 0 and m > 0 and c > 0):
            raise InvalidInput(f"besselprofile needs nu >= 0, m > 0, c > 0, got {nu}, {m}, {c}")
        j_nu = first_zero(nu).value
        if not 2.0 * c / m < j_nu:
            raise InvalidInput(f"besselprofile needs 2c/m < j_nu = {j_nu}, got {2 * c / m}")
        self.nu, self.m, self.c, self.lam = nu, m, c, lam
        self.k = 2.0 * c / m
        self.decay_left = 0.5 * (1.0 + nu * m)
        self.decay_right = 0.0
        self._critical = self._find_critical()

    def _log_slope_at(self, s):
        # s u'/u - 1/2 = c s^(m/2) J'(z)/J(z)
        z = self.k * s ** (0.5 * self.m)
        return 0.5 + self.c * s ** (0.5 * self.m) * _jprime(self.nu, z) / _jv(self.nu, z)

    def _find_critical(self):
        # s u'/u decreases from (1 + nu m)/2, so u' has a zero iff it ends negative
        if self._log_slope_at(1.0) >= -1e-12:
            return ()
        lo, hi, f_lo, f_hi = scan_first_sign_change(
            lambda xs: np.array([self._log_slope_at(x) for x in xs]), 1e-3, 1e-2, 1.0
        )
        root, _ = bisect_newton(self._log_slope_at, lambda x: math.nan, lo, hi, f_lo, f_hi, xtol=1e-15)
        return (root,)

    def critical_points(self):
        return self._critical

    def _value(self, s, sc):
        z = self.k * s ** (0.5 * self.m)
        return np.sqrt(s) * _jv(self.nu, z)

    def _slope(self, s, sc):
        half_m = 0.5 * self.m
        z = self.k * s**half_m
        root = np.sqrt(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            return 0.5 * _jv(self.nu, z) / root + self.c * s ** (half_m - 0.5) * _jprime(self.nu, z)

    def describe(self):
        if self.lam is not None:
            return f"besselprofile:{_num(self.nu)},{_num(self.m)},{_num(self.lam)}"
        return f"besselprofile:{_num(self.nu)},{_num(self.m)};c={_num(self.c)}"


def _num(x):
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


# -- domains ---------------------------------------------------------------


class ConvexDomain:
    kind = "domain"


class Ball(ConvexDomain):
    kind = "ball"

    def __init__(self, n, radius):
        if int(n) != n or not 1 <= int(n) <= 4:
            raise InvalidInput(f"ball dimension must be 1..4, got {n}")
        radius = float(radius)
        if not (radius > 0 and math.isfinite(radius)):
            raise InvalidInput(f"ball radius must be positive, got {radius}")
        self.n = int(n)
        self.radius = radius
        self.sphere_area = 2.0 * math.pi ** (self.n / 2) / math.gamma(self.n / 2)

    @property
    def dim(self):
        return self.n

    @property
    def inradius(self):
        return self.radius

    @property
    def volume(self):
        return self.sphere_area / self.n * self.radius**self.n

    def dist(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.radius - np.linalg.norm(x, axis=1)

    def contains(self, x):
        return self.dist(x) > 0

    def area_profile(self, t):
        t = np.asarray(t, dtype=float)
        return self.sphere_area * np.maximum(self.radius - t, 0.0) ** (self.n - 1)

    def volume_profile(self, t):
        t = np.asarray(t, dtype=float)
        return self.sphere_area / self.n * np.maximum(self.radius - t, 0.0) ** self.n

    def area_breakpoints(self):
        return ()

    def bounding_box(self):
        return np.full(self.n, -self.radius), np.full(self.n, self.radius)

    def describe(self):
        return f"ball:{self.n},{_num(self.radius)}"


class Box(ConvexDomain):
    """Product of intervals [0, s_i]."""

    kind = "box"

    def __init__(self, sides):
        sides = tuple(float(s) for s in sides)
        if not 1 <= len(sides) <= 4:
            raise InvalidInput(f"box dimension must be 1..4, got {len(sides)}")
        if not all(s > 0 and math.isfinite(s) for s in sides):
            raise InvalidInput(f"box sides must be positive, got {sides}")
        self.sides = sides

    @property
    def dim(self):
        return len(self.sides)

    @property
    def inradius(self):
        return 0.5 * min(self.sides)

    @property
    def volume(self):
        return math.prod(self.sides)

    def dist(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        s = np.asarray(self.sides)
        return np.minimum(x, s - x).min(axis=1)

    def contains(self, x):
        return self.dist(x) > 0

    def volume_profile(self, t):
        t = np.asarray(t, dtype=float)
        out = np.ones_like(t)
        for s in self.sides:
            out = out * np.maximum(s - 2.0 * t, 0.0)
        return out

    def area_profile(self, t):
        # -d/dt prod_i (s_i - 2t) = sum_i 2 prod_{j != i} (s_j - 2t)
        t = np.asarray(t, dtype=float)
        lengths = [np.maximum(s - 2.0 * t, 0.0) for s in self.sides]
        out = np.zeros_like(t)
        for i in range(len(lengths)):
            term = np.full_like(t, 2.0)
            for j, length in enumerate(lengths):
                if j != i:
                    term = term * length
            out = out + term
        return np.where(t < self.inradius, out, 0.0)

    def area_breakpoints(self):
        return tuple(sorted({0.5 * s for s in self.sides if 0.5 * s < self.inradius}))

    def bounding_box(self):
        return np.zeros(self.dim), np.asarray(self.sides)

    def describe(self):
        return "box:" + "x".join(_num(s) for s in self.sides)


def make_domain(kind, dims):
    """``make_domain("ball", (n, R))`` or ``make_domain("box", (s1, s2, ...))``."""
    if kind == "ball":
        if len(dims) != 2:
            raise InvalidInput("ball needs (n, R)")
        return Ball(dims[0], dims[1])
    if kind == "box":
        return Box(dims)
    raise InvalidInput(f"unknown domain kind {kind!r}; expected ball or box")


# -- subjects --------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """One radial piece: t in (0, length) is the distance to the boundary.

    ``boundary_decay`` is the vanishing order of v at t = 0 and
    ``far_decay`` its vanishing order at t = length (0 if v does not vanish
    there; ``None`` if t = length is an interior point of the subject).
    """

    length: float
    value: Callable
    slope: Callable
    weight: Optional[Callable]
    breakpoints: tuple
    boundary_decay: float
    far_decay: Optional[float]


def _profile_piece(u, scale, length, weight=None):
    """Piece for t -> u(t/scale) on (0, length <= scale)."""
    inv = 1.0 / scale
    crit = tuple(scale * x for x in u.critical_points() if 0 < scale * x < length)

    def value(t):
        s = np.asarray(t) * inv
        return np.abs(u._value(s, 1.0 - s))

    def slope(t):
        s = np.asarray(t) * inv
        return np.abs(u._slope(s, 1.0 - s)) * inv

    far = u.decay_right if length == scale else None
    return Piece(length, value, slope, weight, crit, u.decay_left, far)


class Subject:
    kind = "abstract"
    profile: TestFunction1D

    def pieces(self):
        raise NotImplementedError

    @property
    def scale(self):
        raise NotImplementedError


class OneSidedSubject(Subject):
    """u on [0, rho] with distance x to the single boundary point 0."""

    kind = "one-sided"

    def __init__(self, profile, rho=1.0):
        rho = float(rho)
        if not rho > 0:
            raise InvalidInput(f"rho must be positive, got {rho}")
        self.profile, self.rho = profile, rho

    @property
    def scale(self):
        return self.rho

    def pieces(self):
        return [_profile_piece(self.profile, self.rho, self.rho)]

    def describe(self):
        return f"{self.profile.describe()} on [0,{_num(self.rho)}]"


class SegmentSubject(Subject):
    """u transplanted to [a, b] with delta(x) = min(x - a, b - x).

    ``embedding="affine"``: g(x) = u((x - a)/(b - a)), needs u(1) = 0.
    ``embedding="radial"``: g(x) = u(delta(x)/delta0), symmetric about the midpoint.
    """

    kind = "segment"

    def __init__(self, profile, a, b, embedding="affine"):
        a, b = float(a), float(b)
        if not a < b:
            raise InvalidInput(f"segment needs a < b, got [{a}, {b}]")
        if embedding not in ("affine", "radial"):
            raise InvalidInput(f"embedding must be affine or radial, got {embedding!r}")
        if embedding == "affine" and not profile.two_sided:
            raise InvalidInput(f"{profile.describe()} does not vanish at s = 1; use the radial embedding")
        self.profile, self.a, self.b, self.embedding = profile, a, b, embedding

    @property
    def scale(self):
        return 0.5 * (self.b - self.a)

    def pieces(self):
        u, d0, length = self.profile, self.scale, self.b - self.a
        if self.embedding == "radial":
            return [_profile_piece(u, d0, d0, weight=lambda t: np.full(np.shape(t), 2.0))]
        inv = 1.0 / length
        crit = tuple(u.critical_points())

        def left_value(t):
            s = np.asarray(t) * inv
            return np.abs(u._value(s, 1.0 - s))

        def left_slope(t):
            s = np.asarray(t) * inv
            return np.abs(u._slope(s, 1.0 - s)) * inv

        def right_value(t):
            sc = np.asarray(t) * inv
            return np.abs(u._value(1.0 - sc, sc))

        def right_slope(t):
            sc = np.asarray(t) * inv
            return np.abs(u._slope(1.0 - sc, sc)) * inv

        left_bp = tuple(length * x for x in crit if 0 < length * x < d0)
        right_bp = tuple(length * (1.0 - x) for x in crit if 0 < length * (1.0 - x) < d0)
        return [
            Piece(d0, left_value, left_slope, None, left_bp, u.decay_left, None),
            Piece(d0, right_value, right_slope, None, right_bp, u.decay_right, None),
        ]

    def describe(self):
        return f"{self.profile.describe()} on [{_num(self.a)},{_num(self.b)}] ({self.embedding})"


class RadialSubject(Subject):
    """F(x) = u(delta(x)/delta0) on a convex domain; |grad F| = |u'|/delta0 a.e."""

    kind = "domain"

    def __init__(self, domain, profile):
        if abs(float(profile.eval(0.0))) != 0.0:
            raise InvalidInput("radial subjects need a profile with u(0) = 0")
        self.domain, self.profile = domain, profile

    @property
    def scale(self):
        return self.domain.inradius

    def value(self, x):
        return self.profile.eval(self.domain.dist(x) / self.scale)

    def gradient_magnitude(self, x):
        return np.abs(self.profile.deriv(self.domain.dist(x) / self.scale)) / self.scale

    def pieces(self):
        d0 = self.scale
        piece = _profile_piece(self.profile, d0, d0, weight=self.domain.area_profile)
        extra = tuple(t for t in self.domain.area_breakpoints() if 0 < t < d0)
        return [Piece(piece.length, piece.value, piece.slope, piece.weight,
                      tuple(sorted(set(piece.breakpoints + extra))),
                      piece.boundary_decay, piece.far_decay)]

    def describe(self):
        return f"{self.profile.describe()} on {self.domain.describe()}"


def radial_subject(domain, profile):
    return RadialSubject(domain, profile)


# -- spec strings ----------------------------------------------------------

_SPEC = re.compile(r"^\s*([a-z]+)\s*(?::\s*(.*))?$")


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",")] if text else []
    except ValueError:
        raise InvalidInput(f"could not parse numbers in {what!r}") from None


FAMILIES = ("powerbump", "sinepower", "smoothtent", "besselprofile", "zero")
DOMAINS = ("ball", "box")


def make_test_function(spec, lamb_c=None):
    """Build a test function from ``"family:args"``.

    Families: ``powerbump:a,b``, ``sinepower:a``, ``smoothtent:k``,
    ``besselprofile:nu,m[,lambda]`` (c solved from the Lamb equation unless
    ``lamb_c`` is given) and ``zero``.
    """
    if not isinstance(spec, str):
        raise InvalidInput("test function spec must be a string")
    match = _SPEC.match(spec.lower())
    if not match:
        raise InvalidInput(f"malformed test function spec {spec!r}")
    family, args = match.group(1), _floats(match.group(2), spec)
    if family == "powerbump" and len(args) == 2:
        return PowerBump(*args)
    if family == "sinepower" and len(args) == 1:
        return SinePower(*args)
    if family == "smoothtent" and len(args) == 1:
        return SmoothTent(*args)
    if family == "zero" and not args:
        return Zero()
    if family == "besselprofile" and len(args) in (2, 3):
        nu, m = args[0], args[1]
        lam = args[2] if len(args) == 3 else 0.0
        c = lamb_c if lamb_c is not None else solve_lamb(LambParams(nu, m, lam)).c
        return BesselProfile(nu, m, c, lam=lam)
    if family not in FAMILIES:
        raise InvalidInput(f"unknown family {family!r}; valid families: {', '.join(FAMILIES)}")
    raise InvalidInput(f"wrong number of arguments in {spec!r}")


def parse_domain(spec):
    """``ball:n,R`` or ``box:s1xs2x...``."""
    match = _SPEC.match(str(spec).lower())
    if not match:
        raise InvalidInput(f"malformed domain spec {spec!r}")
    kind, args = match.group(1), match.group(2) or ""
    if kind == "ball":
        return make_domain("ball", _floats(args, spec))
    if kind == "box":
        try:
            sides = [float(x) for x in args.split("x")]
        except ValueError:
            raise InvalidInput(f"could not parse box sides in {spec!r}") from None
        return make_domain("box", sides)
    raise InvalidInput(f"unknown domain {kind!r}; valid domains: {', '.join(DOMAINS)}")
