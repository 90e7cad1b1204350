"""Registry of Hardy-type inequalities and the engine that evaluates them.

Each statement is a list of LHS and RHS terms.  A term is a named
coefficient times

    int |f|^a |f'|^b / delta^s

where f' is |grad f| for domain statements.  The exponents may depend on
(p, r, m).  Coefficients are computed from (nu, m, lambda), the solved Lamb
constant c and the geometric scale (rho for one-sided statements, delta0
otherwise).

Notation used in the coefficient code:

    hc = (1 - nu^2 m^2)/4,   K = (1 + nu m)/2,   R = c^2 + (m - 1)(lambda - lambda^2)
"""

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import AccuracyFailure, InvalidInput, InvalidParams
from .lamb import LambParams, classical_lamb, solve_lamb
from .quadrature import DEFAULT_REL_TOL_1D, DEFAULT_REL_TOL_ND, integrate_segment

NUM_SLACK = 1e-12  # slack for boundary predicates such as nu <= 1/m
REL_FLOOR = 1e-9

VERDICTS = ("holds", "violated-beyond-tolerance", "inadmissible")


@dataclass(frozen=True)
class Term:
    coeff: str
    f_pow: object  # number or callable(ctx)
    df_pow: object
    dist_pow: object

    def powers(self, ctx):
        return tuple(float(x(ctx)) if callable(x) else float(x) for x in (self.f_pow, self.df_pow, self.dist_pow))


@dataclass(frozen=True)
class Context:
    nu: float
    m: float
    lam: float
    c: float
    p: Optional[float]
    r: Optional[float]
    scale: float


@dataclass(frozen=True)
class Statement:
    id: str
    title: str
    kind: str  # "one-sided", "segment", "domain" or "comparison"
    lhs: tuple
    rhs: tuple
    coefficients: Callable
    predicates: tuple
    uses_p: bool = False
    uses_r: bool = False
    lamb: str = "param"  # "param", "zero" (lambda = 0), "limit" (c = 0) or "none"
    fixed: Optional[tuple] = None
    needs_params: bool = True
    boundary_note: Optional[Callable] = None

    def terms(self):
        return [("lhs", t) for t in self.lhs] + [("rhs", t) for t in self.rhs]


@dataclass(frozen=True)
class ConstantSet:
    hardy_coeff: float
    remainder_coeff: float
    rhs_coeffs: dict
    lhs_coeffs: dict = field(default_factory=dict)
    c: float = 0.0


# -- shared pieces ---------------------------------------------------------

def _K(e):
    return 0.5 * (1.0 + e.nu * e.m)


def _hc(e):
    return 0.25 * (1.0 - (e.nu * e.m) ** 2)


def _R(e):
    return e.c * e.c + (e.m - 1.0) * (e.lam - e.lam * e.lam)


def _two_minus_m(e):
    return 2.0 - e.m


def _p(e):
    return e.p


def _r(e):
    return e.r


def _p_minus_r(e):
    return e.p - e.r


def _two_minus_r(e):
    return 2.0 - e.r


def _two_minus_p(e):
    return 2.0 - e.p


def _pred(text, fn):
    return (text, fn)


M_POS = _pred("m > 0", lambda q: q.m > 0)
M_GT1 = _pred("m > 1", lambda q: q.m > 1)
NU_POS_LE = _pred("0 < nu <= 1/m", lambda q: q.nu > 0 and q.nu * q.m <= 1 + NUM_SLACK)
NU_LE = _pred("0 <= nu <= 1/m", lambda q: q.nu >= 0 and q.nu * q.m <= 1 + NUM_SLACK)
NU_LT = _pred("0 <= nu < 1/m", lambda q: q.nu >= 0 and q.nu * q.m < 1)
LAM_RANGE = _pred("0 <= lambda < (1 + nu m)/2", lambda q: 0 <= q.lam < 0.5 * (1 + q.nu * q.m))
LAM_NONPOS = _pred("lambda <= 0", lambda q: q.lam <= 0)
LAM_ZERO = _pred("lambda = 0", lambda q: q.lam == 0)
LAM_LIMIT = _pred(
    "lambda = (1 + nu m)/2", lambda q: abs(q.lam - 0.5 * (1 + q.nu * q.m)) <= NUM_SLACK
)
COR4_COND = _pred(
    "2(1 + nu m) - 4 lambda^2 <= 1",
    lambda q: 2 * (1 + q.nu * q.m) - 4 * q.lam * q.lam <= 1 + NUM_SLACK,
)

HARDY = Term("hardy", 1, 0, 2)
REMAINDER = Term("remainder", 1, 0, _two_minus_m)
MAIN_L1 = Term("main", 0, 1, 1)
TAIL_L1 = Term("tail", 0, 1, 0)


def _nu_boundary(q):
    if abs(q.nu * q.m - 1.0) <= NUM_SLACK:
        return "nu = 1/m lies on the boundary of the accepted hypothesis set"
    return None


# -- coefficient maps ------------------------------------------------------

def _l1_common(e, remainder):
    return {"hardy": _hc(e), "remainder": remainder / e.scale**e.m}


def _coef_l3a(e):
    return {**_l1_common(e, e.c**2), "main": _K(e) - e.lam**2, "tail": (e.lam**2 - e.lam) / e.scale}


def _coef_l3b(e):
    return {**_l1_common(e, e.c**2), "main": _K(e), "tail": -e.lam / e.scale}


def _coef_cor2(e):
    return {**_l1_common(e, e.c**2), "main": _K(e)}


def _coef_cor3(e):
    return {**_l1_common(e, _R(e)), "main": _K(e) - e.lam**2}


def _coef_m1(e):
    return {"remainder": (e.m - 1.0) / e.scale ** (e.m - 1.0), "one": 1.0}


def _coef_ex1(e):
    return {"remainder": 4.0 * e.c**2 / 3.0 / e.scale, "main": 1.0, "tail": -1.0 / 3.0 / e.scale}


def _coef_ex2(e):
    return {"remainder": 1.0 / e.scale, "main": 1.0, "tail": -0.5 / e.scale}


def _coef_ex3(e):
    return {"hardy": 1.0, "main": 1.0, "tail": -1.0 / e.scale}


def _coef_opial6(e):
    return {"one": 1.0, "two": 2.0}


def _coef_opial7(e):
    return {"one": 1.0, "half_rho": 0.5 * e.scale}


def _coef_t2a(e):
    nm2 = (e.nu * e.m) ** 2
    return {
        "hardy": 1.0 - e.r * nm2,
        "remainder": 4.0 * e.r * _R(e) / e.scale**e.m,
        "main": e.p**e.r * (2.0 * (1.0 + e.nu * e.m) - 4.0 * e.lam**2) ** e.r,
    }


def _coef_t2b(e):
    nm = e.nu * e.m
    return {
        "hardy": 1.0,
        "remainder": 4.0 * e.r * _R(e) / ((1.0 - nm * nm) * e.scale**e.m),
        "main": e.p**e.r * (2.0 / (1.0 - nm) - 4.0 * e.lam**2 / (1.0 - nm * nm)) ** e.r,
    }


def _coef_cor4a(e):
    return {
        "remainder": 4.0 * e.p * _R(e) / e.scale**e.m,
        "main": e.p**e.p,
        "hardy": -(1.0 - e.p * (e.nu * e.m) ** 2),
    }


def _coef_cor4b(e):
    return {"hardy": 1.0, "remainder": e.p * (e.m - 1.0) / e.scale**e.m, "main": e.p**e.p}


def _coef_t3a(e):
    return {"hardy": _hc(e), "remainder": _R(e) / e.scale**e.m, "main": 4.0 * (_K(e) - e.lam**2)}


def _coef_t3b(e):
    return {
        "hardy": _hc(e),
        "remainder": e.c**2 / e.scale**e.m,
        "main": 2.0 * (1.0 + e.nu * e.m) + abs(e.lam),
    }


def _with_r_equal_p(fn):
    def coef(e):
        return fn(Context(e.nu, e.m, e.lam, e.c, e.p, e.p, e.scale))

    return coef


def _coef_aw1(e):
    return {"hardy": _hc(e), "remainder": e.c**2 / e.scale**e.m, "main": 1.0}


# -- registry --------------------------------------------------------------

_L1_LHS = (HARDY, REMAINDER)
_LP_LHS = (Term("hardy", _p, 0, 2), Term("remainder", _p, 0, _two_minus_m))
_L2_LHS = (Term("hardy", 2, 0, 2), Term("remainder", 2, 0, _two_minus_m))
_LP_RHS_MIXED = (Term("main", _p_minus_r, _r, _two_minus_r),)
_LP_RHS_GRAD = (Term("main", 0, _p, _two_minus_p),)
_L2_RHS = (Term("main", 0, 2, 0),)


def _l1_family(prefix, kind, what):
    a = Statement(
        f"{prefix}A", f"L1 Hardy inequality with Lamb remainder, {what}, 0 <= lambda < (1+nu m)/2",
        kind, _L1_LHS, (MAIN_L1, TAIL_L1), _coef_l3a, (M_POS, NU_POS_LE, LAM_RANGE),
    )
    b = Statement(
        f"{prefix}B", f"L1 Hardy inequality with Lamb remainder, {what}, lambda <= 0",
        kind, _L1_LHS, (MAIN_L1, TAIL_L1), _coef_l3b, (M_POS, NU_POS_LE, LAM_NONPOS),
    )
    return a, b


def _build():
    entries = []
    l3a, l3b = _l1_family("L3", "one-sided", "on [0, rho]")
    t1a, t1b = _l1_family("T1", "segment", "on a segment")
    t4a, t4b = _l1_family("T4", "domain", "on a convex domain")
    entries += [l3a, l3b, t1a, t1b, t4a, t4b]
    entries += [
        Statement("COR2", "L1 inequality with the classical Lamb constant on [0, rho]", "one-sided",
                  _L1_LHS, (MAIN_L1,), _coef_cor2, (M_POS, NU_POS_LE, LAM_ZERO), lamb="zero"),
        Statement("COR3", "L1 inequality with the combined remainder c^2 + (m-1)(lambda - lambda^2) on [0, rho]",
                  "one-sided", _L1_LHS, (MAIN_L1,), _coef_cor3, (M_GT1, NU_POS_LE, LAM_RANGE)),
        Statement("T5", "L1 inequality with the combined remainder on a convex domain", "domain",
                  _L1_LHS, (MAIN_L1,), _coef_cor3, (M_GT1, NU_POS_LE, LAM_RANGE)),
        Statement("M1SHARP", "(m-1) rho^(1-m) int |f|/x^(2-m) <= int |f'| on [0, rho]", "one-sided",
                  (REMAINDER,), (Term("one", 0, 1, 0),), _coef_m1, (M_GT1,), lamb="none"),
        Statement("EX1S", "segment L1 inequality at nu = 1, m = 1, lambda = 1/2 (constant j'_1^2/3)", "segment",
                  (Term("remainder", 1, 0, 1),), (MAIN_L1, TAIL_L1), _coef_ex1, (), fixed=(1.0, 1.0, 0.5)),
        Statement("EX2S", "segment L1 inequality at nu = 1, m = 1 in the limit lambda -> 1", "segment",
                  (Term("remainder", 1, 0, 1),), (MAIN_L1, TAIL_L1), _coef_ex2, (), lamb="none",
                  fixed=(1.0, 1.0, 1.0)),
        Statement("EX3S", "segment L1 inequality at nu = 0, m = 1 in the limit lambda -> 1/2", "segment",
                  (HARDY,), (MAIN_L1, TAIL_L1), _coef_ex3, (), lamb="none", fixed=(0.0, 1.0, 0.5)),
        Statement("OPIAL6", "int |f f'|/x <= 2 int |f'|^2 on [0, rho]", "one-sided",
                  (Term("one", 1, 1, 1),), (Term("two", 0, 2, 0),), _coef_opial6, (), lamb="none",
                  needs_params=False),
        Statement("OPIAL7", "int |f f'| <= (rho/2) int |f'|^2 on [0, rho]", "one-sided",
                  (Term("one", 1, 1, 0),), (Term("half_rho", 0, 2, 0),), _coef_opial7, (), lamb="none",
                  needs_params=False),
        Statement("T2A", "L^p segment inequality with parameters (p, r), first form", "segment",
                  _LP_LHS, _LP_RHS_MIXED, _coef_t2a, (M_GT1, NU_LE, LAM_RANGE), uses_p=True, uses_r=True),
        Statement("T2B", "L^p segment inequality with parameters (p, r), normalised form", "segment",
                  _LP_LHS, _LP_RHS_MIXED, _coef_t2b, (M_GT1, NU_LT, LAM_RANGE), uses_p=True, uses_r=True),
        Statement("COR4A", "L^p segment inequality with r = p when 2(1+nu m) - 4 lambda^2 <= 1", "segment",
                  (Term("remainder", _p, 0, _two_minus_m),),
                  (Term("main", 0, _p, _two_minus_p), Term("hardy", _p, 0, 2)),
                  _coef_cor4a, (M_GT1, NU_LE, LAM_RANGE, COR4_COND), uses_p=True),
        Statement("COR4B", "L^p segment inequality in the limit lambda = (1+nu m)/2", "segment",
                  _LP_LHS, _LP_RHS_GRAD, _coef_cor4b, (M_GT1, NU_LT, LAM_LIMIT), uses_p=True, lamb="limit"),
        Statement("T3A", "L^2 segment inequality, 0 <= lambda < (1+nu m)/2", "segment",
                  _L2_LHS, _L2_RHS, _coef_t3a, (M_GT1, NU_LE, LAM_RANGE)),
        Statement("T3B", "L^2 segment inequality, lambda <= 0", "segment",
                  _L2_LHS, _L2_RHS, _coef_t3b, (M_POS, NU_LE, LAM_NONPOS), boundary_note=_nu_boundary),
        Statement("T6A", "L^p inequality on a convex domain, first form", "domain",
                  _LP_LHS, _LP_RHS_GRAD, _with_r_equal_p(_coef_t2a), (M_GT1, NU_LE, LAM_RANGE), uses_p=True),
        Statement("T6B", "L^p inequality on a convex domain, normalised form", "domain",
                  _LP_LHS, _LP_RHS_GRAD, _with_r_equal_p(_coef_t2b), (M_GT1, NU_LT, LAM_RANGE), uses_p=True),
        Statement("T7A", "L^2 inequality on a convex domain, 0 <= lambda < (1+nu m)/2", "domain",
                  _L2_LHS, _L2_RHS, _coef_t3a, (M_GT1, NU_LE, LAM_RANGE)),
        Statement("T7B", "L^2 inequality on a convex domain, lambda <= 0", "domain",
                  _L2_LHS, _L2_RHS, _coef_t3b, (M_POS, NU_LE, LAM_NONPOS), boundary_note=_nu_boundary),
        Statement("AW1", "sharp L^2 inequality with the classical Lamb constant on a convex domain", "domain",
                  _L2_LHS, _L2_RHS, _coef_aw1, (M_POS, NU_POS_LE, LAM_ZERO), lamb="zero"),
        Statement("COR5", "c^2 + (m-1)(lambda - lambda^2) <= C^2 when 2(1+nu m) - 4 lambda^2 <= 1", "comparison",
                  (), (), lambda e: {}, (M_GT1, NU_LE, LAM_RANGE)),
    ]
    return {s.id: s for s in entries}


REGISTRY = _build()
ALIASES = {"SC1": "T6A", "SC2": "T6B", "SC3": "T7A"}


def get_statement(stmt):
    if isinstance(stmt, Statement):
        return stmt
    key = str(stmt).upper()
    key = ALIASES.get(key, key)
    if key not in REGISTRY:
        names = ", ".join(sorted(REGISTRY) + sorted(ALIASES))
        raise InvalidInput(f"unknown statement {stmt!r}; valid statements: {names}")
    return REGISTRY[key]


# -- parameters and constants ----------------------------------------------


def resolve_params(stmt, params):
    """Apply fixed values and validity predicates; returns LambParams or None."""
    stmt = get_statement(stmt)
    if stmt.fixed is not None:
        fixed = LambParams(*stmt.fixed)
        if params is not None and (params.nu, params.m, params.lam) != (fixed.nu, fixed.m, fixed.lam):
            raise InvalidParams(
                f"{stmt.id} is stated at nu={fixed.nu}, m={fixed.m}, lambda={fixed.lam}; got {params.as_dict()}"
            )
        return fixed
    if params is None:
        if stmt.needs_params:
            raise InvalidParams(f"{stmt.id} needs (nu, m, lambda)")
        return None
    for text, ok in stmt.predicates:
        if not ok(params):
            raise InvalidParams(f"{stmt.id} requires {text}; got {params.as_dict()}")
    if stmt.lamb == "limit":
        params = params.with_lambda(params.upper)
    return params


def _check_pr(stmt, p, r):
    if stmt.uses_p:
        if p is None or not p >= 1 or not math.isfinite(p):
            raise InvalidParams(f"{stmt.id} requires p >= 1, got {p}")
    if stmt.uses_r:
        if r is None or not 1 <= r <= p:
            raise InvalidParams(f"{stmt.id} requires 1 <= r <= p, got r={r}, p={p}")
    return (float(p) if stmt.uses_p else None, float(r) if stmt.uses_r else None)


def _lamb_c(stmt, params):
    if stmt.lamb == "param":
        return solve_lamb(params).c
    if stmt.lamb == "zero":
        return classical_lamb(params.nu, params.m).c
    return 0.0


def statement_constants(params, stmt, extra=None, scale=1.0, c=None):
    """Every coefficient of ``stmt`` at ``params`` for geometric scale ``scale``.

    ``extra`` carries ``p`` and ``r`` when the statement needs them.
    """
    stmt = get_statement(stmt)
    if stmt.kind == "comparison":
        raise InvalidInput(f"{stmt.id} has no inequality terms; use compare_with_classical")
    extra = extra or {}
    params = resolve_params(stmt, params)
    p, r = _check_pr(stmt, extra.get("p"), extra.get("r"))
    if c is None:
        c = _lamb_c(stmt, params) if params is not None else 0.0
    nu, m, lam = (params.nu, params.m, params.lam) if params is not None else (0.0, 1.0, 0.0)
    coeffs = stmt.coefficients(Context(nu, m, lam, c, p, r, float(scale)))
    for name, value in coeffs.items():
        if not math.isfinite(value):
            raise InvalidParams(f"coefficient {name} of {stmt.id} is not finite")
    lhs = {t.coeff: coeffs[t.coeff] for t in stmt.lhs}
    rhs = {t.coeff: coeffs[t.coeff] for t in stmt.rhs}
    return ConstantSet(
        hardy_coeff=0.25 * (1.0 - (nu * m) ** 2),
        remainder_coeff=lhs.get("remainder", 0.0),
        rhs_coeffs=rhs,
        lhs_coeffs=lhs,
        c=c,
    )


# -- admissibility ---------------------------------------------------------


def _context_for(stmt, params, p, r, scale):
    nu, m, lam = (params.nu, params.m, params.lam) if params is not None else (0.0, 1.0, 0.0)
    return Context(nu, m, lam, 0.0, p, r, scale)


def _end_exponent(decay, a, b, s):
    """Power of t in |f|^a |f'|^b / t^s near an end where f ~ t^decay."""
    if math.isinf(decay):
        return math.inf
    e = -s
    if a:
        e += a * decay
    if b:
        e += b * (decay - 1.0) if decay > 0 else 0.0
    return e


def _far_exponent(decay, a, b):
    if decay is None or math.isinf(decay):
        return math.inf
    e = 0.0
    if a:
        e += a * decay
    if b and decay > 0:
        e += b * min(decay - 1.0, 0.0)
    return e


def _term_admissible(piece, a, b, s):
    near = _end_exponent(piece.boundary_decay, a, b, s)
    if not near > -1.0:
        return False, f"t^{near:g} at the boundary"
    far = _far_exponent(piece.far_decay, a, b)
    if not far > -1.0:
        return False, f"t^{far:g} at the far end"
    return True, ""


def _term_label(term, a, b, s, kind):
    grad = "|grad f|" if kind == "domain" else "|f'|"
    parts = []
    if a:
        parts.append("|f|" if a == 1 else f"|f|^{a:g}")
    if b:
        parts.append(grad if b == 1 else f"{grad}^{b:g}")
    num = " ".join(parts) or "1"
    den = "" if s == 0 else (" / delta" if s == 1 else f" / delta^{s:g}")
    return f"int {num}{den}"


def admissible(subject, stmt, params=None, extra=None, constants=None):
    """Check that every nonzero-coefficient term of ``stmt`` is finite for ``subject``.

    Returns ``(ok, reason)``; ``reason`` names the first divergent term.
    A bare :class:`TestFunction1D` is checked as a one-sided subject on
    [0, 1] for one-sided statements and as an affine segment subject
    otherwise.
    """
    from .subjects import OneSidedSubject, SegmentSubject, TestFunction1D

    stmt = get_statement(stmt)
    if isinstance(subject, TestFunction1D):
        if stmt.kind == "one-sided":
            subject = OneSidedSubject(subject)
        elif stmt.kind == "segment":
            embed = "affine" if subject.two_sided else "radial"
            subject = SegmentSubject(subject, 0.0, 1.0, embed)
        else:
            return False, f"{stmt.id} needs a radial subject on a domain"
    if subject.kind != stmt.kind:
        return False, f"{stmt.id} needs a {stmt.kind} subject, got {subject.kind}"
    extra = extra or {}
    p, r = extra.get("p"), extra.get("r")
    ctx = _context_for(stmt, params, p, r, subject.scale)
    coeffs = constants.lhs_coeffs | constants.rhs_coeffs if constants is not None else None
    for side, term in stmt.terms():
        if coeffs is not None and coeffs.get(term.coeff) == 0.0:
            continue
        a, b, s = term.powers(ctx)
        for piece in subject.pieces():
            ok, why = _term_admissible(piece, a, b, s)
            if not ok:
                return False, f"{_term_label(term, a, b, s, subject.kind)} diverges ({why})"
    return True, ""


# -- evaluation ------------------------------------------------------------


@dataclass
class TermValue:
    side: str
    name: str
    coeff: float
    powers: tuple
    integral: float
    error: float

    @property
    def contribution(self):
        return self.coeff * self.integral

    def to_dict(self):
        return {
            "side": self.side,
            "name": self.name,
            "coeff": self.coeff,
            "powers": {"f": self.powers[0], "df": self.powers[1], "delta": self.powers[2]},
            "integral": self.integral,
            "error": self.error,
        }


@dataclass
class InequalityReport:
    statement: str
    params: dict
    subject: str
    terms: list
    lhs: Optional[float]
    rhs: Optional[float]
    margin: Optional[float]
    verdict: str
    tolerance: Optional[float] = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "statement": self.statement,
            "params": self.params,
            "subject": self.subject,
            "terms": [t.to_dict() for t in self.terms],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "notes": list(self.notes),
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data):
        terms = [
            TermValue(t["side"], t["name"], t["coeff"],
                      (t["powers"]["f"], t["powers"]["df"], t["powers"]["delta"]), t["integral"], t["error"])
            for t in data["terms"]
        ]
        return cls(data["statement"], data["params"], data["subject"], terms, data["lhs"], data["rhs"],
                   data["margin"], data["verdict"], data.get("tolerance"), list(data.get("notes", [])))


def _integrand(piece, a, b, s):
    def g(t):
        out = np.ones_like(t) if s == 0 else t ** (-s)
        if a:
            out = out * piece.value(t) ** a
        if b:
            out = out * piece.slope(t) ** b
        if piece.weight is not None:
            out = out * piece.weight(t)
        return out

    return g


def _integrate_term(subject, a, b, s, rel_tol):
    values, errors = [], []
    for piece in subject.pieces():
        res = integrate_segment(
            _integrand(piece, a, b, s),
            0.0,
            piece.length,
            singular_left=True,
            singular_right=piece.far_decay is not None,
            rel_tol=rel_tol,
            breakpoints=piece.breakpoints,
        )
        values.append(res.value)
        errors.append(res.error_estimate)
    return math.fsum(values), math.fsum(errors)


def _params_dict(params, p, r):
    base = params.as_dict() if params is not None else {"nu": None, "m": None, "lambda": None}
    return {**base, "p": p, "r": r}


def evaluate_statement(stmt, params, subject, p=None, r=None, rel_tol=None, constants=None):
    """Evaluate both sides of ``stmt`` for ``subject`` and return an :class:`InequalityReport`.

    Raises :class:`InvalidParams` when ``params`` violate the statement's
    hypotheses.  An inadmissible subject gives a report with verdict
    ``inadmissible``.  Quadrature failures raise :class:`AccuracyFailure`
    whose ``partial`` is the report built from the best estimates.
    """
    stmt = get_statement(stmt)
    if stmt.kind == "comparison":
        raise InvalidInput(f"{stmt.id} has no inequality terms; use compare_with_classical")
    if subject.kind != stmt.kind:
        raise InvalidInput(f"{stmt.id} needs a {stmt.kind} subject, got {subject.kind}")
    params = resolve_params(stmt, params)
    p, r = _check_pr(stmt, p, r)
    extra = {"p": p, "r": r}
    if constants is None:
        constants = statement_constants(params, stmt, extra, scale=subject.scale)
    notes = []
    if stmt.boundary_note is not None and params is not None:
        note = stmt.boundary_note(params)
        if note:
            notes.append(note)
    pdict = _params_dict(params, p, r)
    ok, reason = admissible(subject, stmt, params, extra, constants)
    if not ok:
        return InequalityReport(stmt.id, pdict, subject.describe(), [], None, None, None,
                                "inadmissible", None, notes + [reason])
    if rel_tol is None:
        rel_tol = DEFAULT_REL_TOL_ND if subject.kind == "domain" else DEFAULT_REL_TOL_1D
    coeffs = constants.lhs_coeffs | constants.rhs_coeffs
    ctx = _context_for(stmt, params, p, r, subject.scale)
    terms = []
    failure = None
    for side, term in stmt.terms():
        coeff = coeffs[term.coeff]
        a, b, s = term.powers(ctx)
        if coeff == 0.0:
            terms.append(TermValue(side, term.coeff, coeff, (a, b, s), 0.0, 0.0))
            continue
        try:
            value, err = _integrate_term(subject, a, b, s, rel_tol)
        except AccuracyFailure as exc:
            partial = exc.partial
            value, err = (partial.value, partial.error_estimate) if partial is not None else (math.nan, math.inf)
            failure = failure or exc
        terms.append(TermValue(side, term.coeff, coeff, (a, b, s), value, err))
    report = _finish(stmt, pdict, subject.describe(), terms, notes)
    if failure is not None:
        raise AccuracyFailure(f"{stmt.id}: {failure}", partial=report)
    return report


def _finish(stmt, pdict, subject_text, terms, notes):
    lhs = math.fsum(t.contribution for t in terms if t.side == "lhs")
    rhs = math.fsum(t.contribution for t in terms if t.side == "rhs")
    margin = rhs - lhs
    tol = REL_FLOOR * max(abs(lhs), abs(rhs), 1.0) + math.fsum(abs(t.coeff) * t.error for t in terms)
    verdict = "violated-beyond-tolerance" if margin < -tol else "holds"
    return InequalityReport(stmt.id, pdict, subject_text, terms, lhs, rhs, margin, verdict, tol, notes)
