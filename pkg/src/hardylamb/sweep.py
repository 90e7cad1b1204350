"""Parameter sweeps: evaluate one statement over a grid of parameters and a
battery of subjects, with deterministic grid-ordered aggregation."""

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import HardyLambError, InvalidInput, NumericalFailure
from .lamb import LambParams
from .quadrature import monte_carlo_integral
from .statements import (
    evaluate_statement,
    get_statement,
    resolve_params,
    statement_constants,
)
from .subjects import (
    BesselProfile,
    OneSidedSubject,
    RadialSubject,
    SegmentSubject,
    make_test_function,
    parse_domain,
)

CSV_COLUMNS = ("statement", "nu", "m", "lambda", "p", "r", "subject", "lhs", "rhs", "margin", "verdict")
GRID_KEYS = ("nu", "m", "lambda", "p", "r")

BATTERY_FAMILIES = (
    "powerbump:1.5,1", "powerbump:1.5,2", "powerbump:2,1", "powerbump:2,2", "powerbump:3,1", "powerbump:3,2",
    "sinepower:1.5", "sinepower:2", "besselprofile",
)
BATTERY_DOMAINS = ("ball:2,1", "ball:3,1", "box:1x1", "box:2x1x1")


@dataclass(frozen=True)
class SubjectSpec:
    """Where and what: ``fn`` is a family spec; ``besselprofile`` alone
    means the profile at the cell's own (nu, m, c)."""

    fn: str
    segment: Optional[tuple] = None
    embed: str = "affine"
    domain: Optional[str] = None
    rho: float = 1.0

    def build(self, kind, c=None, params=None):
        if self.fn.strip().lower() == "besselprofile":
            if params is None or not c:
                raise InvalidInput("the cell has no Lamb constant for its own profile")
            fn = BesselProfile(params.nu, params.m, c, lam=params.lam)
        else:
            fn = make_test_function(self.fn)
        if kind == "one-sided":
            return OneSidedSubject(fn, self.rho)
        if kind == "segment":
            a, b = self.segment if self.segment is not None else (-1.0, 1.0)
            return SegmentSubject(fn, a, b, self.embed)
        if kind == "domain":
            if self.domain is None:
                raise InvalidInput("domain statements need a domain in the subject spec")
            return RadialSubject(parse_domain(self.domain), fn)
        raise InvalidInput(f"no subjects for statement kind {kind!r}")

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, str):
            return cls(data)
        seg = data.get("segment")
        return cls(
            fn=data["fn"],
            segment=tuple(float(x) for x in seg) if seg is not None else None,
            embed=data.get("embed", "affine"),
            domain=data.get("domain"),
            rho=float(data.get("rho", 1.0)),
        )


def default_battery(stmt):
    """Families x placements used when a grid cell names no subjects."""
    kind = get_statement(stmt).kind
    if kind == "one-sided":
        return [SubjectSpec(f) for f in BATTERY_FAMILIES]
    if kind == "segment":
        out = []
        for f in BATTERY_FAMILIES:
            if f != "besselprofile":
                out.append(SubjectSpec(f, (-1.0, 1.0), "affine"))
            out.append(SubjectSpec(f, (-1.0, 1.0), "radial"))
        return out
    if kind == "domain":
        return [SubjectSpec(f, domain=d) for d in BATTERY_DOMAINS for f in BATTERY_FAMILIES]
    raise InvalidInput(f"{get_statement(stmt).id} cannot be swept")


@dataclass(frozen=True)
class GridCell:
    nu: Optional[float] = None
    m: Optional[float] = None
    lam: Optional[float] = None
    p: Optional[float] = None
    r: Optional[float] = None
    battery: Optional[tuple] = None

    def params(self):
        if self.nu is None and self.m is None and self.lam is None:
            return None
        return LambParams(self.nu if self.nu is not None else 0.0,
                          self.m if self.m is not None else 1.0,
                          self.lam if self.lam is not None else 0.0)


def _expand_value(value):
    if value is None:
        return [None]
    if isinstance(value, dict):
        lo, hi, steps = float(value["from"]), float(value["to"]), int(value["steps"])
        if steps < 1:
            raise InvalidInput("range steps must be >= 1")
        if steps == 1:
            return [lo]
        return [float(x) for x in np.linspace(lo, hi, steps)]
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(value)]


def expand_grid(cells):
    """Expand JSON-style cells into :class:`GridCell` objects, in order.

    A cell value may be a number, a list, or ``{"from", "to", "steps"}``
    (inclusive).  Lists and ranges expand to the cartesian product in the
    key order nu, m, lambda, p, r.
    """
    out = []
    for cell in cells:
        if not isinstance(cell, dict):
            raise InvalidInput("grid cells must be JSON objects")
        unknown = set(cell) - set(GRID_KEYS) - {"battery"}
        if unknown:
            raise InvalidInput(f"unknown grid keys {sorted(unknown)}; expected {', '.join(GRID_KEYS)}, battery")
        battery = cell.get("battery")
        battery = tuple(SubjectSpec.from_dict(b) for b in battery) if battery is not None else None
        axes = [_expand_value(cell.get(k)) for k in GRID_KEYS]
        for nu, m, lam, p, r in itertools.product(*axes):
            out.append(GridCell(nu, m, lam, p, r, battery))
    return out


def load_grid(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"grid file is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise InvalidInput("grid file must hold a JSON array of cells")
    return expand_grid(data)


# -- Monte Carlo cross-check -------------------------------------------------


def _mc_term(subject, a, b, s, samples, seed):
    d0 = subject.scale
    u = subject.profile

    def integrand(x):
        dist = subject.domain.dist(x)
        t = dist / d0
        out = dist ** (-s) if s else np.ones_like(dist)
        if a:
            out = out * np.abs(u._value(t, 1.0 - t)) ** a
        if b:
            out = out * (np.abs(u._slope(t, 1.0 - t)) / d0) ** b
        return out

    return monte_carlo_integral(subject.domain, integrand, samples, seed)


def _mc_check(report, subject, samples, seed):
    checked = skipped = failed = 0
    notes = []
    for k, term in enumerate(report.terms):
        if term.coeff == 0.0:
            continue
        a, b, s = term.powers
        piece = subject.pieces()[0]
        alpha = piece.boundary_decay
        e = -s + (a * alpha if a else 0.0) + (b * (alpha - 1.0) if b else 0.0)
        if not 2.0 * e > -1.0:
            skipped += 1
            continue
        value, err = _mc_term(subject, a, b, s, samples, seed + 7919 * k)
        tol = max(0.01 * abs(term.integral), 3.0 * err)
        checked += 1
        if abs(value - term.integral) > tol:
            failed += 1
            notes.append(f"monte carlo {term.name}: {value:.6g} +- {err:.2g} vs {term.integral:.6g}")
    return {"checked": checked, "skipped_infinite_variance": skipped, "failed": failed}, notes


# -- sweep ---------------------------------------------------------------------


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return ""
        return repr(x)
    return str(x)


@dataclass
class SweepRow:
    statement: str
    nu: Optional[float]
    m: Optional[float]
    lam: Optional[float]
    p: Optional[float]
    r: Optional[float]
    subject: str
    lhs: Optional[float]
    rhs: Optional[float]
    margin: Optional[float]
    verdict: str
    reason: str = ""
    mc: Optional[dict] = None

    def csv_fields(self):
        return [self.statement, _fmt(self.nu), _fmt(self.m), _fmt(self.lam), _fmt(self.p), _fmt(self.r),
                self.subject, _fmt(self.lhs), _fmt(self.rhs), _fmt(self.margin), self.verdict]


@dataclass
class SweepReport:
    statement: str
    rows: list = field(default_factory=list)

    @property
    def evaluated(self):
        return [r for r in self.rows if r.verdict in ("holds", "violated-beyond-tolerance")]

    @property
    def failures(self):
        return [r for r in self.rows if r.verdict == "violated-beyond-tolerance"]

    @property
    def min_margin(self):
        margins = [r.margin for r in self.evaluated]
        return min(margins) if margins else None

    @property
    def worst_cell(self):
        rows = self.evaluated
        return min(rows, key=lambda r: r.margin) if rows else None

    def summary(self):
        worst = self.worst_cell
        return {
            "statement": self.statement,
            "rows": len(self.rows),
            "evaluated": len(self.evaluated),
            "violations": len(self.failures),
            "min_margin": self.min_margin,
            "worst_cell": asdict(worst) if worst is not None else None,
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.csv_fields())
        return buf.getvalue()


def _run_cell(job):
    stmt_id, cell, specs, seed, mc_samples, rel_tol = job
    stmt = get_statement(stmt_id)
    params = cell.params()
    base = dict(statement=stmt.id, nu=cell.nu, m=cell.m, lam=cell.lam, p=cell.p, r=cell.r)
    rows = []
    try:
        params = resolve_params(stmt, params)
        extra = {"p": cell.p, "r": cell.r}
        constants = statement_constants(params, stmt, extra)
    except HardyLambError as exc:
        for spec in specs:
            rows.append(SweepRow(**base, subject=spec.fn, lhs=None, rhs=None, margin=None,
                                 verdict="invalid-params", reason=str(exc)))
        return rows
    if params is not None:
        base.update(nu=params.nu, m=params.m, lam=params.lam)
    for k, spec in enumerate(specs):
        try:
            subject = spec.build(stmt.kind, constants.c, params)
        except HardyLambError as exc:
            rows.append(SweepRow(**base, subject=spec.fn, lhs=None, rhs=None, margin=None,
                                 verdict="skipped", reason=str(exc)))
            continue
        try:
            scaled = statement_constants(params, stmt, extra, scale=subject.scale, c=constants.c)
            report = evaluate_statement(stmt, params, subject, cell.p, cell.r, rel_tol, scaled)
        except NumericalFailure as exc:
            rows.append(SweepRow(**base, subject=subject.describe(), lhs=None, rhs=None, margin=None,
                                 verdict="numerical-failure", reason=str(exc)))
            continue
        row = SweepRow(**base, subject=subject.describe(), lhs=report.lhs, rhs=report.rhs,
                       margin=report.margin, verdict=report.verdict, reason="; ".join(report.notes))
        if mc_samples and stmt.kind == "domain" and report.verdict != "inadmissible":
            row.mc, notes = _mc_check(report, subject, mc_samples, seed + 104729 * k)
            if notes:
                row.reason = "; ".join([row.reason, *notes]).strip("; ")
        rows.append(row)
    return rows


def parameter_sweep(stmt, grid, battery=None, seed=42, mc_samples=0, rel_tol=None, workers=1):
    """Evaluate ``stmt`` for every grid cell and battery subject.

    ``grid`` is a list of :class:`GridCell` (or JSON-style dicts).
    ``battery`` overrides the default subjects for cells without their own.
    With ``mc_samples`` > 0, domain cells are cross-checked term by term
    against Monte Carlo.  Rows come back in grid order whatever ``workers``
    is, so the CSV is byte-identical between runs.
    """
    stmt = get_statement(stmt)
    cells = [c if isinstance(c, GridCell) else expand_grid([c])[0] for c in grid]
    if battery is not None:
        battery = tuple(SubjectSpec.from_dict(b) if not isinstance(b, SubjectSpec) else b for b in battery)
    default = tuple(battery) if battery is not None else tuple(default_battery(stmt))
    jobs = [
        (stmt.id, cell, cell.battery if cell.battery is not None else default,
         int(seed) + 1000003 * i, int(mc_samples), rel_tol)
        for i, cell in enumerate(cells)
    ]
    report = SweepReport(stmt.id)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(job) for job in jobs]
    for rows in results:
        report.rows.extend(rows)
    return report
