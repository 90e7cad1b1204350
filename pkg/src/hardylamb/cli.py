"""Command-line interface: ``hardylamb <subcommand> ...``.

Exit codes: 0 everything holds, 1 some inequality is violated, 2 invalid
input (including an inadmissible subject), 3 numerical failure.  Errors are
written to stderr as one JSON object ``{"error": kind, "message": text}``.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .checks import IDENTITIES, compare_with_classical, verify_identity
from .errors import HardyLambError, InvalidInput, NumericalFailure
from .lamb import LambParams, lamb_constant
from .quadrature import DEFAULT_REL_TOL_1D, DEFAULT_REL_TOL_ND, layer_cake_integral, monte_carlo_integral
from .statements import evaluate_statement, get_statement, resolve_params
from .subjects import parse_domain
from .sweep import SubjectSpec, load_grid, parameter_sweep

EXIT_OK, EXIT_VIOLATED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
DEFAULT_SEED = 42
DEFAULT_MC_SAMPLES = 100_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(f"{self.prog}: {message}")


@dataclass
class CliConfig:
    subcommand: str
    params: Optional[LambParams] = None
    p: Optional[float] = None
    r: Optional[float] = None
    statement: Optional[str] = None
    subject: Optional[SubjectSpec] = None
    rel_tol_1d: float = DEFAULT_REL_TOL_1D
    rel_tol_nd: float = DEFAULT_REL_TOL_ND
    seed: int = DEFAULT_SEED
    fmt: Optional[str] = None
    output: Optional[str] = None
    extra: dict = field(default_factory=dict)


def _pair(text, what):
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"{what} must be 'a,b', got {text!r}") from None
    if len(parts) != 2 or not all(math.isfinite(x) for x in parts):
        raise InvalidInput(f"{what} must be two finite numbers 'a,b', got {text!r}")
    return tuple(parts)


def _env_defaults():
    seed, tol1, tolnd = DEFAULT_SEED, DEFAULT_REL_TOL_1D, DEFAULT_REL_TOL_ND
    if os.environ.get("HARDYLAMB_SEED"):
        try:
            seed = int(os.environ["HARDYLAMB_SEED"])
        except ValueError:
            raise InvalidInput(f"HARDYLAMB_SEED must be an integer, got {os.environ['HARDYLAMB_SEED']!r}") from None
    if os.environ.get("HARDYLAMB_TOL"):
        try:
            vals = [float(x) for x in os.environ["HARDYLAMB_TOL"].split(",")]
        except ValueError:
            vals = []
        if len(vals) not in (1, 2):
            raise InvalidInput("HARDYLAMB_TOL must be 'tol' or 'tol_1d,tol_nd'")
        tol1 = vals[0]
        tolnd = vals[1] if len(vals) == 2 else vals[0]
    return seed, tol1, tolnd


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"))
    common.add_argument("--output", "-o")
    common.add_argument("--seed", type=int)
    common.add_argument("--rel-tol-1d", type=float)
    common.add_argument("--rel-tol-nd", type=float)

    parser = _Parser(prog="hardylamb", description="Parametric Lamb constants and Hardy-type inequality checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def params_args(p, required):
        p.add_argument("--nu", type=float, required=required)
        p.add_argument("--m", type=float, required=required)
        p.add_argument("--lambda", dest="lam", type=float, required=required)

    p = sub.add_parser("const", parents=[common], help="Lamb constant c for (nu, m, lambda)")
    params_args(p, True)
    p.add_argument("--method", default="auto", choices=("auto", "bisect", "ode", "closed"))

    p = sub.add_parser("table", parents=[common], help="CSV table of Lamb constants")
    p.add_argument("--nu-range", required=True)
    p.add_argument("--m-range", required=True)
    p.add_argument("--lambda-range", required=True)
    p.add_argument("--steps", type=int, default=5)

    p = sub.add_parser("verify", parents=[common], help="evaluate one statement for one subject")
    p.add_argument("--statement", required=True)
    params_args(p, False)
    p.add_argument("--p", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--fn")
    where = p.add_mutually_exclusive_group()
    where.add_argument("--segment")
    where.add_argument("--domain")
    p.add_argument("--embed", choices=("radial", "affine"), default="radial")
    p.add_argument("--rho", type=float, default=1.0)

    p = sub.add_parser("sweep", parents=[common], help="evaluate one statement over a JSON grid")
    p.add_argument("--statement", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--mc-samples", type=int)

    p = sub.add_parser("identities", parents=[common], help="residuals of the Bessel identities")
    p.add_argument("--which", default="all")

    p = sub.add_parser("domains", parents=[common], help="geometry self-check of a domain")
    p.add_argument("--domain", required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_MC_SAMPLES)
    return parser


def _fix_negative_values(argv):
    # argparse reads "-1,1" as an option; glue such values onto their flag
    out = []
    it = iter(argv)
    for arg in it:
        if arg in ("--segment", "--nu-range", "--m-range", "--lambda-range"):
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def parse_config(argv):
    ns = build_parser().parse_args(_fix_negative_values(list(argv)))
    seed, tol1, tolnd = _env_defaults()
    cfg = CliConfig(
        ns.subcommand,
        seed=ns.seed if ns.seed is not None else seed,
        rel_tol_1d=ns.rel_tol_1d if ns.rel_tol_1d is not None else tol1,
        rel_tol_nd=ns.rel_tol_nd if ns.rel_tol_nd is not None else tolnd,
        fmt=ns.fmt,
        output=ns.output,
    )
    for tol in (cfg.rel_tol_1d, cfg.rel_tol_nd):
        if not (math.isfinite(tol) and tol > 0):
            raise InvalidInput(f"tolerances must be positive, got {tol}")
    if any(getattr(ns, k, None) is not None for k in ("nu", "m", "lam")):
        if None in (ns.nu, ns.m, ns.lam):
            raise InvalidInput("give all of --nu, --m and --lambda, or none")
        cfg.params = LambParams(ns.nu, ns.m, ns.lam)
    if hasattr(ns, "statement"):
        cfg.statement = get_statement(ns.statement).id
    if ns.subcommand == "verify":
        cfg.p, cfg.r = ns.p, ns.r
        stmt = get_statement(cfg.statement)
        if stmt.kind != "comparison":
            if ns.fn is None:
                raise InvalidInput(f"{stmt.id} needs --fn")
            seg = _pair(ns.segment, "--segment") if ns.segment is not None else None
            if stmt.kind == "domain" and ns.domain is None:
                raise InvalidInput(f"{stmt.id} is a domain statement; give --domain")
            if stmt.kind != "domain" and ns.domain is not None:
                raise InvalidInput(f"{stmt.id} is a {stmt.kind} statement; --domain does not apply")
            if stmt.kind == "one-sided" and seg is not None:
                raise InvalidInput(f"{stmt.id} is one-sided; use --rho instead of --segment")
            if ns.domain is not None:
                parse_domain(ns.domain)
            cfg.subject = SubjectSpec(ns.fn, seg, ns.embed, ns.domain, ns.rho)
    elif ns.subcommand == "const":
        cfg.extra["method"] = ns.method
    elif ns.subcommand == "table":
        if ns.steps < 1:
            raise InvalidInput("--steps must be >= 1")
        cfg.extra.update(
            nu=_pair(ns.nu_range, "--nu-range"),
            m=_pair(ns.m_range, "--m-range"),
            lam=_pair(ns.lambda_range, "--lambda-range"),
            steps=ns.steps,
        )
    elif ns.subcommand == "sweep":
        if ns.workers < 1:
            raise InvalidInput("--workers must be >= 1")
        cfg.extra.update(grid=ns.grid, workers=ns.workers, mc_samples=ns.mc_samples)
    elif ns.subcommand == "identities":
        which = ns.which.upper()
        if which != "ALL" and which not in IDENTITIES:
            raise InvalidInput(f"unknown identity {ns.which!r}; valid: all, {', '.join(i.lower() for i in IDENTITIES)}")
        cfg.extra["which"] = IDENTITIES if which == "ALL" else (which,)
    elif ns.subcommand == "domains":
        cfg.extra.update(domain=parse_domain(ns.domain), samples=ns.samples)
    return cfg


# -- formatting --------------------------------------------------------------


def _dump_json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _rows_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _text_pairs(d):
    return "".join(f"{k}: {v}\n" for k, v in d.items())


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(cfg, default, as_dict, header=None, rows=None):
    fmt = cfg.fmt or default
    if fmt == "json":
        return _dump_json(as_dict)
    if fmt == "csv":
        if header is None:
            header, rows = list(as_dict), [list(as_dict.values())]
        return _rows_csv(header, rows)
    return _text_pairs(as_dict)


# -- subcommands -------------------------------------------------------------


def _cmd_const(cfg):
    root = lamb_constant(cfg.params, cfg.extra["method"])
    d = root.as_dict()
    out = {k: d[k] for k in ("c", "z", "residual", "method", "bracket")}
    if root.limiting:
        out["limiting"] = True
    return _render(cfg, "json", out), EXIT_OK


def _cmd_table(cfg):
    steps = cfg.extra["steps"]
    axes = [np.linspace(lo, hi, steps) if steps > 1 else [lo] for lo, hi in
            (cfg.extra["nu"], cfg.extra["m"], cfg.extra["lam"])]
    header = ("nu", "m", "lambda", "c", "z", "residual", "method")
    rows = []
    for nu in axes[0]:
        for m in axes[1]:
            for lam in axes[2]:
                nu, m, lam = float(nu), float(m), float(lam)
                try:
                    root = lamb_constant(LambParams(nu, m, lam))
                    rows.append((nu, m, lam, root.c, root.z, root.residual, root.method))
                except HardyLambError as exc:
                    rows.append((nu, m, lam, None, None, None, exc.kind))
    if (cfg.fmt or "csv") == "json":
        return _dump_json([dict(zip(header, r)) for r in rows]), EXIT_OK
    return _rows_csv(header, rows), EXIT_OK


def _cmd_verify(cfg):
    stmt = get_statement(cfg.statement)
    if stmt.kind == "comparison":
        out = compare_with_classical(cfg.params) if cfg.params is not None else None
        if out is None:
            raise InvalidInput(f"{stmt.id} needs --nu, --m and --lambda")
        out = {"statement": stmt.id, **out}
        return _render(cfg, "json", out), EXIT_OK if out["holds"] else EXIT_VIOLATED
    params = resolve_params(stmt, cfg.params)
    c = None
    if params is not None and stmt.lamb == "param":
        c = lamb_constant(params).c
    subject = cfg.subject.build(stmt.kind, c, params)
    rel_tol = cfg.rel_tol_nd if stmt.kind == "domain" else cfg.rel_tol_1d
    report = evaluate_statement(stmt, params, subject, cfg.p, cfg.r, rel_tol)
    fmt = cfg.fmt or "json"
    if fmt == "json":
        text = report.to_json() + "\n"
    elif fmt == "csv":
        text = _rows_csv(
            ("statement", "nu", "m", "lambda", "p", "r", "subject", "lhs", "rhs", "margin", "verdict"),
            [(report.statement, report.params["nu"], report.params["m"], report.params["lambda"],
              report.params["p"], report.params["r"], report.subject, report.lhs, report.rhs,
              report.margin, report.verdict)],
        )
    else:
        text = _text_pairs({k: v for k, v in report.to_dict().items() if k != "terms"})
    code = {"holds": EXIT_OK, "violated-beyond-tolerance": EXIT_VIOLATED}.get(report.verdict, EXIT_INVALID)
    if code == EXIT_INVALID:
        sys.stderr.write(json.dumps({"error": "inadmissible", "message": "; ".join(report.notes)}) + "\n")
    return text, code


def _cmd_sweep(cfg):
    stmt = get_statement(cfg.statement)
    grid = load_grid(cfg.extra["grid"])
    mc = cfg.extra["mc_samples"]
    if mc is None:
        mc = DEFAULT_MC_SAMPLES if stmt.kind == "domain" else 0
    rel_tol = cfg.rel_tol_nd if stmt.kind == "domain" else cfg.rel_tol_1d
    report = parameter_sweep(stmt, grid, seed=cfg.seed, mc_samples=mc, rel_tol=rel_tol,
                             workers=cfg.extra["workers"])
    code = EXIT_OK
    if any(r.verdict == "numerical-failure" or (r.mc and r.mc["failed"]) for r in report.rows):
        code = EXIT_NUMERICAL
    if report.failures:
        code = EXIT_VIOLATED
    fmt = cfg.fmt or "csv"
    if fmt == "csv":
        return report.to_csv(), code
    if fmt == "json":
        return _dump_json({**report.summary(), "rows": [asdict(r) for r in report.rows]}), code
    return _text_pairs(report.summary()), code


def _cmd_identities(cfg):
    reports = [verify_identity(w) for w in cfg.extra["which"]]
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_NUMERICAL
    fmt = cfg.fmt or "text"
    if fmt == "json":
        return _dump_json([r.to_dict() for r in reports]), code
    header = ("identity", "residual", "kind", "threshold", "points", "passed")
    rows = [(r.which, r.residual, r.kind, r.threshold, r.points, r.passed) for r in reports]
    if fmt == "csv":
        return _rows_csv(header, rows), code
    lines = [f"{'identity':<12}{'residual':>12}  {'threshold':>9}  result"]
    lines += [f"{r.which:<12}{r.residual:>12.3e}  {r.threshold:>9.0e}  {'pass' if r.passed else 'FAIL'}"
              for r in reports]
    return "\n".join(lines) + "\n", code


def _cmd_domains(cfg):
    domain = cfg.extra["domain"]
    area = layer_cake_integral(domain, lambda t: np.ones_like(t), rel_tol=cfg.rel_tol_nd)
    mc, mc_err = monte_carlo_integral(domain, lambda x: np.ones(len(x)), cfg.extra["samples"], cfg.seed)
    vol = domain.volume
    rel = abs(area.value - vol) / vol
    out = {
        "domain": domain.describe(),
        "dim": domain.dim,
        "inradius": domain.inradius,
        "volume": vol,
        "area_profile_integral": area.value,
        "relative_error": rel,
        "monte_carlo_volume": mc,
        "monte_carlo_std_error": mc_err,
        "passed": rel <= 10 * cfg.rel_tol_nd and abs(mc - vol) <= max(0.01 * vol, 3 * mc_err),
    }
    return _render(cfg, "json", out), EXIT_OK if out["passed"] else EXIT_NUMERICAL


COMMANDS = {
    "const": _cmd_const,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "identities": _cmd_identities,
    "domains": _cmd_domains,
}


def _error(exc, kind=None):
    sys.stderr.write(json.dumps({"error": kind or exc.kind, "message": str(exc)}) + "\n")


def run(argv=None):
    """Run the CLI on ``argv`` and return the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit:
            return EXIT_OK
    try:
        cfg = parse_config(argv)
        text, code = COMMANDS[cfg.subcommand](cfg)
    except NumericalFailure as exc:
        _error(exc)
        return EXIT_NUMERICAL
    except HardyLambError as exc:
        _error(exc)
        return EXIT_INVALID
    except OSError as exc:
        _error(exc, "io-error")
        return EXIT_INVALID
    _emit(cfg, text)
    return code


def main():
    sys.exit(run())
