"""Batch command line front end.

    canonprod eval TARGET --s S --grid lo:hi:count[:log|linear|auto]
    canonprod verify IDENTITY --s S --grid ...
    canonprod zeros d3logF --s S --grid lo:hi:auto
    canonprod probe {sz,power,stirling} ...
    canonprod assouad --input points.csv | --family {arithmetic,geometric}
    canonprod report CONFIG.json

Tables go to --out (default stdout) as CSV or JSON.  Exit status: 0 on
success, 2 when a verification has residuals above tolerance, 1 on usage or
domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import __version__
from . import decomposition as dec
from . import laplace as lap
from . import littlewood as lw
from . import products as prod
from . import special as sp
from . import suites
from . import tameness as tm

EXIT_OK, EXIT_USAGE, EXIT_RESIDUAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int | None  # None means "auto"
    spacing: str

    def points(self) -> np.ndarray:
        if self.count is None:
            raise UsageError("this command needs an explicit grid count")
        if self.count == 1:
            return np.array([self.lo])
        spacing = self.spacing
        if spacing == "auto":
            spacing = "log" if self.lo > 0 and self.hi / self.lo >= 100 else "linear"
        if spacing == "log":
            if self.lo <= 0:
                raise UsageError("log spacing needs lo > 0")
            pts = np.exp(np.linspace(math.log(self.lo), math.log(self.hi), self.count))
            pts[0], pts[-1] = self.lo, self.hi
            return pts
        return np.linspace(self.lo, self.hi, self.count)


def parse_grid(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise UsageError(f"grid must be lo:hi:count[:log|linear|auto], got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"bad grid bounds in {text!r}") from None
    spacing = parts[3] if len(parts) == 4 else "auto"
    if parts[2] == "auto":
        count, spacing = None, "auto"
    else:
        try:
            count = int(parts[2])
        except ValueError:
            raise UsageError(f"bad grid count in {text!r}") from None
        if count < 1:
            raise UsageError("grid count must be >= 1")
    if spacing not in ("log", "linear", "auto"):
        raise UsageError(f"unknown spacing {spacing!r}")
    if not (lo < hi or (lo == hi and count == 1)):
        raise UsageError("grid needs lo < hi (or lo == hi with count 1)")
    return Grid(lo, hi, count, spacing)


# ---------------------------------------------------------------- targets

def _policy(args) -> sp.TruncationPolicy:
    kw = {}
    if args.max_terms is not None:
        kw["max_terms"] = args.max_terms
    return sp.TruncationPolicy(**kw)


def _res(r) -> tuple[float, float]:
    if isinstance(r, sp.EvalResult):
        return r.value, r.error_bound
    return float(r), math.nan


EVAL_TARGETS: dict[str, Callable] = {
    "W": lambda s, x, pol: prod.eval_W(s, x, pol),
    "logW": lambda s, x, pol: prod.log_W(s, x, pol),
    "logderivW": lambda s, x, pol: prod.logderiv_W(s, x, pol),
    "d2logW": lambda s, x, pol: prod.d2_logW_analytic(s, x, pol),
    "d3logW": lambda s, x, pol: prod.d3_logW_analytic(s, x, pol),
    "F": lambda s, x, pol: prod.eval_F(s, x, pol),
    "logF": lambda s, x, pol: prod.log_F(s, x, pol),
    "logderivF": lambda s, x, pol: prod.logderiv_F(s, x, pol),
    "logF_littlewood": lambda s, x, pol: lw.logF_littlewood(s, x, pol),
    "d1logF": lambda s, x, pol: lw.d1_logF(s, x, pol),
    "d2logF": lambda s, x, pol: lw.d2_logF(s, x, pol),
    "d3logF": lambda s, x, pol: lw.d3_logF(s, x, pol),
    "phi": lambda s, x, pol: dec.phi(s, x, pol),
    "omega": lambda s, x, pol: dec.omega(s, x, pol),
    "maincalc": lambda s, x, pol: dec.maincalc_rhs(s, x, pol),
    "poisson": lambda s, x, pol: dec.poisson_middle(s, x, pol),
    "Phi": lambda s, x, pol: lap.Phi(s, x),
    "logW_decomposed": lambda s, x, pol: lap.logW_decomposed(s, x),
    "zeta": lambda s, x, pol: sp.zeta_pos(x, pol),
    "zeta_neg": lambda s, x, pol: sp.zeta_neg(x),
    "log_gamma": lambda s, x, pol: sp.log_gamma(x),
}

# identity name -> (lhs, rhs, default tolerance rule)
VERIFY_TARGETS: dict[str, tuple[Callable, Callable, Callable]] = {
    "maincalc": (
        lambda s, x, pol: prod.logderiv_W(s, x, pol).value,
        lambda s, x, pol: dec.maincalc_rhs(s, x, pol).value,
        lambda lhs: max(1e-7, 1e-6 * abs(lhs)),
    ),
    "poisson": (
        lambda s, x, pol: prod.logderiv_W(s, x, pol).value,
        lambda s, x, pol: dec.poisson_middle(s, x, pol).value,
        lambda lhs: max(1e-7, 1e-6 * abs(lhs)),
    ),
    "littlewood": (
        lambda s, x, pol: prod.log_F(s, x, pol).value,
        lambda s, x, pol: lw.logF_littlewood(s, x, pol).value,
        lambda lhs: 1e-8 * max(1.0, abs(lhs)),
    ),
    "laplace": (
        lambda s, x, pol: prod.log_W(s, x, pol).value,
        lambda s, x, pol: lap.logW_decomposed(s, x).value,
        lambda lhs: 1e-5,
    ),
    "phi_forms": (
        lambda s, x, pol: dec.phi_first_form(s, x),
        lambda s, x, pol: dec.phi(s, x, pol).value,
        lambda lhs: 1e-8 * abs(lhs),
    ),
    "omega_forms": (
        lambda s, x, pol: dec.omega_geometric(s, x),
        lambda s, x, pol: dec.omega(s, x, pol).value,
        lambda lhs: 1e-12,
    ),
}


# ---------------------------------------------------------------- output

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def _json_safe(v):
    if isinstance(v, (np.floating,)):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def emit(args, columns: Sequence[str], rows: list, meta: dict) -> None:
    if args.format == "json":
        doc = {
            "meta": _json_safe({"version": __version__, "command": args.command,
                                "job": _echo(args), **meta}),
            "data": [_json_safe(dict(zip(columns, r))) for r in rows],
        }
        text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _echo(args) -> dict:
    keep = ("target", "s", "grid", "tol", "max_terms", "format", "seed", "y", "x",
            "family", "input", "config")
    return {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}


# ---------------------------------------------------------------- commands

def _need_s(args) -> float:
    if args.s is None:
        raise UsageError("--s is required for this command")
    return args.s


def cmd_eval(args) -> int:
    if args.target not in EVAL_TARGETS:
        raise UsageError(f"unknown eval target {args.target!r}; known: {', '.join(EVAL_TARGETS)}")
    fn = EVAL_TARGETS[args.target]
    s = args.s if args.target in ("zeta", "zeta_neg", "log_gamma") else _need_s(args)
    pol = _policy(args)
    rows = []
    for x in parse_grid(args.grid).points():
        v, e = _res(fn(s, float(x), pol))
        rows.append((float(x), v, e))
    emit(args, ["x", "value", "error_bound"], rows, {})
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.target not in VERIFY_TARGETS:
        raise UsageError(f"unknown identity {args.target!r}; known: {', '.join(VERIFY_TARGETS)}")
    lhs_fn, rhs_fn, tol_fn = VERIFY_TARGETS[args.target]
    s = _need_s(args)
    pol = _policy(args)
    rows, failures = [], []
    for x in parse_grid(args.grid).points():
        x = float(x)
        lhs, rhs = lhs_fn(s, x, pol), rhs_fn(s, x, pol)
        res = abs(lhs - rhs)
        tol = args.tol if args.tol is not None else tol_fn(lhs)
        ok = res <= tol
        rows.append((x, lhs, rhs, res, ok))
        if not ok:
            failures.append({"x": x, "residual": res, "tol": tol})
    emit(args, ["x", "lhs", "rhs", "residual", "ok"], rows,
         {"max_residual": max((r[3] for r in rows), default=0.0), "failures": failures})
    if failures:
        for f in failures:
            print(f"FAIL x={f['x']!r} residual={f['residual']!r} tol={f['tol']!r}", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_zeros(args) -> int:
    if args.target != "d3logF":
        raise UsageError("zeros supports the target d3logF")
    s = _need_s(args)
    g = parse_grid(args.grid)
    per_unit = 64 if g.count is None else max(2, g.count)
    Z = lw.zeros_d3(s, g.lo, g.hi, per_unit=per_unit)
    meta = {"count": len(Z)}
    if len(Z) >= 2:
        meta["ratio_extract"] = tm.ratio_extract(Z, min(5, len(Z) - 1))
    rows = [(c,) for c in Z.points]
    emit(args, ["c"], rows, meta)
    if args.format == "csv":
        summary = meta.get("ratio_extract")
        print(f"zeros={len(Z)} ratio_extract={summary!r}", file=sys.stderr)
    return EXIT_OK


PROBE_FUNCS = {
    "d2logW": lambda s: (lambda x: prod.d2_logW_analytic(s, x).value),
    "d3logW": lambda s: (lambda x: prod.d3_logW_analytic(s, x).value),
    "logderivW": lambda s: (lambda x: prod.logderiv_W(s, x).value),
    "identity": lambda s: (lambda x: x),
}


def cmd_probe(args) -> int:
    kind = args.target
    if kind == "sz":
        s = _need_s(args)
        if args.y is None:
            raise UsageError("probe sz needs --y")
        v = lw.sZ_probe(s, args.y)
    elif kind == "power":
        s = args.s if args.s is not None else 1.0
        if args.y is None:
            raise UsageError("probe power needs --y")
        fn_name = args.function or "d2logW"
        if fn_name not in PROBE_FUNCS:
            raise UsageError(f"unknown probe function {fn_name!r}")
        v = tm.power_probe(PROBE_FUNCS[fn_name](s), args.y)
    elif kind == "stirling":
        if args.x is None:
            raise UsageError("probe stirling needs --x")
        v = tm.stirling_exp_probe(args.x)
    else:
        raise UsageError(f"unknown probe {kind!r}; known: sz, power, stirling")
    meta = {"kind": v.kind, "value": v.value, "info": {k: v.info[k] for k in sorted(v.info)}}
    emit(args, ["t", "sample"], [tuple(r) for r in v.trace], meta)
    print(f"verdict={v.kind} value={v.value!r}", file=sys.stderr)
    return EXIT_OK


def cmd_assouad(args) -> int:
    if args.input:
        X = tm.DiscretePointSet.from_csv(args.input)
    elif args.family == "arithmetic":
        X = tm.DiscretePointSet(tuple(float(k) for k in range(1, 1001)))
    elif args.family == "geometric":
        X = tm.DiscretePointSet(tuple(2.0 ** k for k in range(31)))
    else:
        raise UsageError("assouad needs --input or --family")
    e = tm.assouad_zero_estimate(X)
    meta = {"estimate": e.value, "argmax": list(e.argmax), "count": e.count,
            "r_ratios": list(e.r_ratios), "points": len(X)}
    emit(args, ["R"], [(R,) for R in e.R_grid], meta)
    print(f"estimate={e.value!r}", file=sys.stderr)
    return EXIT_OK


def load_report_config(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    names = cfg.get("suites", []) if isinstance(cfg, dict) else cfg
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise UsageError("config must be a JSON list of suite names or {\"suites\": [...]}")
    unknown = [n for n in names if n not in suites.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}")
    return names


def cmd_report(args) -> int:
    if args.config:
        names = load_report_config(args.config)
    else:
        names = list(suites.DEFAULT_SUITES)
    summary = [suites.run_suite(n).summary() for n in names]
    text = json.dumps(_json_safe(summary), indent=2) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK if all(r["pass"] for r in summary) else EXIT_RESIDUAL


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "zeros": cmd_zeros,
    "probe": cmd_probe,
    "assouad": cmd_assouad,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", type=float, help="shape parameter s")
    common.add_argument("--grid", default="1:10:10", help="lo:hi:count[:log|linear|auto]")
    common.add_argument("--tol", type=float, help="verification tolerance override")
    common.add_argument("--max-terms", dest="max_terms", type=int, help="series term budget")
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, help="accepted for reproducibility bookkeeping; unused")

    p = _Parser(prog="canonprod", description="Canonical products: evaluation and checks")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("eval", "verify", "zeros"):
        sp_ = sub.add_parser(name, parents=[common])
        sp_.add_argument("target")
    pr = sub.add_parser("probe", parents=[common])
    pr.add_argument("target", help="sz, power or stirling")
    pr.add_argument("--y", type=float)
    pr.add_argument("--x", type=float)
    pr.add_argument("--function", help="power probe input (d2logW, d3logW, logderivW, identity)")
    asp = sub.add_parser("assouad", parents=[common])
    asp.add_argument("--input", help="one-column CSV of points")
    asp.add_argument("--family", choices=("arithmetic", "geometric"))
    rp = sub.add_parser("report", parents=[common])
    rp.add_argument("config", nargs="?", help="JSON list of suite names")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, sp.DomainError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"canonprod: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
