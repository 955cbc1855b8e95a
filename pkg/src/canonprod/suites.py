"""Verification suites: each compares an identity's two sides on a fixed grid.

Every suite returns a SuiteResult with one row per case.  The CLI ``report``
command and the acceptance tests run the same code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import decomposition as dec
from . import laplace as lap
from . import littlewood as lw
from . import products as prod
from . import special as sp
from . import tameness as tm

__all__ = ["Case", "SuiteResult", "SUITES", "run_suite", "DEFAULT_SUITES"]


@dataclass
class Case:
    label: str
    value: float
    reference: float
    residual: float
    tol: float
    ok: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {"case": self.label, "value": self.value, "reference": self.reference,
                "residual": self.residual, "tol": self.tol, "ok": bool(self.ok),
                "note": self.note}


@dataclass
class SuiteResult:
    suite: str
    cases: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def max_residual(self) -> float:
        vals = [c.residual for c in self.cases if math.isfinite(c.residual)]
        return max(vals) if vals else math.nan

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c.ok]

    def summary(self) -> dict:
        return {"suite": self.suite, "cases": len(self.cases),
                "max_residual": self.max_residual, "pass": self.passed,
                "failures": [c.label for c in self.failures]}


def _close(label, value, ref, tol, note=""):
    res = abs(value - ref)
    return Case(label, float(value), float(ref), float(res), float(tol), bool(res <= tol), note)


def _logspace(lo, hi, n):
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


# ---------------------------------------------------------------- suites

def suite_maincalc() -> SuiteResult:
    out = SuiteResult("maincalc")
    for s in (1.25, 1.5, 3.0, 5.0, 6.0, 10.0):
        for x in _logspace(1.0, 1e3, 12):
            lhs = prod.logderiv_W(s, x).value
            rhs = dec.maincalc_rhs(s, x).value
            out.cases.append(_close(f"s={s:g} x={x:.6g}", rhs, lhs, max(1e-7, 1e-6 * abs(lhs))))
    return out


def suite_littlewood() -> SuiteResult:
    out = SuiteResult("littlewood")
    for s in (1.5, 2.0, 3.0, 10.0):
        c = lw.LittlewoodCoeffs(s)
        for x in _logspace(1.01, 1e6, 40):
            ref = prod.log_F(s, x).value
            val = lw.logF_littlewood(c, x).value
            out.cases.append(_close(f"logF s={s:g} x={x:.6g}", val, ref, 1e-8 * max(1.0, abs(ref))))
            if x < 2.0:
                continue
            for m in (1, 2, 3):
                fd = prod.d_m(lambda v: prod.log_F(s, v).value, m, x, accuracy=8)
                val = lw.dm_logF(c, x, m).value
                out.cases.append(_close(f"d{m} s={s:g} x={x:.6g}", val, fd, 1e-6 * max(1.0, abs(fd))))
    return out


def suite_phi_derivative() -> SuiteResult:
    out = SuiteResult("phi_derivative")
    for s in (1.25, 1.5, 1.75):
        for x in (2.0, 10.0, 50.0):
            h = 1e-4 * x
            d = (lap.Phi(s, x + h) - lap.Phi(s, x - h)) / (2.0 * h)
            ph = dec.phi(s, x).value
            out.cases.append(_close(f"s={s:g} x={x:g}", d, ph, max(1e-5, 1e-4 * abs(ph))))
    return out


def suite_logW_reconstruction() -> SuiteResult:
    out = SuiteResult("logW_reconstruction")
    for s in (1.25, 1.5, 1.75):
        for x in _logspace(1.0, 100.0, 8):
            ref = prod.log_W(s, x).value
            val = lap.logW_decomposed(s, x).value
            out.cases.append(_close(f"s={s:g} x={x:.6g}", val, ref, 1e-5))
    return out


def suite_asympt_coeff() -> SuiteResult:
    out = SuiteResult("asympt_coeff")
    for s in (1.5, 2.5, 3.0):
        for k in range(1, 21):
            a, b = dec.asympt_coeff(s, k)
            if a == 0.0 and b == 0.0:
                out.cases.append(Case(f"s={s:g} k={k}", 0.0, 0.0, 0.0, 0.0, True, "both zero"))
                continue
            rel = abs(a - b) / max(abs(a), abs(b))
            out.cases.append(Case(f"s={s:g} k={k}", b, a, rel, 1e-10, rel <= 1e-10, "relative"))
    for s in (2.0, 4.0, 6.0):
        for k in range(1, 21):
            a, b = dec.asympt_coeff(s, k)
            ok = a == 0.0 and b == 0.0
            out.cases.append(Case(f"s={s:g} k={k}", max(abs(a), abs(b)), 0.0,
                                  max(abs(a), abs(b)), 0.0, ok, "exact zeros"))
    return out


def suite_zero_ratio() -> SuiteResult:
    out = SuiteResult("zero_ratio")
    for s in (2.0, 3.0, 5.0):
        Z = lw.zeros_d3(s, 1.0, s ** 12)
        if len(Z) < 2:
            out.cases.append(Case(f"s={s:g}", math.nan, s, math.inf, 0.03 * s, False,
                                  f"{len(Z)} zeros on (1, s^12)"))
            continue
        r = tm.ratio_extract(Z, min(5, len(Z) - 1))
        out.cases.append(_close(f"s={s:g}", r, s, 0.03 * s, f"{len(Z)} zeros"))
    return out


def suite_omega_density() -> SuiteResult:
    out = SuiteResult("omega_density")
    for s in (3.0, 5.0):
        actual, model = tm.omega_zero_density(s, 10.0, 200.0)
        out.cases.append(Case(f"s={s:g}", actual, model, max(0, model - actual), 1,
                              actual >= model - 1, "count_actual >= count_model - 1"))
    return out


def suite_probes() -> SuiteResult:
    out = SuiteResult("probes")
    v = tm.stirling_exp_probe(1.0)
    val = v.value if v.value is not None else math.nan
    out.cases.append(_close("stirling x=1", val, math.e, 1e-3, v.kind))
    v = tm.power_probe(lambda x: prod.d2_logW_analytic(3.0, x).value, 2.0)
    val = v.value if v.value is not None else math.nan
    out.cases.append(_close("power d2logW s=3", val, 1.0 / 3.0, 1e-2, v.kind))
    for y, member, k in ((8.0, True, 3), (3.0, False, None)):
        v = lw.sZ_probe(2.0, y)
        got_member = v.info.get("member")
        ok = got_member == member and (not member or v.info.get("exponent") == k)
        out.cases.append(Case(f"sZ s=2 y={y:g}", float(bool(got_member)), float(member),
                              0.0 if ok else 1.0, 0.0, ok, v.kind))
    return out


def suite_assouad() -> SuiteResult:
    out = SuiteResult("assouad")
    arith = tm.DiscretePointSet(tuple(float(k) for k in range(1, 1001)))
    e = tm.assouad_zero_estimate(arith)
    out.cases.append(Case("arithmetic 1..1000", e.value, 0.9, max(0.0, 0.9 - e.value), 0.0,
                          e.value >= 0.9, ">= 0.9"))
    geo = tm.DiscretePointSet(tuple(2.0 ** k for k in range(31)))
    e = tm.assouad_zero_estimate(geo)
    out.cases.append(Case("geometric 2^k", e.value, 0.2, max(0.0, e.value - 0.2), 0.0,
                          e.value <= 0.2, f"<= 0.2; sup at (x, R, r) = {e.argmax}, N = {e.count}"))
    return out


def suite_fast_sequence() -> SuiteResult:
    out = SuiteResult("fast_sequence")
    a = tm.DiscretePointSet(tuple(100.0 ** n for n in range(1, 9)))
    rep = tm.fast_sequence_check(a, 0.1, range(1, 7))
    bad = {k for k, _ in rep.violations}
    for row in rep.rows:
        k = row["k"]
        out.cases.append(Case(f"k={k}", row["f_max"], (1.1) * k, 0.0 if k not in bad else 1.0,
                              0.0, k not in bad, f"thresholds {rep.thresholds}"))
    return out


def suite_golden() -> SuiteResult:
    out = SuiteResult("golden")
    out.cases.append(_close("zeta(2)", sp.zeta_pos(2.0).value, math.pi ** 2 / 6, 1e-10))
    out.cases.append(_close("zeta(4)", sp.zeta_pos(4.0).value, math.pi ** 4 / 90, 1e-10))
    out.cases.append(_close("zeta(-1)", sp.zeta_neg(1.0), -1.0 / 12, 1e-10))
    out.cases.append(_close("zeta(-3)", sp.zeta_neg(3.0), 1.0 / 120, 1e-10))
    for x in (0.5, 1.0, 2.5, 10.0, 100.0):
        r = sp.log_gamma(x + 1.0) - sp.log_gamma(x) - math.log(x)
        out.cases.append(_close(f"gamma recurrence x={x:g}", r, 0.0, 1e-12))
    w2 = prod.eval_W(2.0, 1.0).value
    ref = math.sinh(math.pi) / math.pi
    out.cases.append(Case("W_2(1)", w2, ref, abs(w2 / ref - 1), 1e-9, abs(w2 / ref - 1) <= 1e-9, "relative"))
    w1 = prod.eval_W(1.0, 1.0).value
    ref = math.exp(-sp.euler_gamma())
    out.cases.append(Case("W_1(1)", w1, ref, abs(w1 / ref - 1), 1e-8, abs(w1 / ref - 1) <= 1e-8, "relative"))
    return out


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "maincalc": suite_maincalc,
    "littlewood": suite_littlewood,
    "phi_derivative": suite_phi_derivative,
    "logW_reconstruction": suite_logW_reconstruction,
    "asympt_coeff": suite_asympt_coeff,
    "zero_ratio": suite_zero_ratio,
    "omega_density": suite_omega_density,
    "probes": suite_probes,
    "assouad": suite_assouad,
    "fast_sequence": suite_fast_sequence,
    "golden": suite_golden,
}

DEFAULT_SUITES = tuple(SUITES)


def run_suite(name: str) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}") from None
    return fn()
