"""Littlewood's expansion of log F_s and the probes built on it.

For s > 1 and x > 1, with a_m = (-s)^m / (s^m - 1), b_m = csch(2 pi^2 m / log s)
and L = log_s x,

    log F_s(x) = C_s + (log x)^2 / (2 log s) - (log x)/2
                 + sum_m a_m x^-m / m - sum_m (b_m / m) cos(2 pi m L),

    C_s = pi^2 / (6 log s) + (log s) / 12.

The a-series is evaluated after splitting a_m = (-1)^m (1 + 1/(s^m - 1)):
the (-1)^m part has a closed form and the remainder converges like (s x)^-m.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .special import DEFAULT_POLICY, EPS, DomainError, EvalResult, TruncationPolicy, csch
from .tameness import DiscretePointSet, ProbeVerdict

__all__ = [
    "LittlewoodCoeffs",
    "logF_littlewood",
    "d1_logF",
    "d2_logF",
    "d3_logF",
    "dm_logF",
    "sZ_probe",
    "zeros_d3",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LittlewoodCoeffs:
    s: float
    log_s: float = field(init=False)
    b: np.ndarray = field(init=False, repr=False)
    M_osc: int = field(init=False)

    def __post_init__(self):
        s = float(self.s)
        if not s > 1:
            raise DomainError(f"Littlewood coefficients need s > 1, got {s}")
        object.__setattr__(self, "s", s)
        ls = math.log(s)
        object.__setattr__(self, "log_s", ls)
        bs = []
        m = 1
        while True:
            bm = csch(2.0 * math.pi ** 2 * m / ls)
            bs.append(bm)
            if bm * m * m < 1e-16 or bm == 0.0:
                break
            m += 1
        b = np.array(bs)
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "M_osc", len(bs))

    def a(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        return (-1.0) ** m / (1.0 - np.exp(-m * self.log_s))

    def log_base(self, x: float) -> float:
        # the single place log_s x is formed
        return math.log(x) / self.log_s

    @property
    def constant(self) -> float:
        return math.pi ** 2 / (6.0 * self.log_s) + self.log_s / 12.0


def _coeffs(c) -> LittlewoodCoeffs:
    return c if isinstance(c, LittlewoodCoeffs) else LittlewoodCoeffs(c)


def _a_series(c: LittlewoodCoeffs, x: float, k: int, tol: float) -> tuple[float, int]:
    """sum_m a_m m^k x^-m for k in -1..2 (k = -1 means a_m x^-m / m)."""
    y = 1.0 / x
    if k == -1:
        closed = -math.log1p(y)
    elif k == 0:
        closed = -y / (1.0 + y)
    elif k == 1:
        closed = -y / (1.0 + y) ** 2
    else:
        closed = -y * (1.0 - y) / (1.0 + y) ** 3
    # remainder sum_m (-1)^m m^k / (s^m - 1) x^-m, ratio about 1/(s x)
    r = 1.0 / (c.s * x)
    big = max(1.0, abs(closed))
    mmax = 1
    while r ** mmax * mmax ** max(k, 0) * 2.0 / (1.0 - r) > tol * big and mmax < 100_000:
        mmax += 1
    m = np.arange(mmax, 0, -1, dtype=float)
    terms = (-1.0) ** m * m ** k * np.exp(-m * math.log(x)) / np.expm1(m * c.log_s)
    return closed + math.fsum(terms), mmax


def _osc(c: LittlewoodCoeffs, lsx: float, power: int, trig: str) -> float:
    m = np.arange(1, c.M_osc + 1, dtype=float)
    ang = TWO_PI * m * lsx
    f = np.cos(ang) if trig == "cos" else np.sin(ang)
    return math.fsum(c.b * m ** power * f)


def _check_x(x: float):
    if not x > 1:
        raise DomainError(f"Littlewood expansion requires x > 1, got {x}")


def logF_littlewood(c, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    c = _coeffs(c)
    x = float(x)
    _check_x(x)
    lx = math.log(x)
    aser, ma = _a_series(c, x, -1, policy.abs_tol)
    osc = _osc(c, c.log_base(x), -1, "cos")
    parts = [c.constant, lx * lx / (2.0 * c.log_s), -0.5 * lx, aser, -osc]
    value = math.fsum(parts)
    err = 8 * EPS * sum(abs(p) for p in parts) + policy.abs_tol
    return EvalResult(value, err, ma + c.M_osc, True)


def dm_logF(c, x: float, m: int, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """(x d/dx)^m log F_s from the Littlewood expansion, m in 0..3."""
    if m == 0:
        return logF_littlewood(c, x, policy)
    c = _coeffs(c)
    x = float(x)
    _check_x(x)
    ls = c.log_s
    lsx = c.log_base(x)
    k = m - 1
    aser, ma = _a_series(c, x, k, policy.abs_tol)
    w = TWO_PI / ls
    if m == 1:
        parts = [lsx, -0.5, -aser, w * _osc(c, lsx, 0, "sin")]
    elif m == 2:
        parts = [1.0 / ls, aser, w * w * _osc(c, lsx, 1, "cos")]
    elif m == 3:
        parts = [-aser, -w ** 3 * _osc(c, lsx, 2, "sin")]
    else:
        raise ValueError("m must be in 0..3")
    value = math.fsum(parts)
    err = 8 * EPS * sum(abs(p) for p in parts) + policy.abs_tol
    return EvalResult(value, err, ma + c.M_osc, True)


def d1_logF(c, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    return dm_logF(c, x, 1, policy)


def d2_logF(c, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    return dm_logF(c, x, 2, policy)


def d3_logF(c, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    return dm_logF(c, x, 3, policy)


def default_sz_schedule() -> np.ndarray:
    # deliberately incommensurate with every s: 10^(3 + 0.37 j)
    return 10.0 ** (3.0 + 0.37 * np.arange(24))


def sZ_probe(c, y: float, t_schedule=None, conv_tol: float = 1e-3,
             osc_tol: float = 1e-2) -> ProbeVerdict:
    """Probe whether y lies in s^Z via lim_t [d log F(y t) - d log F(t)].

    The limit exists (and equals log_s y, an integer) exactly when y is in
    s^Z.  On a finite schedule: ``member`` if the differences settle within
    ``conv_tol`` of an integer; ``non-member`` if they oscillate by more
    than ``osc_tol`` or stay bounded away from every integer; otherwise
    inconclusive.
    """
    c = _coeffs(c)
    y = float(y)
    if not y > 0:
        raise DomainError("y must be positive")
    t = default_sz_schedule() if t_schedule is None else np.asarray(t_schedule, dtype=float)
    if t.size < 8:
        raise ValueError("schedule needs at least 8 points")
    t = t[(t > 1) & (y * t > 1)]
    diffs = [d1_logF(c, y * ti).value - d1_logF(c, ti).value for ti in t]
    trace = list(zip(t.tolist(), diffs))
    tail = np.array(diffs[len(diffs) // 2:])
    spread = float(tail.max() - tail.min())
    last = float(tail[-1])
    dist = np.abs(tail - np.round(tail))
    info = {"spread": spread, "conv_tol": conv_tol, "osc_tol": osc_tol,
            "thresholds": "artifact policy: finite schedule stands in for t -> oo"}
    if spread < conv_tol:
        k = int(round(last))
        if abs(last - k) < conv_tol:
            info.update(member=True, exponent=k)
        else:
            info.update(member=False, exponent=None)
        return ProbeVerdict("converged", last, trace, info)
    if spread > osc_tol:
        info.update(member=False, exponent=None)
        return ProbeVerdict("oscillating", None, trace, info)
    if dist.min() > conv_tol:
        info.update(member=False, exponent=None)
        return ProbeVerdict("oscillating", None, trace, info)
    info.update(member=None, exponent=None)
    return ProbeVerdict("inconclusive", None, trace, info)


def _bisect(f, a: float, b: float, fa: float, rel: float = 1e-12) -> float:
    # bisection on log scale
    la, lb = math.log(a), math.log(b)
    while lb - la > rel:
        lm = 0.5 * (la + lb)
        fm = f(math.exp(lm))
        if fm == 0.0:
            return math.exp(lm)
        if (fm > 0) == (fa > 0):
            la, fa = lm, fm
        else:
            lb = lm
    return math.exp(0.5 * (la + lb))


def _sign_change_cells(c: LittlewoodCoeffs, lo: float, hi: float, per_unit: int):
    span = (math.log(hi) - math.log(lo)) / c.log_s
    n = max(2, int(math.ceil(span * per_unit)) + 1)
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), n))
    vals = np.array([d3_logF(c, g).value for g in grid])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return grid, vals, idx


def zeros_d3(c, x_lo: float, x_hi: float, per_unit: int = 64) -> DiscretePointSet:
    """Zeros of c -> d3 log F_s(sqrt(c)), with sqrt(c) in (x_lo, x_hi).

    x_lo and x_hi bound the argument of d3 log F_s; each zero z found there is
    returned squared, so consecutive returned points have ratio tending to s.
    The scan uses ``per_unit`` points per unit of log_s x; if doubling the
    grid changes the sign-change count the refined scan is used and a
    RuntimeWarning is issued.
    """
    c = _coeffs(c)
    x_lo, x_hi = float(x_lo), float(x_hi)
    if x_hi <= x_lo:
        return DiscretePointSet(())
    if not x_lo >= 1:
        raise DomainError("zeros_d3 requires 1 <= x_lo")
    lo = max(x_lo, 1.0 + 1e-9)
    grid, vals, idx = _sign_change_cells(c, lo, x_hi, per_unit)
    grid2, vals2, idx2 = _sign_change_cells(c, lo, x_hi, 2 * per_unit)
    if idx2.size != idx.size:
        warnings.warn(
            f"zeros_d3: grid refinement changed sign-change count {idx.size} -> {idx2.size}",
            RuntimeWarning, stacklevel=2)
        grid, vals, idx = grid2, vals2, idx2
    f = lambda v: d3_logF(c, v).value  # noqa: E731
    roots = [_bisect(f, grid[i], grid[i + 1], vals[i]) for i in idx]
    return DiscretePointSet(tuple(r * r for r in roots))
