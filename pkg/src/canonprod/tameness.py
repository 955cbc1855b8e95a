"""Numeric signatures of definability: limit probes, ratio extraction,
Assouad-dimension estimates, zero-density counts, and the fast-sequence check.

Every probe works on a finite schedule, so verdicts are estimates governed by
explicit thresholds (1e-3 for convergence, 1e-1 for oscillation by default).
"""

from __future__ import annotations

import csv
import math
import warnings
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .special import DomainError, log_gamma

__all__ = [
    "DegenerateError",
    "DiscretePointSet",
    "ProbeVerdict",
    "AssouadEstimate",
    "assouad_zero_estimate",
    "default_R_grid",
    "covering_number",
    "power_probe",
    "log_probe",
    "stirling_exp_probe",
    "ratio_extract",
    "omega_zero_density",
    "FastSequenceReport",
    "fast_sequence_check",
]

CONV_TOL = 1e-3
OSC_TOL = 1e-1


class DegenerateError(ValueError):
    """Not enough information in the input to produce an estimate."""


@dataclass(frozen=True)
class DiscretePointSet:
    points: tuple[float, ...] = ()

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        for p in pts:
            if not math.isfinite(p):
                raise ValueError("points must be finite")
        for a, b in zip(pts, pts[1:]):
            if not a < b:
                raise ValueError("points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_unsorted(cls, values: Iterable[float]) -> "DiscretePointSet":
        return cls(tuple(sorted(set(float(v) for v in values))))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float)

    def scaled(self, c: float) -> "DiscretePointSet":
        if not c > 0:
            raise ValueError("scale must be positive")
        return DiscretePointSet(tuple(c * p for p in self.points))

    def to_csv(self, path, header: str = "x") -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([header])
            for p in self.points:
                w.writerow([repr(p)])

    @classmethod
    def from_csv(cls, path) -> "DiscretePointSet":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        return cls(tuple(float(r[0]) for r in rows[1:] if r))


@dataclass(frozen=True)
class ProbeVerdict:
    kind: str
    value: Optional[float]
    trace: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("converged", "diverged", "oscillating", "inconclusive"):
            raise ValueError(f"unknown verdict kind {self.kind!r}")
        if (self.value is not None) != (self.kind == "converged"):
            raise ValueError("value is present exactly when the verdict is converged")


# ---------------------------------------------------------------- Assouad

@dataclass(frozen=True)
class AssouadEstimate:
    value: float
    R_grid: tuple[float, ...]
    r_ratios: tuple[float, ...]
    argmax: tuple[float, float, float]  # (x, R, r) attaining the sup
    count: int


def default_R_grid(X: DiscretePointSet, levels: Optional[int] = None) -> tuple[float, ...]:
    """R = 2 span / 2^j for j = 0, 1, ... down to the smallest gap.

    The first radius exceeds the span so that the open window around an
    endpoint still reaches the other end.
    """
    pts = X.as_array()
    span = float(pts[-1] - pts[0])
    if levels is None:
        gap = float(np.min(np.diff(pts)))
        levels = max(1, int(math.ceil(math.log2(span) - math.log2(gap))) + 2)
        levels = min(levels, 60)
    return tuple(2.0 * span / 2.0 ** j for j in range(levels))


def covering_number(X: DiscretePointSet, x: float, R: float, r: float) -> int:
    """Minimal number of closed intervals of length 2r covering X ∩ (x-R, x+R).

    Greedy left-to-right placement is optimal in one dimension.
    """
    pts = X.points
    i = bisect_left(pts, x - R)
    while i < len(pts) and pts[i] <= x - R:
        i += 1
    count = 0
    while i < len(pts) and pts[i] < x + R:
        count += 1
        right = pts[i] + 2.0 * r
        while i < len(pts) and pts[i] <= right:
            i += 1
    return count


def _greedy_counts(pts: np.ndarray, R: float, r: float) -> np.ndarray:
    # vectorised covering_number over every centre x in pts
    lo = np.searchsorted(pts, pts - R, side="right")
    hi = np.searchsorted(pts, pts + R, side="left")
    cur = lo.copy()
    counts = np.zeros(pts.size, dtype=np.int64)
    active = cur < hi
    while active.any():
        counts += active
        nxt = np.searchsorted(pts, pts[np.minimum(cur, pts.size - 1)] + 2.0 * r, side="right")
        cur = np.where(active, nxt, cur)
        active = cur < hi
    return counts


def assouad_zero_estimate(
    X: DiscretePointSet,
    R_grid: Optional[Sequence[float]] = None,
    r_ratios: Sequence[float] = (4.0, 16.0, 64.0, 256.0),
) -> AssouadEstimate:
    """sup over x in X and (R, r) on the grid of log N(x, R, r) / log(R/r)."""
    if len(X) < 2:
        raise DegenerateError("need at least two points")
    if R_grid is None:
        R_grid = default_R_grid(X)
    R_grid = tuple(float(R) for R in R_grid)
    r_ratios = tuple(float(q) for q in r_ratios)
    if any(q <= 1 for q in r_ratios) or any(R <= 0 for R in R_grid):
        raise ValueError("need R > r > 0")
    pts = X.as_array()
    best, arg, best_n = -1.0, None, 0
    nontrivial = False
    for R in R_grid:
        lo = np.searchsorted(pts, pts - R, side="right")
        hi = np.searchsorted(pts, pts + R, side="left")
        if np.any(hi - lo > 1):
            nontrivial = True
        for q in r_ratios:
            r = R / q
            counts = _greedy_counts(pts, R, r)
            i = int(np.argmax(counts))
            est = math.log(counts[i]) / math.log(q)
            if est > best:
                best, arg, best_n = est, (float(pts[i]), R, r), int(counts[i])
    if not nontrivial:
        raise DegenerateError("every window contains only its centre")
    return AssouadEstimate(min(1.0, max(0.0, best)), R_grid, r_ratios, arg, best_n)


# ---------------------------------------------------------------- limit probes

def _classify(samples: np.ndarray, scale: float, conv_tol: float, osc_tol: float):
    tail = samples[-4:]
    spread = float(tail.max() - tail.min()) / scale
    if not np.all(np.isfinite(tail)):
        return "diverged", spread
    if spread < conv_tol:
        return "converged", spread
    if spread <= osc_tol:
        return "inconclusive", spread
    return "oscillating", spread


def _schedule(t_schedule, default) -> np.ndarray:
    t = np.asarray(default if t_schedule is None else t_schedule, dtype=float)
    if t.size < 4:
        raise ValueError("schedule needs at least 4 points")
    return t


def power_probe(
    f: Callable[[float], float],
    y: float,
    t_schedule=None,
    conv_tol: float = CONV_TOL,
    osc_tol: float = OSC_TOL,
) -> ProbeVerdict:
    """Watch f(y t)/f(t); a settled ratio gives the exponent log(ratio)/log y."""
    y = float(y)
    if not y > 0 or y == 1:
        raise DomainError("y must be positive and different from 1")
    t = _schedule(t_schedule, 10.0 ** (1.0 + 0.5 * np.arange(11)))
    num = np.array([float(f(y * ti)) for ti in t])
    den = np.array([float(f(ti)) for ti in t])
    if np.any(num <= 0) or np.any(den <= 0):
        raise DomainError("f must be positive on the schedule")
    ratios = num / den
    alphas = np.log(ratios) / math.log(y)
    scale = max(abs(float(np.mean(ratios[-4:]))), 1e-300)
    kind, spread = _classify(ratios, scale, conv_tol, osc_tol)
    info = {"spread": spread, "ratio": float(ratios[-1]), "exponent": float(alphas[-1])}
    value = float(alphas[-1]) if kind == "converged" else None
    return ProbeVerdict(kind, value, list(zip(t.tolist(), alphas.tolist())), info)


def log_probe(
    f: Callable[[float], float],
    m: int,
    y: float,
    t_schedule=None,
    conv_tol: float = CONV_TOL,
    osc_tol: float = OSC_TOL,
    cond_max: float = 1e12,
) -> ProbeVerdict:
    """Detect log x inside f = p + c x^m log x + lower order.

    Fits f(x)/x^m on [log x, 1, 1/x, ..., 1/x^m], forms g = (f - p)/(c x^m)
    and watches g(y t) - g(t), which tends to log y.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be a positive integer")
    y = float(y)
    if not y > 0:
        raise DomainError("y must be positive")
    t = _schedule(t_schedule, 10.0 ** (1.0 + 0.5 * np.arange(11)))
    xs = np.unique(np.concatenate((t, y * t)))
    fx = {float(v): float(f(v)) for v in xs}
    A = np.column_stack([np.log(xs)] + [xs ** -j for j in range(m + 1)])
    if A.shape[0] < A.shape[1]:
        raise DegenerateError(f"{A.shape[0]} distinct sample points for {A.shape[1]} unknowns")
    b = np.array([fx[float(v)] for v in xs]) / xs ** m
    norms = np.linalg.norm(A, axis=0)
    cond = np.linalg.cond(A / norms)
    if not np.isfinite(cond) or cond > cond_max:
        raise DegenerateError(f"regression matrix ill-conditioned (cond = {cond:.3g})")
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    c = float(coef[0])
    if c == 0.0:
        raise DegenerateError("fitted log coefficient is zero")
    poly = coef[1:]  # coefficients of x^m, x^(m-1), ..., x^0

    def g(v):
        p = sum(poly[j] * v ** (m - j) for j in range(m + 1))
        return (fx[float(v)] - p) / (c * v ** m)

    diffs = np.array([g(y * ti) - g(ti) for ti in t])
    scale = max(1.0, abs(float(np.mean(diffs[-4:]))))
    kind, spread = _classify(diffs, scale, conv_tol, osc_tol)
    info = {"spread": spread, "c": c, "poly": poly.tolist(), "cond": float(cond)}
    value = float(diffs[-1]) if kind == "converged" else None
    return ProbeVerdict(kind, value, list(zip(t.tolist(), diffs.tolist())), info)


def stirling_exp_probe(
    x: float,
    t_schedule=None,
    conv_tol: float = CONV_TOL,
    osc_tol: float = OSC_TOL,
) -> ProbeVerdict:
    """Gamma(x + e t) Gamma(t) / (Gamma(e t) Gamma(x + t)), which tends to e^x."""
    x = float(x)
    e = math.e
    t = _schedule(t_schedule, 10.0 ** np.arange(1, 7))
    if np.any(t + min(x, 0.0) <= 0):
        raise DomainError("schedule must keep every gamma argument positive")
    vals = np.array([
        math.exp(log_gamma(x + e * ti) + log_gamma(ti) - log_gamma(e * ti) - log_gamma(x + ti))
        for ti in t
    ])
    scale = abs(float(vals[-1]))
    kind, spread = _classify(vals, scale, conv_tol, osc_tol)
    value = float(vals[-1]) if kind == "converged" else None
    return ProbeVerdict(kind, value, list(zip(t.tolist(), vals.tolist())), {"spread": spread})


def ratio_extract(X: DiscretePointSet, tail: int) -> float:
    """Median of the last ``tail`` consecutive ratios x_{k+1}/x_k."""
    tail = int(tail)
    if tail < 1:
        raise ValueError("tail must be positive")
    if len(X) < tail + 1:
        raise DegenerateError(f"need at least {tail + 1} points, got {len(X)}")
    pts = X.as_array()
    if pts[0] <= 0:
        raise DomainError("points must be positive")
    ratios = pts[1:] / pts[:-1]
    return float(np.median(ratios[-tail:]))


# ---------------------------------------------------------------- omega zeros

def omega_zero_density(p, X_lo: float, X_hi: float, per_half_period: int = 128) -> tuple[int, int]:
    """(sign changes of (x omega_s)' on a scan, zeros of the model sinusoid).

    The model is sin(2 pi cos(pi/s) x^(1/s) + pi/s).  In y = x^(1/s),
    x omega_s = (4 pi/s) H(y) with H(y) = y sum_{n,theta} sin(a y + theta) e^{-b y},
    a = 2 pi n cos(theta), b = 2 pi n sin(theta), and (x omega_s)' has the
    sign of H'(y).  H' is taken by a central difference whose terms are all
    multiplied by e^{b_min y0} at the centre y0, so nothing underflows.
    """
    from .decomposition import ThetaSet
    from .products import _shape

    p = _shape(p)
    s = p.s
    if not s > 2 or p.class_4n2:
        raise DomainError("requires s > 2 with s not in 4N+2")
    X_lo, X_hi = float(X_lo), float(X_hi)
    if not 0 < X_lo < X_hi:
        raise DomainError("requires 0 < X_lo < X_hi")
    thetas = np.array(ThetaSet(s).angles)
    y_lo, y_hi = X_lo ** (1.0 / s), X_hi ** (1.0 / s)
    freq = 2.0 * math.pi * math.cos(math.pi / s)
    ph = lambda y: freq * y + math.pi / s  # noqa: E731
    count_model = math.floor(ph(y_hi) / math.pi) - math.floor(ph(y_lo) / math.pi)

    half_periods = (ph(y_hi) - ph(y_lo)) / math.pi
    npts = max(16, int(math.ceil(per_half_period * half_periods)) + 1)
    y0 = np.linspace(y_lo, y_hi, npts)
    h = 1e-5 * math.pi / freq
    bmin = 2.0 * math.pi * math.sin(thetas.min())
    n_max = 1 + int(math.ceil(40.0 / (bmin * y_lo)))
    n = np.arange(1, n_max + 1, dtype=float)
    a = (2.0 * math.pi * n[:, None] * np.cos(thetas)[None, :]).ravel()
    b = (2.0 * math.pi * n[:, None] * np.sin(thetas)[None, :]).ravel()
    th = np.broadcast_to(thetas[None, :], (n_max, thetas.size)).ravel()

    def H_scaled(yy):
        return yy * np.sum(np.sin(a[None, :] * yy[:, None] + th[None, :])
                           * np.exp(-b[None, :] * yy[:, None] + bmin * y0[:, None]), axis=1)

    d = (H_scaled(y0 + h) - H_scaled(y0 - h)) / (2.0 * h)
    if not np.any(np.abs(d) > 0):
        warnings.warn("omega_zero_density: flat region, derivative vanished on the scan",
                      RuntimeWarning, stacklevel=2)
    sg = np.sign(d)
    count_actual = int(np.count_nonzero(sg[:-1] * sg[1:] < 0))
    return count_actual, int(count_model)


# ---------------------------------------------------------------- fast sequences

@dataclass
class FastSequenceReport:
    rows: list
    min_ratio: float
    epsilon: float
    thresholds: dict
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def _sum_f(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    # f(x) = sum_n x/(x + a_n) = sum_n 1/(1 + a_n/x)
    return np.sum(1.0 / (1.0 + a[None, :] / x[:, None]), axis=1)


def _d3(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    u = x[:, None] / a[None, :]
    return np.sum(u * (1.0 - u) / (1.0 + u) ** 3, axis=1)


def fast_sequence_check(
    a: DiscretePointSet,
    epsilon: float,
    k_range: Iterable[int],
    samples: int = 64,
    zero_k_min: int = 1,
) -> FastSequenceReport:
    """Check the sandwich, mapping and zero claims for a rapidly growing sequence a_1 < a_2 < ...

    Per k (1-based): the sandwich k/2 < sum_{n<=k} 1/(1 + a_n/a_k) < k(1 + a_1/a_k);
    f = sum_n x/(x + a_n) maps sampled points of (a_k, a_{k+1}) into
    ((1/2 - eps) k, (1 + eps) k) and increases there; d3 log prod(1 + x/a_n)
    changes sign in (a_k, a_{k+1}).

    The claims hold for sufficiently large k, so each check is asserted only
    from a threshold on and reported below it.  Sandwich: k >= 2 (k = 1 is the
    equality case).  Mapping: since f covers about (k - 1/2, k + 1/2) on the
    interval, k >= ceil(1/(2 eps)).  Zeros: k >= zero_k_min.
    """
    eps = float(epsilon)
    if not 0 < eps < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    arr = a.as_array()
    if arr.size < 2 or arr[0] <= 0:
        raise ValueError("need at least two positive points")
    min_ratio = float(np.min(arr[1:] / arr[:-1]))
    if min_ratio < 100:
        raise DomainError(f"consecutive ratios must be >= 100 (min {min_ratio:.4g})")
    thresholds = {
        "sandwich": 2,
        "mapping": int(math.ceil(1.0 / (2.0 * eps) - 1e-12)),
        "zeros": int(zero_k_min),
    }
    rows, violations = [], []
    frac = np.linspace(0.0, 1.0, samples + 2)[1:-1]
    for k in k_range:
        k = int(k)
        if not 1 <= k < arr.size:
            raise ValueError(f"k = {k} outside 1..{arr.size - 1}")
        ak, ak1 = arr[k - 1], arr[k]
        sand = math.fsum(1.0 / (1.0 + arr[:k] / ak))
        sand_ok = k / 2 < sand < k * (1.0 + arr[0] / ak)
        x = np.exp(np.log(ak) + frac * (np.log(ak1) - np.log(ak)))
        x = np.concatenate(([ak * (1 + 1e-9)], x, [ak1 * (1 - 1e-9)]))
        fx = _sum_f(arr, x)
        lo, hi = (0.5 - eps) * k, (1.0 + eps) * k
        map_ok = bool(np.all((fx > lo) & (fx < hi)))
        mono_ok = bool(np.all(np.diff(fx) > 0))
        d3 = _d3(arr, x)
        changes = int(np.count_nonzero(np.sign(d3[:-1]) * np.sign(d3[1:]) < 0))
        row = {
            "k": k, "sandwich": sand, "sandwich_ok": sand_ok,
            "f_min": float(fx.min()), "f_max": float(fx.max()),
            "mapping_ok": map_ok, "monotone_ok": mono_ok, "d3_sign_changes": changes,
        }
        rows.append(row)
        if k >= thresholds["sandwich"] and not sand_ok:
            violations.append((k, "sandwich"))
        if k >= thresholds["mapping"] and not map_ok:
            violations.append((k, "mapping"))
        if not mono_ok:
            violations.append((k, "monotone"))
        if k >= thresholds["zeros"] and changes < 1:
            violations.append((k, "zeros"))
    return FastSequenceReport(rows, min_ratio, eps, thresholds, violations)
