"""The Laplace-type antiderivative of phi_s for 1 < s < 2.

    Q_s(w) = 1 / (w^2 + 2 cos(pi s/2) w + 1)
    g_s(z) = z int_0^1 Q_s(t z) dt                 (g_s' = Q_s, g_s(0) = 0)
    h_s(z) = sum_{n>0} g_s(z / (2 pi n)^s) / (2 pi n)
    f_s(z) = int_0^oo h_s(t^s) e^{-t z} dt          (real z > 0)
    Phi_s(x) = -2 sin(s pi/2) x^(1/s) f_s(x^(1/s)),  Phi_s' = phi_s

and log W_s = pi csc(pi/s) x^(1/s) - (log x)/2 + Phi_s + c_s with
c_s = log W_s(1) - pi csc(pi/s) + 2 sin(s pi/2) f_s(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .decomposition import chebyshev_u
from .products import log_W
from .quadrature import gauss_legendre, graded_edges
from .special import EPS, DomainError, EvalResult, hurwitz_scaled, zeta_pos

__all__ = [
    "PipelineConfig",
    "DEFAULT_CONFIG",
    "PoleProximityError",
    "Q",
    "g",
    "h",
    "h_tail_bound",
    "f",
    "Phi",
    "c_s",
    "logW_decomposed",
]

TWO_PI = 2.0 * math.pi


class PoleProximityError(DomainError):
    """Evaluation point or integration path too close to a pole of Q_s."""


@dataclass(frozen=True)
class PipelineConfig:
    quad_panels: int = 16
    n_max: int = 8
    laplace_cut: float = 40.0

    def __post_init__(self):
        if self.quad_panels < 1 or self.n_max < 1 or not self.laplace_cut > 0:
            raise ValueError("quad_panels, n_max and laplace_cut must be positive")

    def doubled(self, which: str) -> "PipelineConfig":
        vals = {"quad_panels": self.quad_panels, "n_max": self.n_max,
                "laplace_cut": self.laplace_cut}
        vals[which] = vals[which] * 2
        return PipelineConfig(**vals)


DEFAULT_CONFIG = PipelineConfig()


def _check_s(s: float) -> float:
    s = float(s)
    if not 1 < s < 2:
        raise DomainError(f"the Laplace pipeline needs 1 < s < 2, got {s}")
    return s


def _poles(s: float) -> tuple[complex, complex]:
    return (complex(math.cos(math.pi * (1 + s / 2)), math.sin(math.pi * (1 + s / 2))),
            complex(math.cos(math.pi * (1 - s / 2)), math.sin(math.pi * (1 - s / 2))))


def Q(s: float, w):
    """1 / (w^2 + 2 cos(pi s/2) w + 1); accepts scalars or arrays."""
    s = _check_s(s)
    c = math.cos(math.pi * s / 2)
    den = w * w + 2.0 * c * w + 1.0
    if np.any(np.abs(den) < 1e-12):
        raise PoleProximityError("Q_s evaluated within 1e-12 of a pole")
    return 1.0 / den


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    n = abs(d)
    t = ((p - a) * (d / n).conjugate()).real / n
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p)


def _segment_integral(s: float, a, b, panels: int, order: int = 32):
    # int_a^b Q_s(w) dw on straight segments, vectorised over arrays a, b
    x, w = gauss_legendre(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    a = np.asarray(a)
    b = np.asarray(b)
    d = b - a
    pts = a[..., None] + d[..., None] * t
    return d * (Q(s, pts) @ wt)


def g(s: float, z, cfg: PipelineConfig = DEFAULT_CONFIG):
    """g_s(z) = integral of Q_s along [0, z]; scalar or array z, real or complex.

    For |z| > 4 the piece beyond w1 = 4 z/|z| is mapped by v = 1/w, under
    which Q_s(w) dw becomes -Q_s(v) dv, so both pieces are short segments.
    """
    s = _check_s(s)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z))
    cplx = np.iscomplexobj(z)
    absz = np.abs(z)
    for zz in z.ravel():
        for p in _poles(s):
            if _segment_distance(0j, complex(zz), p) < 1e-6:
                raise PoleProximityError(f"segment [0, {zz}] passes within 1e-6 of a pole")
    scale = 4.0 / np.maximum(absz, 4.0)
    w1 = z * scale
    out = _segment_integral(s, np.zeros_like(w1), w1, cfg.quad_panels)
    far = absz > 4.0
    if np.any(far):
        zf = z[far]
        out = out.astype(np.result_type(out, zf))
        out[far] += _segment_integral(s, 1.0 / zf, 1.0 / w1[far], max(1, cfg.quad_panels // 4))
    if not cplx:
        out = out.real if np.iscomplexobj(out) else out
    return out[0] if scalar else out


@lru_cache(maxsize=256)
def _h_tail_coeffs(s: float, n0: int, kmax: int = 80) -> np.ndarray:
    # sum_{n>n0} g(z/(2 pi n)^s)/(2 pi n) = sum_k U_k(-c)/(k+1) z^{k+1} sum_{n>n0} (2 pi n)^-(1+s(k+1))
    c = math.cos(math.pi * s / 2)
    u = chebyshev_u(-c, kmax)
    base = math.log(TWO_PI * (n0 + 1))
    coef = np.zeros(kmax + 1)
    for k in range(kmax + 1):
        sigma = 1.0 + s * (k + 1)
        lm = -sigma * base
        if lm < -745:
            break
        zs, _ = hurwitz_scaled(sigma, n0 + 1.0)
        coef[k] = u[k] / (k + 1) * math.exp(lm) * zs
    coef.setflags(write=False)
    return coef


def _h_split(s: float, absmax: float, cfg: PipelineConfig) -> int:
    # direct terms so that every tail argument has modulus <= 1/2
    need = (2.0 * absmax) ** (1.0 / s) / TWO_PI
    return max(cfg.n_max, int(math.ceil(need)))


def h(s: float, z, cfg: PipelineConfig = DEFAULT_CONFIG):
    """h_s(z): direct terms n <= N0 plus the exact power-series tail."""
    s = _check_s(s)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z))
    amax = float(np.max(np.abs(z))) if z.size else 0.0
    n0 = _h_split(s, amax, cfg)
    total = np.zeros(z.shape, dtype=np.result_type(z, float))
    for n in range(1, n0 + 1):
        a = TWO_PI * n
        total = total + g(s, z / a ** s, cfg) / a
    coef = _h_tail_coeffs(s, n0)
    tail = np.zeros_like(total)
    for ck in coef[::-1]:  # Horner in z, then one more factor z
        tail = tail * z + ck
    total = total + tail * z
    return total[0] if scalar else total


def h_tail_bound(s: float, z, cfg: PipelineConfig = DEFAULT_CONFIG, C: float = None) -> float:
    """C |z| sum_{n > n_max} (2 pi n)^-(1+s); C defaults to sup |g(w)/w| on [0, 1]."""
    s = _check_s(s)
    if C is None:
        C = _linear_constant(s)
    sigma = 1.0 + s
    n0 = cfg.n_max
    zs, _ = hurwitz_scaled(sigma, n0 + 1.0)
    return C * abs(z) * math.exp(-sigma * math.log(TWO_PI * (n0 + 1))) * zs


@lru_cache(maxsize=64)
def _linear_constant(s: float) -> float:
    # |g(w)| <= C |w| on real [0, 1]; g(w)/w is an average of Q over [0, w]
    w = np.linspace(1e-6, 1.0, 2001)
    return float(np.max(np.abs(g(s, w) / w)))


def _f_nodes(z: float, cfg: PipelineConfig, order: int = 64):
    T = cfg.laplace_cut / z
    x, w = gauss_legendre(order)
    if T <= 1.0:
        edges = graded_edges(0.0, T, 30)
    else:
        edges = np.concatenate((graded_edges(0.0, 1.0, 30)[:-1],
                                np.linspace(1.0, T, cfg.quad_panels + 1)))
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt, T


def f(s: float, z: float, cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
    """f_s(z) = int_0^oo h_s(t^s) e^{-t z} dt for real z > 0, cut at laplace_cut / z."""
    s = _check_s(s)
    z = float(z)
    if not z > 0:
        raise DomainError("f_s is evaluated for real z > 0 only")
    t, wt, _ = _f_nodes(z, cfg)
    vals = h(s, t ** s, cfg) * np.exp(-t * z)
    return float(math.fsum(vals * wt))


def f_tail_bound(s: float, z: float, cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
    """Bound on the discarded part: C_h int_T^oo t^s e^{-t z} dt with |h(t^s)| <= C_h t^s."""
    s = _check_s(s)
    T = cfg.laplace_cut / z
    C_h = _linear_constant(s) * zeta_pos(1.0 + s).value / TWO_PI ** (1.0 + s)
    # int_T^oo t^s e^{-tz} dt <= T^s e^{-Tz} / (z - s/T) when z > s/T
    rate = z - s / T
    if rate <= 0:
        return math.inf
    return C_h * T ** s * math.exp(-T * z) / rate


def Phi(s: float, x: float, cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
    s = _check_s(s)
    x = float(x)
    if not x > 0:
        raise DomainError("Phi_s needs x > 0")
    y = x ** (1.0 / s)
    return -2.0 * math.sin(s * math.pi / 2) * y * f(s, y, cfg)


@lru_cache(maxsize=None)
def c_s(s: float, cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
    """log W_s(1) - pi csc(pi/s) + 2 sin(s pi/2) f_s(1); cached per (s, cfg)."""
    s = _check_s(s)
    return (log_W(s, 1.0).value - math.pi / math.sin(math.pi / s)
            + 2.0 * math.sin(s * math.pi / 2) * f(s, 1.0, cfg))


def logW_decomposed(s: float, x: float, cfg: PipelineConfig = DEFAULT_CONFIG) -> EvalResult:
    s = _check_s(s)
    x = float(x)
    if not x > 0:
        raise DomainError("x must be positive")
    parts = [math.pi / math.sin(math.pi / s) * x ** (1.0 / s), -0.5 * math.log(x),
             Phi(s, x, cfg), c_s(s, cfg)]
    value = math.fsum(parts)
    err = 16 * EPS * sum(abs(p) for p in parts)
    y = x ** (1.0 / s)
    err += 2.0 * y * f_tail_bound(s, y, cfg) + 2.0 * f_tail_bound(s, 1.0, cfg)
    return EvalResult(value, err, cfg.n_max, True)
