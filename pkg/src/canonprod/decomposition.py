"""The auxiliary functions phi_s, omega_s and the decomposition of W_s'/W_s.

For s > 1 and x > 0,

    W_s'/W_s = (pi/s) csc(pi/s) x^(1/s-1) - 1/(2x) + phi_s + omega_s
               [+ 2 pi x^(1/s-1) / (s (e^(2 pi x^(1/s)) - 1))  if s in 4N+2]

Also here: the Poisson-summation form of the same quantity (an independent
route through oscillatory integrals), and the coefficients of the divergent
asymptotic series attached to log W_s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .products import ShapeParam, _shape
from .quadrature import adaptive_gl, cvz_alternating, graded_edges, panel_sum
from .special import (
    DEFAULT_POLICY,
    EPS,
    DomainError,
    EvalResult,
    RangeError,
    TruncationPolicy,
    cos_half_pi,
    hurwitz_scaled,
    log_gamma,
    sin_half_pi,
    zeta_neg,
    zeta_pos,
)

__all__ = [
    "ThetaSet",
    "leading_term",
    "phi",
    "phi_first_form",
    "omega",
    "omega_geometric",
    "poisson_middle",
    "maincalc_rhs",
    "correction_4n2",
    "asympt_coeff",
    "asympt_eval",
    "logW_closed_terms",
    "gevrey_growth",
    "GevreyFit",
    "chebyshev_u",
]

TWO_PI = 2.0 * math.pi
_LOG_2PI = math.log(TWO_PI)


@dataclass(frozen=True)
class ThetaSet:
    """Angles 0 < theta < pi/2 with cos(s theta) = -1, i.e. (2j+1) pi / s."""

    s: float
    angles: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        s = float(self.s)
        angles = []
        j = 0
        # strict inequality; 2j+1 = s/2 gives theta = pi/2 which is excluded
        while 2 * j + 1 < s / 2 and abs(2 * j + 1 - s / 2) > 1e-12:
            angles.append((2 * j + 1) * math.pi / s)
            j += 1
        object.__setattr__(self, "angles", tuple(angles))

    def __len__(self):
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)


def _gt1(p) -> ShapeParam:
    p = _shape(p)
    if not p.s > 1:
        raise DomainError(f"requires s > 1, got {p.s}")
    return p


def _xpos(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise DomainError(f"requires x > 0, got {x}")
    return x


def leading_term(s: float, x: float) -> float:
    """(pi/s) csc(pi/s) x^(1/s - 1) = integral_0^oo dt / (x + t^s)."""
    return (math.pi / s) / math.sin(math.pi / s) * x ** (1.0 / s - 1.0)


def chebyshev_u(t: float, kmax: int) -> np.ndarray:
    """U_0(t) .. U_kmax(t); 1/(1 - 2 t w + w^2) = sum_k U_k(t) w^k."""
    u = np.empty(kmax + 1)
    u[0] = 1.0
    if kmax >= 1:
        u[1] = 2.0 * t
    for k in range(1, kmax):
        u[k + 1] = 2.0 * t * u[k] - u[k - 1]
    return u


# ---------------------------------------------------------------- phi_s

def phi_first_form(p, x: float) -> float:
    """-2 int_0^oo Im[1/(x + (it)^s)] dt / (e^{2 pi t} - 1), by adaptive quadrature."""
    p = _gt1(p)
    x = _xpos(x)
    s = p.s
    sn, cs = sin_half_pi(s), cos_half_pi(s)
    if sn == 0.0:
        return 0.0

    def f(t):
        ts = t ** s
        im = -ts * sn / ((x + ts * cs) ** 2 + (ts * sn) ** 2)
        return -2.0 * im / np.expm1(TWO_PI * t)

    upper = 12.0 + 2 * s
    edges = graded_edges(0.0, upper, 40)
    feature = x ** (1.0 / s)
    if feature < upper:
        edges = np.unique(np.concatenate((edges, [feature])))
    val, _, _ = adaptive_gl(f, edges, tol=1e-300, rel_tol=1e-15, order=20)
    return float(val)


def _phi_head(s: float, x: float, n0: int, cs: float, tol_rel: float) -> float:
    # sum_{n <= n0} of integral_0^oo t^s e^{-2 pi n t} / (x^2 + 2 cos(s pi/2) t^s x + t^{2s}) dt
    # with the finite geometric sum over n taken inside the integral
    def f(t):
        ts = t ** s
        a = TWO_PI * t
        geo = np.exp(-a) * np.expm1(-n0 * a) / np.expm1(-a)
        return ts * geo / (x * x + 2.0 * cs * ts * x + ts * ts)

    upper = (50.0 + 3.0 * s) / TWO_PI
    edges = graded_edges(0.0, upper, 50)
    feat = x ** (1.0 / s)
    if feat < upper:
        edges = np.unique(np.concatenate((edges, [feat])))
    val, _, _ = adaptive_gl(f, edges, tol=1e-300, rel_tol=tol_rel, order=20)
    return val


def _phi_tail(s: float, x: float, n0: int, cs: float, kmax: int = 400):
    # sum_{n > n0} of the n-th integral via the expansion of the denominator in
    # w = t^s / x: (1/x^2) sum_k U_k(-cos(s pi/2)) x^-k Gamma(1+s(k+1)) (2 pi n)^-(1+s(k+1))
    u = chebyshev_u(-cs, kmax)
    base = math.log(TWO_PI * (n0 + 1))
    terms = []
    prev = math.inf
    for k in range(kmax + 1):
        sigma = 1.0 + s * (k + 1)
        z, _ = hurwitz_scaled(sigma, n0 + 1.0)
        logmag = log_gamma(sigma) - sigma * base - (k + 2) * math.log(x)
        if logmag < -745:
            break
        if abs(u[k]) < 1e-12:
            continue  # U_k(0) vanishes for odd k
        t = u[k] * math.exp(logmag) * z
        mag = abs(t)
        if mag > prev and k > 2:
            break  # optimal truncation of the asymptotic series
        terms.append(t)
        prev = mag
        if mag < 1e-18 * abs(math.fsum(terms)):
            break
    if not terms:
        return 0.0, 0.0, 0
    return math.fsum(terms), abs(terms[-1]), len(terms)


def phi(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """phi_s(x) from the n-indexed series of exponentially damped integrals."""
    p = _gt1(p)
    x = _xpos(x)
    s = p.s
    if p.even_integer:
        return EvalResult(0.0, 0.0, 0, True)
    sn, cs = sin_half_pi(s), cos_half_pi(s)
    y = x ** (1.0 / s)
    n0 = max(2, int(math.ceil(45.0 / (TWO_PI * y))) - 1)
    head = _phi_head(s, x, n0, cs, 1e-15)
    tail, tail_err, kt = _phi_tail(s, x, n0, cs)
    total = head + tail
    value = 2.0 * sn * total
    err = 2.0 * abs(sn) * (tail_err + 1e-14 * abs(total)) + 8 * EPS * abs(value)
    return EvalResult(value, err, n0 + kt, True)


# ---------------------------------------------------------------- omega_s

def omega(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """omega_s(x) as the double sum over n > 0 and theta."""
    p = _shape(p)
    x = _xpos(x)
    s = p.s
    thetas = ThetaSet(s)
    if not thetas.angles:
        return EvalResult(0.0, 0.0, 0, True)
    y = x ** (1.0 / s)
    smin = min(math.sin(t) for t in thetas)
    # relative truncation: drop n once e^{-2 pi (n-1) y sin(theta_min)} < 1e-17
    n_max = 1 + int(math.ceil(-math.log(1e-17) / (TWO_PI * y * smin)))
    n_max = min(n_max, policy.max_terms)
    n = np.arange(1, n_max + 1, dtype=float)
    terms = []
    for th in thetas:
        terms.extend(np.sin(TWO_PI * n * y * math.cos(th) + th)
                     * np.exp(-TWO_PI * n * y * math.sin(th)))
    pref = 4.0 * math.pi / s * x ** (1.0 / s - 1.0)
    value = pref * math.fsum(terms)
    err = pref * (8 * EPS * sum(abs(t) for t in terms)
                  + len(thetas) * math.exp(-TWO_PI * (n_max + 1) * y * smin))
    return EvalResult(value, err, n_max * len(thetas), True)


def omega_geometric(p, x: float) -> float:
    """omega_s(x) in the closed per-angle form.

    Summing the geometric series in n gives
    (4 pi/s) x^(1/s-1) sum_theta Im[e^{i theta} / (exp(-i 2 pi x^(1/s) e^{i theta}) - 1)].
    The overall sign is fixed by the double sum, which matches the direct
    evaluation of W_s'/W_s.
    """
    p = _shape(p)
    x = _xpos(x)
    s = p.s
    y = x ** (1.0 / s)
    total = 0.0
    for th in ThetaSet(s):
        q = complex(math.cos(TWO_PI * y * math.cos(th)), math.sin(TWO_PI * y * math.cos(th)))
        q *= math.exp(-TWO_PI * y * math.sin(th))
        total += (complex(math.cos(th), math.sin(th)) * q / (1.0 - q)).imag
    return 4.0 * math.pi / s * x ** (1.0 / s - 1.0) * total


def correction_4n2(p, x: float) -> float:
    p = _shape(p)
    if not p.class_4n2:
        return 0.0
    s = p.s
    y = x ** (1.0 / s)
    return TWO_PI * x ** (1.0 / s - 1.0) / (s * math.expm1(TWO_PI * y))


def maincalc_rhs(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Right-hand side of the decomposition of W_s'/W_s."""
    p = _gt1(p)
    x = _xpos(x)
    ph = phi(p, x, policy)
    om = omega(p, x, policy)
    parts = [leading_term(p.s, x), -0.5 / x, ph.value, om.value, correction_4n2(p, x)]
    value = math.fsum(parts)
    err = ph.error_bound + om.error_bound + 8 * EPS * sum(abs(v) for v in parts)
    return EvalResult(value, err, ph.terms_used + om.terms_used,
                      ph.converged and om.converged)


# ---------------------------------------------------------------- Poisson route

def _fourier_one(s: float, x: float, n: int, n_accel: int = 40) -> tuple[float, float]:
    """int_0^oo cos(2 pi n t) / (x + t^s) dt by half-period cells + CVZ tail."""
    w = TWO_PI * n
    y = x ** (1.0 / s)

    def f(t):
        return np.cos(w * t) / (x + t ** s)

    # zeros of cos(w t): t_j = (2j+1)/(4n)
    j0 = int(math.ceil((4.0 * n * (4.0 * y + 1.0) - 1.0) / 2.0))
    first = 1.0 / (4.0 * n)
    cells = (2.0 * np.arange(0, j0 + 1) + 1.0) / (4.0 * n)
    edges = np.concatenate((graded_edges(0.0, first, 40)[:-1], cells))
    head = panel_sum(f, edges, order=20)
    # remaining cells alternate in sign: cell j (between t_{j-1}, t_j) has sign (-1)^j
    jj = np.arange(j0 + 1, j0 + 1 + n_accel)
    lo = (2.0 * jj - 1.0) / (4.0 * n)
    hi = (2.0 * jj + 1.0) / (4.0 * n)
    from .quadrature import gauss_legendre
    xs, ws = gauss_legendre(20)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * xs[None, :]
    cell = (f(pts) * ws[None, :]).sum(axis=1) * half
    a = cell * (-1.0) ** (jj - (j0 + 1))  # positive-ish magnitudes times start sign
    sign0 = 1.0 if (j0 + 1) % 2 == 0 else -1.0
    mags = a * sign0
    tail = sign0 * cvz_alternating(mags)
    tail_short = sign0 * cvz_alternating(mags[: n_accel - 8])
    return head + tail, abs(tail - tail_short) + 1e-16 * abs(head)


def _fourier_tail(s: float, x: float, n0: int, kmax: int = 400) -> tuple[float, float, int]:
    # sum_{n > n0} int_0^oo cos(2 pi n t)/(x + t^s) dt from the endpoint expansion
    # 1/(x+t^s) = sum_k (-1)^k t^{sk} / x^{k+1}
    base = math.log(TWO_PI * (n0 + 1))
    terms = []
    prev = math.inf
    for k in range(1, kmax + 1):
        a = s * k
        cf = cos_half_pi(a + 1.0)
        sigma = a + 1.0
        logmag = log_gamma(sigma) - sigma * base - (k + 1) * math.log(x)
        if logmag < -745:
            break
        z, _ = hurwitz_scaled(sigma, n0 + 1.0)
        t = (-1) ** k * cf * math.exp(logmag) * z
        mag = math.exp(logmag) * z
        if mag > prev and k > 2:
            break
        terms.append(t)
        prev = mag
        if mag < 1e-18 * max(abs(math.fsum(terms)), 1e-300):
            break
    if not terms:
        return 0.0, 0.0, 0
    return math.fsum(terms), prev, len(terms)


def poisson_middle(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """W_s'/W_s via Poisson summation: leading - 1/(2x) + 2 sum_n int cos(2 pi n t)/(x+t^s)."""
    p = _gt1(p)
    x = _xpos(x)
    s = p.s
    y = x ** (1.0 / s)
    thetas = ThetaSet(s)
    smin = min([math.sin(t) for t in thetas] + [1.0])
    n0 = max(2, int(math.ceil(45.0 / (TWO_PI * y * smin))) - 1)
    vals = []
    err = 0.0
    for n in range(1, n0 + 1):
        v, e = _fourier_one(s, x, n)
        vals.append(v)
        err += e
    tail, terr, kt = _fourier_tail(s, x, n0)
    osc = 2.0 * (math.fsum(vals) + tail)
    err = 2.0 * (err + terr)
    parts = [leading_term(s, x), -0.5 / x, osc]
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    return EvalResult(value, err, n0 + kt, True)


# ---------------------------------------------------------------- asymptotics

def asympt_coeff(p, k: int) -> tuple[float, float]:
    """Both forms of the k-th asymptotic coefficient of the remainder of log W_s.

    Returns ((-1)^(k+1) zeta(-sk)/k,
             2 (-1)^k sin(k pi s/2) Gamma(1+sk) zeta(1+sk) / (k (2 pi)^(1+sk))).
    The second form takes zeta(1+sk) from the direct-summation route.
    """
    p = _shape(p)
    k = int(k)
    if k < 1:
        raise ValueError("k must be a positive integer")
    t = p.s * k
    if t > 170:
        raise RangeError(f"s k = {t} exceeds the gamma overflow guard (170)")
    sign = -1.0 if k % 2 else 1.0
    first = -sign * zeta_neg(t) / k
    sn = sin_half_pi(t)
    if p.even_integer or sn == 0.0:
        return first, 0.0
    zp = zeta_pos(1.0 + t, TruncationPolicy(tail_mode="integral_tail", abs_tol=1e-17)).value
    logmag = log_gamma(1.0 + t) + math.log(zp) - (1.0 + t) * _LOG_2PI
    second = 2.0 * sign * sn * math.exp(logmag) / k
    return first, second


def logW_closed_terms(p, x: float) -> float:
    """pi csc(pi/s) x^(1/s) + sum_{k<=floor(1/s)} (-1)^k zeta(sk) x^k/k - log(x)/2 - s log(2 pi)/2.

    Valid when 1/s is not an integer.
    """
    p = _shape(p)
    if p.recip_integer is not None:
        raise DomainError("closed terms differ when 1/s is an integer")
    s = p.s
    parts = [math.pi / math.sin(math.pi / s) * x ** (1.0 / s),
             -0.5 * math.log(x), -0.5 * s * _LOG_2PI]
    for k in range(1, p.genus + 1):
        parts.append((-1) ** k * zeta_pos(s * k).value * x ** k / k)
    return math.fsum(parts)


def asympt_eval(p, x: float, K: int) -> EvalResult:
    """Partial sum of sum_{k>0} (-1)^(k+1) zeta(-sk) x^-k / k up to k = K.

    The error bound is the first omitted nonzero term, a Gevrey heuristic
    (flagged via ``heuristic``).  ``converged`` is False when the terms are
    not yet decreasing at order K.
    """
    p = _shape(p)
    x = _xpos(x)
    s = p.s
    if p.even_integer:
        return EvalResult(0.0, 0.0, K, True, heuristic=True)
    terms = []
    for k in range(1, K + 2):
        c, _ = asympt_coeff(p, k)
        terms.append(c * x ** -k)
    kept = terms[:K]
    nonzero = [abs(t) for t in kept if t != 0.0]
    decreasing = len(nonzero) < 2 or nonzero[-1] < nonzero[-2]
    nxt = abs(terms[K])
    if nxt == 0.0:
        k = K + 2
        while nxt == 0.0 and s * k <= 170:
            nxt = abs(asympt_coeff(p, k)[0] * x ** -k)
            k += 1
    return EvalResult(math.fsum(kept), nxt, K, decreasing, heuristic=True)


@dataclass(frozen=True)
class GevreyFit:
    A: float
    B: float
    max_rel_residual: float
    ks: tuple[int, ...]
    degenerate: bool = False


def gevrey_growth(p, K: int) -> GevreyFit:
    """Fit |zeta(-sk)/k| <= A B^k (k!)^s over the nonzero coefficients k <= K."""
    p = _shape(p)
    s = p.s
    ks, ys = [], []
    for k in range(1, K + 1):
        if s * k > 170:
            break
        c = zeta_neg(s * k) / k
        if c != 0.0:
            ks.append(k)
            ys.append(math.log(abs(c)) - s * log_gamma(k + 1.0))
    if len(ks) < 3:
        return GevreyFit(math.nan, math.nan, math.nan, tuple(ks), degenerate=True)
    slope, intercept = np.polyfit(np.array(ks, float), np.array(ys), 1)
    res = np.array(ys) - (intercept + slope * np.array(ks, float))
    A = math.exp(intercept + res.max())  # lifted so the fit is an upper bound
    return GevreyFit(A, math.exp(slope), float(np.max(np.abs(np.expm1(res)))), tuple(ks))
