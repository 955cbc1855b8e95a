"""Direct evaluation of the canonical products W_s and F_s.

W_s(x) = prod_n (1 + x/n^s) exp(sum_{j<=floor(1/s)} (-1)^j x^j / (j n^{sj}))
F_s(x) = prod_n (1 + s^{-n} x)

Everything is accumulated in log space.  For W_s the sum over n is split at
N with x/N^s <= 1/4: the head is summed termwise, the tail is the power
series in x/n^s summed against scaled Hurwitz zeta values, which is exact up
to Euler-Maclaurin rounding.  These evaluators are the brute-force oracles
for the identity modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .special import (
    DEFAULT_POLICY,
    EPS,
    DomainError,
    EvalResult,
    TruncationPolicy,
    hurwitz_scaled,
)

__all__ = [
    "ShapeParam",
    "FnEvaluator",
    "eval_W",
    "log_W",
    "dlogW",
    "logderiv_W",
    "d2_logW_analytic",
    "d3_logW_analytic",
    "eval_F",
    "log_F",
    "logderiv_F",
    "dlogF_termwise",
    "d_m",
    "fd_weights",
]

_CLASS_TOL = 1e-12
_TAIL_RATIO = 0.25


def _near_int(v: float, tol: float = _CLASS_TOL) -> int | None:
    r = round(v)
    return int(r) if abs(v - r) <= tol else None


@dataclass(frozen=True)
class ShapeParam:
    """A validated exponent s > 0 with its arithmetic classification."""

    s: float
    recip_integer: int | None = field(init=False)
    class_2n4: bool = field(init=False)
    class_4n2: bool = field(init=False)
    genus: int = field(init=False)

    def __post_init__(self):
        s = float(self.s)
        if not (s > 0 and math.isfinite(s)):
            raise DomainError(f"shape parameter must be finite and > 0, got {self.s}")
        object.__setattr__(self, "s", s)
        r = _near_int(1.0 / s)
        recip = r if r is not None and r >= 1 else None
        n = self.integer
        object.__setattr__(self, "recip_integer", recip)
        object.__setattr__(self, "class_2n4", n is not None and n >= 4 and n % 2 == 0)
        object.__setattr__(self, "class_4n2", n is not None and n >= 2 and n % 4 == 2)
        object.__setattr__(self, "genus", recip if recip is not None else int(math.floor(1.0 / s)))
        if self.class_4n2 and n >= 4 and not self.class_2n4:
            raise AssertionError("inconsistent integer classification")
        if s > 1 and self.genus != 0:
            raise AssertionError("genus must vanish for s > 1")

    @property
    def integer(self) -> int | None:
        return _near_int(self.s)

    @property
    def even_integer(self) -> bool:
        n = self.integer
        return n is not None and n % 2 == 0

    @property
    def in_1_2(self) -> bool:
        return 1 < self.s <= 2


def _shape(p) -> ShapeParam:
    return p if isinstance(p, ShapeParam) else ShapeParam(p)


@dataclass(frozen=True)
class FnEvaluator:
    """A real function of one real variable with its policy and domain."""

    func: Callable[[float], float]
    lo: float = 0.0
    hi: float = math.inf
    policy: TruncationPolicy = DEFAULT_POLICY
    name: str = ""

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("empty domain interval")

    def __call__(self, x: float) -> float:
        if not self.lo < x < self.hi:
            raise DomainError(f"{self.name or 'function'}: {x} outside ({self.lo}, {self.hi})")
        v = self.func(x)
        return float(v.value) if isinstance(v, EvalResult) else float(v)


# d^m/du^m of log(1+u) with u = c e^u, written as functions of u (m >= 1)
def _dm_log1p(u: np.ndarray, m: int) -> np.ndarray:
    if m == 0:
        return np.log1p(u)
    if m == 1:
        return u / (1.0 + u)
    if m == 2:
        return u / (1.0 + u) ** 2
    if m == 3:
        return u * (1.0 - u) / (1.0 + u) ** 3
    if m == 4:
        return u * (1.0 - 4.0 * u + u * u) / (1.0 + u) ** 4
    raise ValueError(f"derivative order {m} not supported")


def _jpow(j: int, m: int) -> float:
    return 1.0 / j if m == 0 else float(j ** (m - 1))


def dlogW(p, x: float, m: int, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """(x d/dx)^m log W_s at real x >= 0, m in 0..4, any s > 0."""
    p = _shape(p)
    s, g = p.s, p.genus
    x = float(x)
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    if x == 0:
        return EvalResult(0.0, 0.0, 0, True)
    n_cut = max(16, int(math.ceil((x / _TAIL_RATIO) ** (1.0 / s))))
    converged = n_cut <= policy.max_terms
    n_cut = min(n_cut, policy.max_terms)
    n = np.arange(n_cut - 1, 0, -1, dtype=float)  # small terms first
    u = x * n ** -s
    head = _dm_log1p(u, m)
    for j in range(1, g + 1):
        head = head + (-1) ** j * _jpow(j, m) * u ** j
    head_sum = math.fsum(head)
    abs_mass = float(np.abs(head).sum())

    rho = x * float(n_cut) ** -s
    if rho >= 1.0:
        # budget cut the head short; the tail series would diverge
        return EvalResult(head_sum, math.inf, n_cut - 1, False)
    tail_terms = []
    err = 0.0
    j = g + 1
    while True:
        z, zerr = hurwitz_scaled(s * j, float(n_cut))
        coef = (-1) ** (j + 1) * _jpow(j, m) * rho ** j
        t = coef * z
        tail_terms.append(t)
        err += abs(coef) * zerr
        if abs(t) <= policy.tol_for(head_sum) * 1e-2 or j > g + 400:
            break
        if rho == 0.0:
            break
        j += 1
    tail = math.fsum(tail_terms)
    value = head_sum + tail
    err += abs(tail_terms[-1]) + 8 * EPS * (abs_mass + sum(abs(t) for t in tail_terms))
    if not converged:
        err = math.inf
    return EvalResult(value, float(err), n_cut - 1 + len(tail_terms), converged)


def log_W(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    return dlogW(p, x, 0, policy)


def eval_W(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """W_s(x) for x >= 0, accumulated as exp of the log-sum."""
    r = dlogW(p, x, 0, policy)
    v = math.exp(r.value)
    return EvalResult(v, v * math.expm1(r.error_bound) if r.converged else math.inf,
                      r.terms_used, r.converged)


def _require_genus0(p: ShapeParam, what: str):
    if not p.s > 1:
        raise DomainError(f"{what} requires s > 1 (sum over 1/(x+n^s) diverges), got {p.s}")


def logderiv_W(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """W_s'/W_s(x) = sum_n 1/(x + n^s) for s > 1."""
    p = _shape(p)
    _require_genus0(p, "logderiv_W")
    x = float(x)
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    r = dlogW(p, x, 1, policy)
    return EvalResult(r.value / x, r.error_bound / x, r.terms_used, r.converged)


def d2_logW_analytic(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """(x d/dx)^2 log W_s; for s > 1 this is sum_n x n^s / (x + n^s)^2."""
    return dlogW(p, x, 2, policy)


def d3_logW_analytic(p, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """(x d/dx)^3 log W_s; for s > 1 this is sum_n x n^s (n^s - x) / (x + n^s)^3."""
    return dlogW(p, x, 3, policy)


def _check_F(s: float, x: float):
    if not s > 1:
        raise DomainError(f"F_s requires s > 1, got {s}")
    if not x > -s:
        raise DomainError(f"F_s({x}) has a nonpositive factor (need x > -s)")


def _F_terms(s: float, x: float, policy: TruncationPolicy) -> tuple[np.ndarray, float]:
    # n = 1..N with |s^-n x| >= abs_tol; returns u_n and s^-N
    ax = abs(x)
    if ax == 0:
        return np.zeros(0), 1.0
    n_max = int(math.ceil(math.log(ax / policy.abs_tol) / math.log(s))) + 1
    n_max = max(1, min(n_max, policy.max_terms))
    n = np.arange(n_max, 0, -1, dtype=float)
    return x * np.exp(-n * math.log(s)), math.exp(-n_max * math.log(s))


def dlogF_termwise(s: float, x: float, m: int,
                   policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """(x d/dx)^m log F_s(x) summed termwise, m in 0..4."""
    s, x = float(s), float(x)
    _check_F(s, x)
    u, last = _F_terms(s, x, policy)
    total = math.fsum(_dm_log1p(u, m))
    # remaining factors: (x d/dx)^m log(1+v) = v + O(v^2) for all m >= 0
    tail = x * last / (s - 1.0)
    err = tail * tail + 8 * EPS * (abs(total) + abs(tail)) * max(1, u.size) ** 0.5
    return EvalResult(total + tail, float(err), int(u.size), True)


def log_F(s: float, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    return dlogF_termwise(s, x, 0, policy)


def eval_F(s: float, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """F_s(x) = prod_{n>0} (1 + s^-n x) for s > 1, x > -s."""
    r = log_F(s, x, policy)
    v = math.exp(r.value)
    return EvalResult(v, v * math.expm1(r.error_bound), r.terms_used, r.converged)


def logderiv_F(s: float, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """F_s'/F_s(x) = sum_n s^-n / (1 + s^-n x)."""
    s, x = float(s), float(x)
    _check_F(s, x)
    if x == 0:
        return EvalResult(1.0 / (s - 1.0), 0.0, 0, True)
    n_max = int(math.ceil(-math.log(policy.abs_tol) / math.log(s))) + 1
    n_max = min(n_max, policy.max_terms)
    n = np.arange(n_max, 0, -1, dtype=float)
    q = np.exp(-n * math.log(s))
    total = math.fsum(q / (1.0 + q * x))
    q_last = math.exp(-n_max * math.log(s))
    tail = q_last / (s - 1.0)
    err = tail * abs(x) * q_last + 8 * EPS * total
    return EvalResult(total + tail, float(err), n_max, True)


def fd_weights(m: int, half_width: int) -> np.ndarray:
    """Central finite-difference weights for the m-th derivative.

    Nodes are -half_width..half_width (unit spacing); weights are exact
    rationals from the Taylor system, returned as floats.
    """
    nodes = list(range(-half_width, half_width + 1))
    size = len(nodes)
    if m >= size:
        raise ValueError("stencil too narrow for derivative order")
    a = [[Fraction(k) ** i for k in nodes] for i in range(size)]
    rhs = [Fraction(math.factorial(m) if i == m else 0) for i in range(size)]
    # Gaussian elimination over the rationals
    for col in range(size):
        piv = next(r for r in range(col, size) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(size):
            if r != col and a[r][col] != 0:
                fac = a[r][col] / a[col][col]
                a[r] = [ar - fac * ac for ar, ac in zip(a[r], a[col])]
                rhs[r] -= fac * rhs[col]
    return np.array([float(rhs[i] / a[i][i]) for i in range(size)])


def d_m(f: Callable[[float], float], m: int, x: float, h: float | None = None,
        accuracy: int = 2) -> float:
    """Numerical (x d/dx)^m f at x > 0.

    Central differences in u = log x.  ``accuracy`` is the (even) order of
    the stencil; the default step is eps**(1/(m+accuracy)).
    """
    if not 0 <= m <= 4:
        raise ValueError("m must be in 0..4")
    if not x > 0:
        raise DomainError(f"d_m requires x > 0, got {x}")
    if m == 0:
        return float(f(x))
    if accuracy < 2 or accuracy % 2:
        raise ValueError("accuracy must be a positive even integer")
    if h is None:
        h = EPS ** (1.0 / (m + accuracy))
    if x * h <= np.spacing(x) * 4:
        raise DomainError(f"step {h} underflows at x = {x}")
    half_width = (m - 1) // 2 + accuracy // 2
    w = fd_weights(m, half_width)
    u0 = math.log(x)
    vals = [float(f(math.exp(u0 + k * h))) if wk != 0.0 else 0.0
            for k, wk in zip(range(-half_width, half_width + 1), w)]
    return math.fsum(wk * v for wk, v in zip(w, vals)) / h ** m
