"""Scalar special functions used throughout the package.

log-gamma, the Riemann zeta function on (1, oo) and at negative reals, the
Euler-Mascheroni constant, a scaled Hurwitz zeta used for series tails, and
the result/policy carriers shared by every evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

__all__ = [
    "DomainError",
    "RangeError",
    "EvalResult",
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "log_gamma",
    "zeta_pos",
    "zeta_neg",
    "euler_gamma",
    "hurwitz_scaled",
    "csc",
    "csch",
    "sin_half_pi",
    "cos_half_pi",
    "BERNOULLI_2K",
]

EPS = np.finfo(float).eps


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(ArithmeticError):
    """Result not representable in double precision."""


@dataclass(frozen=True)
class EvalResult:
    value: float
    error_bound: float
    terms_used: int
    converged: bool
    heuristic: bool = False

    def __post_init__(self):
        if not self.error_bound >= 0:
            raise ValueError(f"error_bound must be >= 0, got {self.error_bound}")
        if self.terms_used < 0:
            raise ValueError("terms_used must be nonnegative")

    def __float__(self) -> float:
        return float(self.value)


TailMode = Literal["none", "integral_tail", "euler_maclaurin"]


@dataclass(frozen=True)
class TruncationPolicy:
    max_terms: int = 20_000_000
    abs_tol: float = 1e-16
    rel_tol: float = 1e-16
    tail_mode: TailMode = "euler_maclaurin"

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.tail_mode not in ("none", "integral_tail", "euler_maclaurin"):
            raise ValueError(f"unknown tail_mode {self.tail_mode!r}")

    def tol_for(self, magnitude: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(magnitude))


DEFAULT_POLICY = TruncationPolicy()


def _bernoulli_2k(kmax: int) -> list[Fraction]:
    # B_0..B_{2 kmax} by the standard recurrence; only even indices are kept.
    b = [Fraction(1)]
    for n in range(1, 2 * kmax + 1):
        acc = Fraction(0)
        for k in range(n):
            acc += math.comb(n + 1, k) * b[k]
        b.append(-acc / (n + 1))
    return [b[2 * k] for k in range(1, kmax + 1)]


# B_2, B_4, ..., B_30
BERNOULLI_2K: tuple[float, ...] = tuple(float(v) for v in _bernoulli_2k(15))

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_STIRLING = tuple(
    BERNOULLI_2K[k - 1] / (2 * k * (2 * k - 1)) for k in range(1, 10)
)


_EULER_GAMMA = 0.57721566490153286061


@lru_cache(maxsize=1)
def _zeta_minus_one() -> tuple[float, ...]:
    # zeta(k) - 1 = zeta(k, 2) for k = 2..41
    return tuple(hurwitz_scaled(float(k), 2.0)[0] * 2.0 ** -k for k in range(2, 42))


def _lgamma_near_one_two(x: float) -> float:
    # Taylor series about 1 or 2 with coefficients zeta(k) - 1; keeps full
    # relative accuracy next to the zeros of log Gamma at 1 and 2.
    zm1 = _zeta_minus_one()
    if x <= 1.5:
        z = x - 1.0
        head = (1.0 - _EULER_GAMMA) * z - math.log1p(z)
    else:
        z = x - 2.0
        head = (1.0 - _EULER_GAMMA) * z
    acc = 0.0
    for k in range(len(zm1) + 1, 1, -1):
        acc = acc * -z + zm1[k - 2] / k
    return head + acc * z * z


def log_gamma(x: float) -> float:
    """log Gamma(x) for real x > 0.

    On [0.5, 2.5] a Taylor series about 1 or 2; elsewhere upward recurrence
    to x >= 16 followed by the Stirling series with nine Bernoulli
    corrections.
    """
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise DomainError(f"log_gamma requires finite x > 0, got {x}")
    if 0.5 <= x <= 2.5:
        return _lgamma_near_one_two(x)
    shift = 0.0
    if x < 16.0:
        prod = 1.0
        while x < 16.0:
            prod *= x
            x += 1.0
        shift = math.log(prod)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    series *= inv
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series - shift


def euler_gamma() -> float:
    return _EULER_GAMMA


def sin_half_pi(t: float) -> float:
    """sin(pi t / 2) with exact zeros at even integers and argument reduction."""
    r = math.fmod(t, 4.0)
    if r < 0:
        r += 4.0
    if abs(r - round(r)) < 1e-15 * max(1.0, abs(t)):
        return (0.0, 1.0, 0.0, -1.0, 0.0)[int(round(r))]
    return math.sin(0.5 * math.pi * r)


def cos_half_pi(t: float) -> float:
    return sin_half_pi(t + 1.0)


def csc(t: float) -> float:
    return 1.0 / math.sin(t)


def csch(t: float) -> float:
    if abs(t) > 700:
        return math.copysign(2.0 * math.exp(-abs(t)), t)
    return 1.0 / math.sinh(t)


def hurwitz_scaled(sigma: float, a: float, n_bernoulli: int = 12) -> tuple[float, float]:
    """Return (a**sigma * zeta(sigma, a), error estimate) for sigma > 1, a > 0.

    The scaling keeps tails like sum_{n>=N} n**-sigma representable for huge
    sigma.  Direct summation is carried to b = a + M >= max(10, sigma + 20);
    the remainder is Euler-Maclaurin at b.
    """
    if not sigma > 1:
        raise DomainError(f"hurwitz_scaled requires sigma > 1, got {sigma}")
    if not a > 0:
        raise DomainError(f"hurwitz_scaled requires a > 0, got {a}")
    target = max(10.0, sigma + 20.0)
    m = max(0, int(math.ceil(target - a)))
    if m:
        k = np.arange(m, dtype=float)
        head = math.fsum(np.exp(-sigma * np.log1p(k / a)))
    else:
        head = 0.0
    b = a + m
    # EM at b, everything multiplied by b**sigma
    em = [b / (sigma - 1.0), 0.5]
    rising = sigma  # sigma (sigma+1) ... (sigma+2k-2)
    bpow = 1.0 / b
    fact = 2.0  # (2k)!
    last = 0.0
    for k in range(1, n_bernoulli + 1):
        term = BERNOULLI_2K[k - 1] / fact * rising * bpow
        em.append(term)
        last = abs(term)
        rising *= (sigma + 2 * k - 1) * (sigma + 2 * k)
        bpow /= b * b
        fact *= (2 * k + 1) * (2 * k + 2)
    scale = math.exp(-sigma * math.log(b / a))
    tail = math.fsum(em) * scale
    value = head + tail
    err = last * scale + 4 * EPS * abs(value)
    return value, err


def zeta_pos(x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> EvalResult:
    """Riemann zeta at real x > 1 with an a posteriori error bound.

    ``tail_mode`` selects the tail treatment: ``none`` (plain partial sum,
    bound = integral tail), ``integral_tail`` (partial sum plus integral tail
    with trapezoid correction), ``euler_maclaurin``.  Below x = 2 the
    integral tail is too slow and Euler-Maclaurin is used regardless.
    """
    x = float(x)
    if not x > 1:
        raise DomainError(f"zeta_pos requires x > 1, got {x}")
    mode = policy.tail_mode
    if mode == "euler_maclaurin" or (mode == "integral_tail" and x < 2):
        value, err = hurwitz_scaled(x, 1.0)
        m = int(math.ceil(max(10.0, x + 20.0) - 1.0))
        return EvalResult(value, err, m + 1, True)
    tol = policy.abs_tol
    if mode == "integral_tail":
        # remainder after the trapezoid-corrected tail is below x N^{-x-1} / 12
        n = int(math.ceil((x / (12 * tol)) ** (1.0 / (x + 1.0))))
    else:
        n = int(math.ceil((1.0 / ((x - 1.0) * tol)) ** (1.0 / (x - 1.0))))
    converged = n <= policy.max_terms
    n = min(n, policy.max_terms)
    k = np.arange(n, 0, -1, dtype=float)
    partial = math.fsum(k ** -x)
    if mode == "integral_tail":
        tail = n ** (1.0 - x) / (x - 1.0) - 0.5 * n ** -x
        value = partial + tail
        err = x * n ** (-x - 1.0) / 12.0 + 4 * EPS * value
    else:
        value = partial
        err = n ** (1.0 - x) / (x - 1.0) + 4 * EPS * value
    return EvalResult(value, err, n, converged)


def zeta_neg(t: float) -> float:
    """zeta(-t) for t > 0 through the functional equation.

    zeta(-t) = -2 sin(pi t/2) Gamma(1+t) zeta(1+t) / (2 pi)^(1+t), returning
    an exact zero at the trivial zeros t = 2, 4, 6, ...
    """
    t = float(t)
    if not t > 0:
        raise DomainError(f"zeta_neg requires t > 0, got {t}")
    half = 0.5 * t
    if abs(half - round(half)) < 1e-12 and round(half) >= 1:
        return 0.0
    sn = sin_half_pi(t)
    if sn == 0.0:
        return 0.0
    log_mag = log_gamma(1.0 + t) - (1.0 + t) * math.log(2.0 * math.pi)
    z = zeta_pos(1.0 + t).value
    log_mag += math.log(2.0 * abs(sn) * z)
    if log_mag > 709.0:
        raise RangeError(f"zeta(-{t}) overflows double precision")
    return -math.copysign(math.exp(log_mag), sn)
