import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from canonprod.decomposition import phi
from canonprod.laplace import (
    DEFAULT_CONFIG,
    PipelineConfig,
    PoleProximityError,
    Phi,
    Q,
    c_s,
    f,
    f_tail_bound,
    g,
    h,
    h_tail_bound,
    logW_decomposed,
)
from canonprod.products import eval_W, log_W
from canonprod.special import DomainError, zeta_pos

S_GRID = [1.25, 1.5, 1.75]


def _g_closed(s, z):
    c, sg = math.cos(math.pi * s / 2), math.sin(math.pi * s / 2)
    return (math.atan((z + c) / sg) - math.atan(c / sg)) / sg


def test_Q_trivial_values():
    assert Q(1.5, 0.0) == 1.0
    for s in S_GRID:
        assert Q(s, 1.0) == pytest.approx(1.0 / (2.0 + 2.0 * math.cos(math.pi * s / 2)), rel=1e-15)


def test_Q_pole():
    s = 1.5
    pole = complex(math.cos(math.pi * (1 + s / 2)), math.sin(math.pi * (1 + s / 2)))
    mags = [abs(Q(s, pole * (1 + d))) for d in (1e-2, 1e-4, 1e-6)]
    assert mags[0] < mags[1] < mags[2]
    with pytest.raises(PoleProximityError):
        Q(s, pole)


def test_Q_domain():
    with pytest.raises(DomainError):
        Q(2.5, 0.0)


def test_g_zero():
    assert g(1.5, 0.0) == 0.0


@pytest.mark.parametrize("s", S_GRID)
@pytest.mark.parametrize("z", [0.1, 0.9, 3.0, 10.0, 1e3])
def test_g_against_arctan(s, z):
    assert g(s, z) == pytest.approx(_g_closed(s, z), rel=1e-13, abs=1e-15)


def test_g_derivative_is_Q():
    s, z, step = 1.5, 0.3, 1e-7
    assert abs((g(s, z + step) - g(s, z)) / step - Q(s, z)) < 1e-6


def test_g_complex_matches_quad():
    s, z = 1.5, complex(0.4, 0.7)
    re = quad(lambda t: (z * Q(s, t * z)).real, 0, 1, epsabs=1e-14)[0]
    im = quad(lambda t: (z * Q(s, t * z)).imag, 0, 1, epsabs=1e-14)[0]
    assert abs(g(s, z) - complex(re, im)) < 1e-12


def test_g_path_near_pole():
    s = 1.5
    pole = complex(math.cos(math.pi * (1 - s / 2)), math.sin(math.pi * (1 - s / 2)))
    with pytest.raises(PoleProximityError):
        g(s, 2 * pole)


@pytest.mark.parametrize("s", S_GRID)
def test_g_linear_bound(s):
    w = np.linspace(1e-4, 0.9, 200)
    C = max(abs(_g_closed(s, v)) / v for v in np.linspace(1e-6, 1.0, 4001))
    assert np.all(np.abs(g(s, w)) <= C * w * (1 + 1e-12))


def test_h_zero():
    assert h(1.5, 0.0) == 0.0


def _h_direct(s, z, N=20000):
    # direct sum with closed-form g plus the first-order tail sum_{n>N} z / (2 pi n)^(1+s)
    head = math.fsum(_g_closed(s, z / (2 * math.pi * n) ** s) / (2 * math.pi * n) for n in range(1, N + 1))
    tail = z * (2 * math.pi) ** (-1 - s) * (N + 0.5) ** (-s) / s
    return head + tail


@pytest.mark.parametrize("s", S_GRID)
@pytest.mark.parametrize("z", [0.5, 5.0, 200.0])
def test_h_against_direct_sum(s, z):
    assert h(s, z) == pytest.approx(_h_direct(s, z), rel=1e-9)


@pytest.mark.parametrize("s", S_GRID)
def test_h_linear_bound(s):
    C = max(abs(_g_closed(s, v)) / v for v in np.linspace(1e-6, 1.0, 4001))
    bound = C * zeta_pos(1.0 + s).value / (2 * math.pi) ** (1 + s)
    z = np.linspace(1e-3, 1.0, 100)
    assert np.all(np.abs(h(s, z)) <= bound * z * (1 + 1e-12))


def test_h_stable_under_n_max_doubling():
    s, z = 1.5, 0.5
    a = h(s, z, DEFAULT_CONFIG)
    b = h(s, z, DEFAULT_CONFIG.doubled("n_max"))
    assert abs(a - b) <= 1e-12


def test_h_tail_bound_shrinks():
    b1 = h_tail_bound(1.5, 1.0, PipelineConfig(n_max=8))
    b2 = h_tail_bound(1.5, 1.0, PipelineConfig(n_max=16))
    assert 0 < b2 < b1


def test_f_stable_under_panel_doubling():
    s, z = 1.5, 2.0
    assert abs(f(s, z) - f(s, z, DEFAULT_CONFIG.doubled("quad_panels"))) <= 1e-10


def test_f_against_scipy():
    s, z = 1.5, 2.0
    ref = quad(lambda t: h(s, t ** s) * math.exp(-t * z), 0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
    assert f(s, z) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("s", S_GRID)
def test_f_decay_slope(s):
    zs = np.array([10.0, 20.0, 40.0, 80.0])
    vals = np.array([f(s, z) for z in zs])
    assert np.all(vals > 0)
    slope = np.polyfit(np.log(zs), np.log(vals), 1)[0]
    assert slope == pytest.approx(-1.0 - s, abs=0.05)


def test_f_domain():
    with pytest.raises(DomainError):
        f(1.5, 0.0)


def test_f_tail_bound_small():
    assert f_tail_bound(1.5, 1.0) < 1e-15


def test_Phi_derivative_is_phi():
    s, x, step = 1.5, 10.0, 1e-3
    d = (Phi(s, x + step) - Phi(s, x - step)) / (2 * step)
    ref = phi(s, x).value
    assert abs(d - ref) <= 1e-5 * abs(ref)


def test_Phi_alternative_derivative_route():
    # (y f(y))' in x, with y = x^(1/s), equals minus the summed Laplace integrals
    s, x, step = 1.5, 10.0, 1e-3
    c = math.cos(s * math.pi / 2)
    y = lambda v: v ** (1 / s)
    d = (y(x + step) * f(s, y(x + step)) - y(x - step) * f(s, y(x - step))) / (2 * step)

    def term(n):
        return quad(lambda t: t ** s * math.exp(-2 * math.pi * n * t)
                    / (x * x + 2 * c * t ** s * x + t ** (2 * s)), 0, np.inf, epsabs=1e-16, epsrel=1e-12)[0]

    N = 400
    head = math.fsum(term(n) for n in range(1, N + 1))
    tail = math.gamma(s + 1) / ((2 * math.pi) ** (s + 1) * x * x) * (N + 0.5) ** (-s) / s
    ref = -(head + tail)
    assert abs(d - ref) <= 1e-6 * abs(ref)


def test_Phi_vanishes_as_s_to_two():
    vals = [abs(Phi(s, 5.0)) for s in (1.9, 1.99, 1.999)]
    assert vals[0] > vals[1] > vals[2]
    # the prefactor sin(s pi/2) is linear in 2 - s
    assert vals[2] / vals[0] == pytest.approx(0.01, rel=0.1)


def test_Phi_domain():
    with pytest.raises(DomainError):
        Phi(1.5, -1.0)
    with pytest.raises(DomainError):
        Phi(2.0, 1.0)


@pytest.mark.parametrize("s", S_GRID)
@pytest.mark.parametrize("x", [2.0, 10.0, 50.0])
def test_Phi_prime_equals_phi_grid(s, x):
    step = 1e-4 * x
    d = (Phi(s, x + step) - Phi(s, x - step)) / (2 * step)
    ref = phi(s, x).value
    assert abs(d - ref) <= max(1e-5, 1e-4 * abs(ref))


@pytest.mark.parametrize("s", S_GRID)
def test_logW_decomposed_exact_at_one(s):
    r = logW_decomposed(s, 1.0)
    assert r.value == pytest.approx(math.log(eval_W(s, 1.0).value), abs=1e-13)


@pytest.mark.parametrize("x", [5.0, 20.0, 100.0])
def test_logW_decomposed_matches_product(x):
    s = 1.5
    r = logW_decomposed(s, x)
    assert abs(r.value - log_W(s, x).value) <= 1e-5
    assert r.error_bound < 1e-5


@pytest.mark.parametrize("which", ["quad_panels", "n_max", "laplace_cut"])
def test_pipeline_stable_under_doubling(which):
    s, x = 1.5, 20.0
    cfg = DEFAULT_CONFIG.doubled(which)
    assert abs(Phi(s, x) - Phi(s, x, cfg)) <= 1e-9
    assert abs(logW_decomposed(s, x).value - logW_decomposed(s, x, cfg).value) <= 1e-9


def test_c_s_cached():
    assert c_s(1.5) is c_s(1.5)


@pytest.mark.parametrize("s", [1.2, 1.5, 1.8])
def test_c_s_conjecture_reported(s):
    gap = c_s(s) + s * math.log(2 * math.pi) / 2
    print(f"s={s}: c_s + s log(2 pi)/2 = {gap:.3e}")
    assert math.isfinite(gap)


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(quad_panels=0)
    with pytest.raises(ValueError):
        PipelineConfig(laplace_cut=-1.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1.05, max_value=1.95), st.floats(min_value=0.0, max_value=50.0))
def test_g_real_axis_property(s, z):
    assert g(s, z) == pytest.approx(_g_closed(s, z), rel=1e-12, abs=1e-15)
