import math

import numpy as np
import pytest

from canonprod.quadrature import adaptive_gl, cvz_alternating, gauss_legendre, graded_edges, panel_sum


def test_gauss_legendre_exact_for_polynomials():
    x, w = gauss_legendre(8)
    for k in range(16):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert np.dot(w, x ** k) == pytest.approx(exact, abs=1e-14)


def test_panel_sum_complex_integrand():
    val = panel_sum(lambda t: np.exp(1j * t), np.linspace(0, math.pi, 5), order=20)
    assert val == pytest.approx(2j, abs=1e-14)


def test_adaptive_on_endpoint_singularity():
    val, err, n = adaptive_gl(np.sqrt, graded_edges(0.0, 1.0, 40), tol=1e-14)
    assert val == pytest.approx(2 / 3, abs=1e-13)
    assert n >= 40


def test_adaptive_relative_tolerance():
    val, err, _ = adaptive_gl(lambda t: 1e-20 * np.exp(-t), np.linspace(0, 30, 4), tol=1e-300, rel_tol=1e-14)
    assert val == pytest.approx(1e-20 * (1 - math.exp(-30)), rel=1e-13)


def test_cvz_log2():
    a = 1.0 / np.arange(1, 41)
    assert cvz_alternating(a) == pytest.approx(math.log(2), abs=1e-15)
