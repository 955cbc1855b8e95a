import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canonprod.littlewood import (
    LittlewoodCoeffs,
    d1_logF,
    d2_logF,
    d3_logF,
    dm_logF,
    logF_littlewood,
    sZ_probe,
    zeros_d3,
)
from canonprod.products import d_m, eval_F, log_F
from canonprod.special import DomainError
from canonprod.tameness import ratio_extract


def test_coefficients():
    c = LittlewoodCoeffs(2.0)
    assert c.a(1) == pytest.approx(-2.0)  # (-2)^1 / (2 - 1)
    assert c.a(2) == pytest.approx(4.0 / 3.0)
    assert abs(c.a(60)) == pytest.approx(1.0)
    assert c.b[0] == pytest.approx(1 / math.sinh(2 * math.pi ** 2 / math.log(2)))
    assert c.b[-1] * c.M_osc ** 2 < 1e-16
    assert c.log_base(8.0) == pytest.approx(3.0)


def test_coefficients_need_s_above_one():
    with pytest.raises(DomainError):
        LittlewoodCoeffs(1.0)


def test_logF_examples():
    assert logF_littlewood(2.0, 4.0).value == pytest.approx(math.log(eval_F(2.0, 4.0).value), abs=1e-10)
    assert logF_littlewood(3.0, 1.5).value == pytest.approx(log_F(3.0, 1.5).value, abs=1e-8)


def test_logF_domain():
    with pytest.raises(DomainError):
        logF_littlewood(2.0, 1.0)


def test_d1_against_finite_difference():
    ref = d_m(lambda v: math.log(eval_F(3.0, v).value), 1, 7.0)
    assert d1_logF(3.0, 7.0).value == pytest.approx(ref, abs=1e-7)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.0, 10.0])
def test_derivatives_against_high_order_fd(s):
    c = LittlewoodCoeffs(s)
    for x in np.exp(np.linspace(math.log(2.0), math.log(1e6), 12)):
        for m, fn in ((1, d1_logF), (2, d2_logF), (3, d3_logF)):
            ref = d_m(lambda v: log_F(s, v).value, m, x, accuracy=8)
            assert abs(fn(c, x).value - ref) <= 1e-6 * max(1.0, abs(ref))


def test_dm_order_zero_is_logF():
    assert dm_logF(2.0, 10.0, 0).value == logF_littlewood(2.0, 10.0).value
    with pytest.raises(ValueError):
        dm_logF(2.0, 10.0, 4)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=1.05, max_value=20.0), st.floats(min_value=1.001, max_value=1e8))
def test_expansion_matches_product(s, x):
    ref = log_F(s, x).value
    assert abs(logF_littlewood(s, x).value - ref) <= 1e-8 * max(1.0, abs(ref))


def test_sz_probe_member():
    v = sZ_probe(2.0, 8.0)
    assert v.kind == "converged"
    assert v.info["member"] is True
    assert v.info["exponent"] == 3


def test_sz_probe_non_member():
    v = sZ_probe(2.0, 3.0)
    assert v.info["member"] is False
    assert v.info["exponent"] is None


def test_sz_probe_reciprocal_member():
    v = sZ_probe(3.0, 1.0 / 9.0)
    assert v.info["member"] is True
    assert v.info["exponent"] == -2


def test_sz_probe_short_schedule_rejected():
    with pytest.raises(ValueError):
        sZ_probe(2.0, 8.0, t_schedule=[10.0, 100.0])


def test_zeros_ratio_s5():
    Z = zeros_d3(5.0, 1.0, 5.0 ** 12)
    assert len(Z) >= 6
    assert ratio_extract(Z, 5) == pytest.approx(5.0, rel=0.03)
    for c in Z.points:
        assert abs(d3_logF(5.0, math.sqrt(c)).value) < 1e-12


def test_zeros_start_late_for_small_s():
    # the 1/x term of d3 log F_3 dominates the oscillation up to about 5.7e5
    assert len(zeros_d3(3.0, 1.0, 3.0 ** 12)) == 0
    Z = zeros_d3(3.0, 1.0, 3.0 ** 16)
    assert math.sqrt(Z.points[0]) > 3.0 ** 12
    assert ratio_extract(Z, 5) == pytest.approx(3.0, rel=0.03)


def test_zeros_empty_interval():
    assert len(zeros_d3(2.0, 10.0, 5.0)) == 0
