import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canonprod.products import d2_logW_analytic
from canonprod.special import DomainError
from canonprod.tameness import (
    DegenerateError,
    DiscretePointSet,
    ProbeVerdict,
    assouad_zero_estimate,
    covering_number,
    default_R_grid,
    fast_sequence_check,
    log_probe,
    omega_zero_density,
    power_probe,
    ratio_extract,
    stirling_exp_probe,
)


def _brute_cover(pts, x, R, r):
    # optimal 1-D cover by exhaustive left-endpoint placement at data points
    inside = sorted(p for p in pts if x - R < p < x + R)
    n, i = 0, 0
    while i < len(inside):
        n += 1
        start = inside[i]
        while i < len(inside) and inside[i] <= start + 2 * r:
            i += 1
    return n


# ---------------------------------------------------------------- DiscretePointSet

def test_point_set_rejects_unsorted():
    with pytest.raises(ValueError):
        DiscretePointSet((1.0, 1.0))
    with pytest.raises(ValueError):
        DiscretePointSet((2.0, 1.0))
    with pytest.raises(ValueError):
        DiscretePointSet((1.0, math.inf))


def test_point_set_empty_allowed():
    assert len(DiscretePointSet()) == 0


@given(st.lists(st.floats(min_value=-1e300, max_value=1e300), max_size=50))
def test_point_set_from_unsorted_invariant(values):
    X = DiscretePointSet.from_unsorted(values)
    assert all(a < b for a, b in zip(X, X.points[1:]))
    assert set(X) == set(values)


@settings(max_examples=30)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), max_size=30))
def test_point_set_csv_round_trip(tmp_path_factory, values):
    X = DiscretePointSet.from_unsorted(values)
    path = tmp_path_factory.mktemp("csv") / "x.csv"
    X.to_csv(path)
    assert DiscretePointSet.from_csv(path) == X
    assert path.read_bytes().startswith(b"x\n")


# ---------------------------------------------------------------- ProbeVerdict

def test_probe_verdict_invariant():
    ProbeVerdict("converged", 1.0)
    ProbeVerdict("oscillating", None)
    with pytest.raises(ValueError):
        ProbeVerdict("converged", None)
    with pytest.raises(ValueError):
        ProbeVerdict("inconclusive", 2.0)
    with pytest.raises(ValueError):
        ProbeVerdict("maybe", None)


# ---------------------------------------------------------------- Assouad

def test_covering_number_matches_brute_force():
    rng = np.random.default_rng(7)
    pts = np.sort(rng.uniform(0, 100, 300))
    X = DiscretePointSet(tuple(pts))
    for x in pts[::37]:
        for R, r in ((50.0, 2.0), (10.0, 0.5), (3.0, 0.01)):
            assert covering_number(X, float(x), R, r) == _brute_cover(pts, x, R, r)


def test_assouad_arithmetic():
    X = DiscretePointSet(tuple(float(k) for k in range(1, 1001)))
    e = assouad_zero_estimate(X)
    assert e.value >= 0.9
    assert e.r_ratios == (4.0, 16.0, 64.0, 256.0)
    assert e.R_grid == default_R_grid(X)


def test_assouad_geometric_value():
    # the sup on the default grid is attained by two points at R/r = 4
    X = DiscretePointSet(tuple(2.0 ** k for k in range(31)))
    e = assouad_zero_estimate(X)
    assert e.value == pytest.approx(0.5, abs=1e-12)
    assert e.count == 2
    R, r = e.argmax[1], e.argmax[2]
    assert R / r == 4.0


def test_assouad_geometric_decreases_with_scale_ratio():
    # N(x, R, r) grows like log(R/r) for a geometric set, so the ratio log N / log(R/r) falls
    geo = DiscretePointSet(tuple(2.0 ** k for k in range(31)))
    ari = DiscretePointSet(tuple(float(k) for k in range(1, 1001)))
    vals = [assouad_zero_estimate(geo, r_ratios=(q,)).value for q in (256.0, 4096.0, 2.0 ** 20)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 0.25
    assert assouad_zero_estimate(ari, r_ratios=(256.0,)).value >= 0.9


def test_assouad_two_points():
    e = assouad_zero_estimate(DiscretePointSet((0.0, 1.0)))
    assert 0.0 <= e.value <= 0.5


def test_assouad_degenerate():
    with pytest.raises(DegenerateError):
        assouad_zero_estimate(DiscretePointSet((1.0,)))
    with pytest.raises(DegenerateError):
        assouad_zero_estimate(DiscretePointSet((0.0, 10.0)), R_grid=(1.0,))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=3, max_size=40, unique=True),
       st.integers(min_value=-20, max_value=20))
def test_assouad_scale_invariance(values, j):
    X = DiscretePointSet.from_unsorted(values)
    if len(X) < 3:
        return
    c = 2.0 ** j
    Rg = default_R_grid(X, levels=8)
    try:
        a = assouad_zero_estimate(X, Rg)
    except DegenerateError:
        return
    b = assouad_zero_estimate(X.scaled(c), tuple(c * R for R in Rg))
    assert a.value == b.value


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=2, max_size=40, unique=True))
def test_assouad_in_unit_interval(values):
    X = DiscretePointSet.from_unsorted(values)
    try:
        e = assouad_zero_estimate(X)
    except DegenerateError:
        return
    assert 0.0 <= e.value <= 1.0


# ---------------------------------------------------------------- limit probes

def test_power_probe_d2logW_s3():
    v = power_probe(lambda x: d2_logW_analytic(3.0, x).value, 2.0)
    assert v.kind == "converged"
    assert v.value == pytest.approx(1.0 / 3.0, abs=1e-2)


def test_power_probe_d2logW_s15():
    v = power_probe(lambda x: d2_logW_analytic(1.5, x).value, 2.0)
    assert v.kind == "converged"
    assert v.value == pytest.approx(2.0 / 3.0, abs=1e-2)


def test_power_probe_identity():
    v = power_probe(lambda x: x, 7.0)
    assert v.kind == "converged" and v.value == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("alpha", [-1.0, 0.5, 2.0])
def test_power_probe_synthetic(alpha):
    v = power_probe(lambda x: x ** alpha, 3.0)
    assert v.kind == "converged"
    assert abs(v.value - alpha) <= 1e-6


def test_power_probe_oscillating():
    v = power_probe(lambda x: 2.0 + math.sin(x), 1.7, t_schedule=np.arange(1.0, 30.0))
    assert v.kind in ("oscillating", "inconclusive")
    assert v.value is None


def test_power_probe_rejects_nonpositive():
    with pytest.raises(DomainError):
        power_probe(lambda x: -x, 2.0)


def test_log_probe_synthetic():
    f = lambda x: 3 * x * x * math.log(x) + x * x - 4 * x + 1
    v = log_probe(f, 2, math.e)
    assert v.kind == "converged"
    assert v.value == pytest.approx(1.0, abs=1e-9)
    assert v.info["c"] == pytest.approx(3.0, rel=1e-9)


def test_log_probe_y_one():
    f = lambda x: 3 * x * x * math.log(x) + x * x - 4 * x + 1
    v = log_probe(f, 2, 1.0)
    assert v.kind == "converged" and v.value == 0.0


def test_log_probe_d2logW_s1():
    v = log_probe(lambda x: d2_logW_analytic(1.0, x).value, 1, 2.0)
    assert v.kind == "converged"
    assert v.value == pytest.approx(math.log(2.0), abs=1e-2)


def test_log_probe_degenerate():
    with pytest.raises(DegenerateError):
        log_probe(lambda x: 1.0, 1, 2.0, t_schedule=[10.0] * 6)


@pytest.mark.parametrize("x, target", [(0.0, 1.0), (1.0, math.e), (-1.0, 1.0 / math.e)])
def test_stirling_probe(x, target):
    v = stirling_exp_probe(x)
    assert v.kind == "converged"
    assert v.value == pytest.approx(target, rel=1e-3)


def test_stirling_probe_trace_is_flat():
    # Gamma(x + e t) / Gamma(e t) and Gamma(x + t) / Gamma(t) are e t and t for x = 1
    for x, target in ((0.0, 1.0), (1.0, math.e)):
        v = stirling_exp_probe(x)
        assert all(val == pytest.approx(target, rel=1e-7) for _, val in v.trace)


def test_ratio_extract_powers():
    for s in (1.5, 2.0, 3.0, math.pi):
        X = DiscretePointSet(tuple(s ** k for k in range(20)))
        assert ratio_extract(X, 5) == pytest.approx(s, rel=1e-14)


@given(st.floats(min_value=1.01, max_value=50.0), st.integers(min_value=2, max_value=40))
def test_ratio_extract_property(alpha, K):
    X = DiscretePointSet(tuple(alpha ** k for k in range(K + 1)))
    assert ratio_extract(X, min(5, K)) == pytest.approx(alpha, rel=1e-12)


def test_ratio_extract_subgeometric():
    X = DiscretePointSet(tuple(float(k * k) for k in range(1, 2001)))
    assert ratio_extract(X, 5) == pytest.approx(1.0, abs=2e-3)


def test_ratio_extract_errors():
    with pytest.raises(DegenerateError):
        ratio_extract(DiscretePointSet((1.0, 2.0)), 5)
    with pytest.raises(DomainError):
        ratio_extract(DiscretePointSet((-1.0, 2.0, 4.0)), 1)


# ---------------------------------------------------------------- omega zero density

@pytest.mark.parametrize("s", [3.0, 5.0])
def test_omega_zero_density(s):
    actual, model = omega_zero_density(s, 10.0, 200.0)
    assert model >= 1
    assert actual >= model - 1


def test_omega_zero_density_model_count():
    s, lo, hi = 5.0, 10.0, 200.0
    _, model = omega_zero_density(s, lo, hi)
    c = 2 * math.cos(math.pi / s)
    # zeros of sin(pi u) with u = c x^(1/s) + 1/s
    u = lambda x: c * x ** (1 / s) + 1 / s
    assert model == math.floor(u(hi)) - math.ceil(u(lo)) + 1


def test_omega_zero_density_domain():
    with pytest.raises(DomainError):
        omega_zero_density(1.5, 10.0, 200.0)
    with pytest.raises(DomainError):
        omega_zero_density(6.0, 10.0, 200.0)


# ---------------------------------------------------------------- fast sequences

def _family_power(K):
    return DiscretePointSet(tuple(100.0 ** n for n in range(1, K + 1)))


def _family_product(K):
    a = [100.0]
    for n in range(2, K + 1):
        a.append((100.0 + n) * a[-1])
    return DiscretePointSet(tuple(a))


@pytest.mark.parametrize("family", [_family_power, _family_product])
def test_fast_sequence_passes(family):
    rep = fast_sequence_check(family(8), 0.1, range(1, 7))
    assert rep.passed, rep.violations
    assert rep.min_ratio >= 100
    assert len(rep.rows) == 6


def test_fast_sequence_k3_rows():
    row = fast_sequence_check(_family_power(8), 0.1, [3]).rows[0]
    assert row["sandwich_ok"] and row["monotone_ok"] and row["d3_sign_changes"] >= 1
    # the image of (a_3, a_4) is close to (2.5, 3.5)
    assert row["f_min"] == pytest.approx(2.5, abs=0.02)
    assert row["f_max"] == pytest.approx(3.5, abs=0.02)


def test_fast_sequence_k1_equality_reported():
    rep = fast_sequence_check(_family_power(8), 0.1, [1])
    row = rep.rows[0]
    assert row["sandwich"] == 0.5
    assert not row["sandwich_ok"]
    assert rep.passed


def test_fast_sequence_monotone():
    rep = fast_sequence_check(_family_product(8), 0.05, range(1, 7))
    assert all(r["monotone_ok"] for r in rep.rows)


def test_fast_sequence_threshold_report():
    rep = fast_sequence_check(_family_power(8), 0.1, range(1, 7))
    assert rep.thresholds == {"sandwich": 2, "mapping": 5, "zeros": 1}


def test_fast_sequence_rejects_slow_sequence():
    with pytest.raises(DomainError):
        fast_sequence_check(DiscretePointSet((1.0, 10.0, 100.0)), 0.1, [1])
    with pytest.raises(ValueError):
        fast_sequence_check(_family_power(4), 0.6, [1])
