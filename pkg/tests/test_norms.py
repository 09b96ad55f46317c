import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hilbertmorrey.norms import (MorreyParams, ap_constant, shell_growth_check, discrete_morrey_norm,
                                 doubling_constant, doubling_ratio, lp_norm, morrey_ratio,
                                 reverse_doubling_constant, weight_constants, weighted_lp_norm,
                                 weighted_morrey_norm)
from hilbertmorrey.seq import make_sequence, make_weight, window_sum
from hilbertmorrey.transforms import EvalPlan
from oracles import ap_exhaustive, morrey_exhaustive

GRID = [(1.0, 0.0), (1.0, 0.5), (2.0, 0.25), (2.0, 0.1), (3.0, 0.2), (1.5, 0.6), (4.0, 0.25)]


def test_params_validation():
    with pytest.raises(ValueError):
        MorreyParams(0.5, 0.0)
    with pytest.raises(ValueError):
        MorreyParams(2.0, 0.6)
    with pytest.raises(ValueError):
        MorreyParams(2.0, -0.1)
    P = MorreyParams(2.0, 0.25)
    assert P.strict_interior and P.gap == 0.25
    assert not MorreyParams(2.0, 0.0).strict_interior
    assert not MorreyParams(2.0, 0.5).strict_interior


def test_lp_norm_examples():
    assert lp_norm(make_sequence([1.0]), 3.3) == 1.0
    assert lp_norm(make_sequence([1.0, -1.0]), 2) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert lp_norm(make_sequence([3.0, 4.0]), 2) == 5.0
    with pytest.raises(ValueError):
        lp_norm(make_sequence([1.0]), 0.5)


def test_weighted_lp_norm():
    b = make_sequence([1.0, 2.0], 0)
    w = make_weight("power:1", (-2, 2))
    assert weighted_lp_norm(b, w, 2) == pytest.approx(math.sqrt(1 + 4 * 2))


@pytest.mark.parametrize("p,lam", GRID)
def test_delta_norm_is_one(p, lam):
    res = discrete_morrey_norm(make_sequence([1.0], 5), MorreyParams(p, lam))
    assert res.value == 1.0 and res.witness == (5, 0) and res.exactness == "exact"


def test_lambda_zero_is_lp():
    rng = np.random.default_rng(0)
    b = make_sequence(rng.standard_normal(11), -5)
    for p in (1.0, 2.0, 3.5):
        got = discrete_morrey_norm(b, MorreyParams(p, 0.0)).value
        assert got == pytest.approx(lp_norm(b, p), rel=1e-14)


@pytest.mark.parametrize("p,lam", GRID)
def test_discrete_norm_matches_exhaustive(p, lam):
    rng = np.random.default_rng(1)
    b = make_sequence(rng.standard_normal(9), -4, trim=False)
    got = discrete_morrey_norm(b, MorreyParams(p, lam)).value
    assert got == morrey_exhaustive(b, None, p, lam, range(-64, 65), 64)


@pytest.mark.parametrize("p,lam", GRID)
def test_weighted_power_matches_exhaustive(p, lam):
    rng = np.random.default_rng(2)
    b = make_sequence(rng.standard_normal(9), 3, trim=False)
    w = make_weight("power:1", (-140, 140))
    got = weighted_morrey_norm(b, w, MorreyParams(p, lam))
    assert got.exactness == "exact"
    assert got.value == morrey_exhaustive(b, w, p, lam, range(-64, 65), 64)


def test_unit_weight_equals_unweighted():
    rng = np.random.default_rng(3)
    b = make_sequence(rng.standard_normal(12), -7)
    w = make_weight("const:1", (-60, 60))
    for p, lam in GRID:
        P = MorreyParams(p, lam)
        assert weighted_morrey_norm(b, w, P).value == discrete_morrey_norm(b, P).value


def test_delta_weighted_norm():
    w = make_weight("power:0.5", (-10, 10))
    P = MorreyParams(2.0, 0.25)
    res = weighted_morrey_norm(make_sequence([1.0], 3), w, P)
    assert res.value == pytest.approx(w.at(3) ** P.gap, rel=1e-15)
    assert res.witness == (3, 0)


def test_weighted_lower_bound_tag_and_margin():
    rng = np.random.default_rng(4)
    b = make_sequence(rng.standard_normal(5), 0)
    w = make_weight("random:9:4", (-40, 40))
    P = MorreyParams(2.0, 0.2)
    plain = weighted_morrey_norm(b, w, P)
    wide = weighted_morrey_norm(b, w, P, EvalPlan(b.lo, b.hi, search_margin=10))
    assert plain.exactness == "lower-bound" and wide.value >= plain.value


def test_weight_window_too_small():
    w = make_weight("const:1", (-3, 3))
    with pytest.raises(ValueError):
        weighted_morrey_norm(make_sequence([1.0, 2.0, 3.0], 0), w, MorreyParams(2, 0.25))


def test_morrey_ratio_matches_witness():
    rng = np.random.default_rng(5)
    b = make_sequence(rng.standard_normal(9), -4)
    w = make_weight("power:0.5", (-40, 40))
    P = MorreyParams(2.0, 0.3)
    res = weighted_morrey_norm(b, w, P)
    m, n = res.witness
    assert morrey_ratio(b, w, P, m, n) == res.value


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=10), st.floats(1.0, 4.0),
       st.floats(0.0, 1.0))
def test_norm_scaling_and_bounds(vals, p, frac):
    b = make_sequence(vals)
    P = MorreyParams(p, frac / p)
    val = discrete_morrey_norm(b, P).value
    assert discrete_morrey_norm(b.scaled(2.0), P).value == pytest.approx(2 * val, rel=1e-12)
    # sup |b| <= norm <= lp norm
    assert val >= float(np.abs(b.values).max()) * (1 - 1e-12)
    assert val <= lp_norm(b, p) * (1 + 1e-12)


def test_ap_constant_of_constant_weight():
    assert ap_constant(make_weight("const:1", (-20, 20)), 2.0).value == 1.0
    for c, p in ((3.7, 2.0), (0.01, 1.5), (12.0, 4.0)):
        val = ap_constant(make_weight(f"const:{c}", (-20, 20)), p).value
        assert val == pytest.approx(1.0, abs=1e-12)


def test_ap_constant_rejects_p_le_one():
    with pytest.raises(ValueError):
        ap_constant(make_weight("const:1", (-2, 2)), 1.0)


@pytest.mark.parametrize("spec,p", [("power:1", 2.0), ("power:-0.5", 3.0), ("random:3:5", 1.5),
                                    ("step:1:100", 2.0)])
def test_ap_constant_matches_exhaustive(spec, p):
    w = make_weight(spec, (-12, 12))
    got = ap_constant(w, p)
    assert got.value == pytest.approx(ap_exhaustive(w, p, -12, 12), rel=1e-12)
    m, n = got.witness
    vals = w.on_window(m, n)
    at = np.mean(vals) * np.mean(vals ** (-1 / (p - 1))) ** (p - 1)
    assert at == pytest.approx(got.value, rel=1e-12)


def test_ap_power_growth():
    w1 = ap_constant(make_weight("power:3", (-64, 64)), 2.0).value
    w2 = ap_constant(make_weight("power:3", (-128, 128)), 2.0).value
    w0 = ap_constant(make_weight("power:3", (-32, 32)), 2.0).value
    assert w0 < w1 < w2 and w2 > 1.25 * w1


def test_doubling_examples():
    ones = make_weight("const:1", (-20, 20))
    assert doubling_ratio(ones, 0, 1.5) == pytest.approx(7 / 3, rel=1e-15)
    assert doubling_ratio(ones, 0, 0.4) == 1.0
    for d in (0.5, 1.0, 2.5, 3.0):
        assert doubling_ratio(ones, 0, d) == (2 * math.floor(2 * d) + 1) / (2 * math.floor(d) + 1)
    D = doubling_constant(ones, delta_max=4)
    assert D.value == pytest.approx(3.0)  # d = 0.5 and d = 1: 3/1 and 5/3


def test_doubling_step_weight_matches_direct_sum():
    w = make_weight("step:1:100", (-30, 30))
    D = doubling_constant(w, delta_max=6)
    best = 1.0
    for m in range(-18, 19):
        for k in range(1, 13):
            d = k / 2
            big, small = math.floor(2 * d), math.floor(d)
            best = max(best, sum(w.at(j) for j in range(m - big, m + big + 1))
                       / sum(w.at(j) for j in range(m - small, m + small + 1)))
    assert D.value == pytest.approx(best, rel=1e-13)
    assert D.value > 50


def test_doubling_rejects_escape():
    with pytest.raises(ValueError):
        doubling_constant(make_weight("const:1", (-3, 3)), centers=[0], delta_max=4)


def test_reverse_doubling_ones():
    w = make_weight("const:1", (-200, 200))
    for N in (0, 1, 5, 60):
        d1 = reverse_doubling_constant(w, N)
        assert d1.value == pytest.approx((4 * N + 3) / (2 * N + 1), rel=1e-15)
        assert d1.witness[1] == N
    assert reverse_doubling_constant(w, 0).value == 3.0


def test_reverse_doubling_power():
    w = make_weight("power:1", (-256, 256))
    d1 = reverse_doubling_constant(w, 60)
    m, n = d1.witness
    direct = window_sum(w, m - 2 * n - 1, m + 2 * n + 1) / window_sum(w, m - n, m + n)
    assert d1.value == pytest.approx(direct, rel=1e-14) and d1.value > 1
    with pytest.raises(ValueError):
        reverse_doubling_constant(make_weight("const:1", (-5, 5)), 10)


@pytest.mark.parametrize("spec", ["const:1", "power:1", "power:-0.5", "random:4:4"])
def test_shell_growth_holds(spec):
    w = make_weight(spec, (-256, 256))
    d1 = reverse_doubling_constant(w, 60).value
    rows = shell_growth_check(w, 0, 6, d1)
    assert len(rows) == 6 and all(r.holds for r in rows)
    # i = 1 is the reverse doubling inequality with n = 0
    assert rows[0].rhs == window_sum(w, -1, 1)


def test_weight_constants_bundle():
    wc = weight_constants(make_weight("const:1", (-40, 40)), 2.0, 8)
    assert wc.ap_constant == 1.0 and wc.reverse_doubling_D1 == pytest.approx(35 / 17)
    assert wc.delta_exponent == pytest.approx(math.log2(35 / 17))
