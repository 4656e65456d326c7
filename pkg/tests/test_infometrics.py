import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liminfo.geometry import DimensionMismatch, InvalidState, random_pure_state
from liminfo.infometrics import (
    QUADRATIC,
    ComplementaryFrame,
    InfoMeasure,
    invariance_scan,
    single_info,
    total_info,
)
from liminfo.rng import make_stream

measures = [QUADRATIC, InfoMeasure(0.5), InfoMeasure(3.0), InfoMeasure(4.0), InfoMeasure.shannon_limit()]


@pytest.mark.parametrize("params", measures)
def test_fair_coin_and_certainty(params):
    assert single_info(0.5, params) == pytest.approx(0.0, abs=1e-15)
    assert single_info(1.0, params) == pytest.approx(1.0, abs=1e-15)
    assert single_info(0.0, params) == pytest.approx(1.0, abs=1e-15)


def test_quadratic_single_examples():
    assert single_info(0.75) == pytest.approx(0.25, abs=1e-15)
    p = np.linspace(0, 1, 101)
    assert np.allclose(single_info(p), (2 * p - 1) ** 2, atol=1e-15)


def test_default_normalization():
    assert InfoMeasure(2.0).norm == 2.0
    assert InfoMeasure(1 + 1e-7).norm == pytest.approx(1 / math.log(2), rel=1e-6)
    # the Shannon limit is the alpha -> 1 limit of the family
    assert single_info(0.8, InfoMeasure(1 + 1e-7)) == pytest.approx(single_info(0.8, InfoMeasure.shannon_limit()), abs=1e-6)
    assert InfoMeasure(3.0, k=5.0).norm == 5.0


def test_alpha_one_needs_explicit_limit():
    with pytest.raises(ValueError):
        InfoMeasure(1.0)
    with pytest.raises(ValueError):
        InfoMeasure(-1.0)
    with pytest.raises(ValueError):
        single_info(1.5)


def test_total_info_examples():
    frame = ComplementaryFrame.canonical(3)
    assert total_info([0.0, 0.6, 0.8], frame) == pytest.approx(1.0, abs=1e-12)
    assert total_info([0.0, 0.0, 0.0], frame) == 0.0
    assert total_info([0.5, 0.0, 0.0], frame) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(DimensionMismatch):
        total_info([1.0, 0.0], frame)


def test_frame_validation():
    with pytest.raises(InvalidState):
        ComplementaryFrame(np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(DimensionMismatch):
        ComplementaryFrame(np.eye(3)[:2])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([3, 7, 15]), st.floats(0, 1))
def test_quadratic_identity(seed, D, r):
    rng = make_stream(seed)
    n = r * random_pure_state(D, rng)
    frame = ComplementaryFrame.random(D, rng)
    assert abs(total_info(n, frame) - r * r) < 1e-10


def test_quadratic_scan_invariant():
    rng = make_stream(5)
    for D in (3, 7):
        res = invariance_scan(random_pure_state(D, rng), QUADRATIC, 100, rng)
        assert res.max_deviation < 1e-9


@pytest.mark.parametrize("params", measures)
def test_mixed_state_scan_is_flat(params):
    res = invariance_scan(np.zeros(3), params, 20, make_stream(0))
    assert res.max_deviation == 0.0


@pytest.mark.parametrize("params", [InfoMeasure(0.5), InfoMeasure.shannon_limit(), InfoMeasure(4.0)])
def test_non_quadratic_measures_depend_on_frame(params):
    rng = make_stream(9)
    n = random_pure_state(3, rng)
    res = invariance_scan(n, params, 200, rng)
    assert res.max_deviation > 1e-3
    assert total_info(n, res.witness, params) == res.witness_info
    assert abs(res.witness_info - res.base_info) == res.max_deviation


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_cubic_measure_is_frame_independent(seed):
    # p^3 + q^3 = 1/4 + 3/4 (n.m)^2, so alpha = 3 reduces to the quadratic sum
    rng = make_stream(seed)
    n = random_pure_state(3, rng)
    frame = ComplementaryFrame.random(3, rng)
    params = InfoMeasure(3.0)
    expected = 3 * (1 - params.norm * 0.75 / 2) + params.norm * 0.75 / 2 * (n @ n)
    assert total_info(n, frame, params) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.floats(0, 1), st.floats(0, 1))
def test_monotone_in_length(seed, r1, r2):
    rng = make_stream(seed)
    u = random_pure_state(7, rng)
    frame = ComplementaryFrame.random(7, rng)
    lo, hi = sorted((r1, r2))
    assert total_info(lo * u, frame) <= total_info(hi * u, frame) + 1e-12
