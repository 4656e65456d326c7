import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from liminfo.dimwitness import (
    BallSampler,
    MeanHistogram,
    analytic_cdf,
    analytic_freq,
    analytic_freq_multi,
    ball_volume,
    bin_probabilities,
    disc_halfdisc_demo,
    fit_dimension,
    histogram,
    ks_distance,
    purity_drift,
    sample_means,
    sample_projections,
)
from liminfo.geometry import QubitEmbedding, TheoryLevel, planar_rotation, random_pure_state, random_rotation
from liminfo.rng import make_stream


def test_ball_volumes():
    assert ball_volume(1) == pytest.approx(2.0, rel=1e-14)
    assert ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-14)
    assert ball_volume(3, 2.0) == pytest.approx(32 * math.pi / 3, rel=1e-14)
    assert math.isfinite(ball_volume(4000))


def test_density_examples():
    assert analytic_freq(0.0, 2) == pytest.approx(2 / math.pi, rel=1e-14)
    m = np.linspace(-1, 1, 41)
    assert np.allclose(analytic_freq(m, 3), 0.75 * (1 - m * m), atol=1e-14)
    assert analytic_freq(1.0, 7) == 0.0 and analytic_freq(-1.0, 2.5) == 0.0
    assert analytic_freq(0.9, 1) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        analytic_freq(1.1, 3)


@pytest.mark.parametrize("D", [1, 2, 3, 7, 4.5])
def test_density_normalization(D):
    for R in (1.0, 2.5):
        val, _ = integrate.quad(lambda m: analytic_freq(m, D, R), -R, R, epsabs=1e-13, epsrel=1e-13)
        assert abs(val - 1) < 1e-8


@pytest.mark.parametrize("D", [2, 3, 4.5, 7, 60])
def test_density_matches_volume_ratio(D):
    R = 1.3
    for m in np.linspace(-1.29, 1.29, 17):
        ratio = ball_volume(D - 1, math.sqrt(R * R - m * m)) / ball_volume(D, R)
        assert abs(analytic_freq(m, D, R) - ratio) < 1e-10


@pytest.mark.parametrize("D", [1, 2, 3, 7, 4.5])
def test_cdf_against_quadrature(D):
    for m in (-0.7, 0.0, 0.2, 0.95):
        val, _ = integrate.quad(lambda x: analytic_freq(x, D), -1, m, epsabs=1e-13)
        assert analytic_cdf(m, D) == pytest.approx(val, abs=1e-10)


def test_multi_axis_density():
    assert analytic_freq_multi([0.0, 0.0], 3) == pytest.approx(3 / (2 * math.pi), rel=1e-14)
    assert abs(analytic_freq_multi([0.3], 7) - analytic_freq(0.3, 7)) < 1e-12
    assert analytic_freq_multi([0.6, 0.8], 5) == 0.0
    with pytest.raises(ValueError):
        analytic_freq_multi([0.1, 0.1, 0.1], 3)
    with pytest.raises(ValueError):
        analytic_freq_multi([0.8, 0.8], 5)


def test_multi_axis_normalization():
    val, _ = integrate.dblquad(lambda y, x: analytic_freq_multi([x, y], 4),
                               -1, 1, lambda x: -math.sqrt(1 - x * x), lambda x: math.sqrt(1 - x * x))
    assert val == pytest.approx(1.0, abs=1e-8)


def test_one_dimensional_means_are_flat():
    h = sample_means(BallSampler(1, 1.0, make_stream(1)), [[1.0]], 100_000, bins=20)
    assert stats.chisquare(h.counts).pvalue > 1e-3


def test_three_dimensional_means_ks():
    proj = sample_projections(BallSampler(3, 1.0, make_stream(2)), np.eye(3)[:1], 1_000_000)
    assert ks_distance(proj, 3) < 0.002


def test_sampling_is_deterministic():
    a = sample_means(BallSampler(5, 1.0, make_stream(42)), np.eye(5)[:1], 300_000)
    b = sample_means(BallSampler(5, 1.0, make_stream(42)), np.eye(5)[:1], 300_000)
    assert np.array_equal(a.counts, b.counts)
    c = sample_means(BallSampler(5, 1.0, make_stream(43)), np.eye(5)[:1], 300_000)
    assert not np.array_equal(a.counts, c.counts)


@pytest.mark.parametrize("D", [1, 2, 3, 7, 15])
def test_sampler_uniform_in_ball(D):
    R = 2.0
    pts = BallSampler(D, R, make_stream(D)).sample(100_000)
    r = np.linalg.norm(pts, axis=1)
    assert r.max() <= R * (1 + 1e-12)
    assert stats.kstest((r / R) ** D, "uniform").pvalue > 1e-3
    # second moment of a single projection is R^2 / (D + 2)
    assert np.mean(pts[:, 0] ** 2) == pytest.approx(R * R / (D + 2), rel=0.03)


def test_histogram_merge_and_csv():
    s = BallSampler(3, 1.0, make_stream(0))
    h1 = histogram(s.sample(1000)[:, 0], 1.0, bins=11)
    h2 = histogram(s.sample(500)[:, 0], 1.0, bins=11)
    h = h1 + h2
    assert h.total == 1500
    back = MeanHistogram.from_csv(h.to_csv())
    assert np.array_equal(back.edges, h.edges) and np.array_equal(back.counts, h.counts)
    with pytest.raises(ValueError):
        h1 + histogram(np.zeros(3), 1.0, bins=5)


def test_two_axis_histogram_shape():
    h = sample_means(BallSampler(4, 1.0, make_stream(0)), np.eye(4)[:2], 10_000, bins=9)
    assert h.d == 2 and h.counts.shape == (9, 9) and h.total == 10_000
    with pytest.raises(ValueError):
        sample_means(BallSampler(4, 1.0, make_stream(0)), [[1, 1, 0, 0]], 10)


@pytest.mark.parametrize("D, lo, hi", [(3, 2.9, 3.1), (7, 6.8, 7.2)])
def test_fit_recovers_dimension(D, lo, hi):
    h = sample_means(BallSampler(D, 1.0, make_stream(100 + D)), np.eye(D)[:1], 1_000_000)
    fit = fit_dimension(h)
    assert lo <= fit.D_hat <= hi
    assert abs(fit.D_hat - D) < 5 * fit.stderr + 1e-9


@pytest.mark.parametrize("D", [0.7, 2, 3, 4.5, 7, 20])
def test_noiseless_fit(D):
    edges = np.linspace(-1, 1, 102)
    counts = np.rint(bin_probabilities(edges, D) * 1e15).astype(np.int64)
    fit = fit_dimension(MeanHistogram(edges, counts))
    assert abs(fit.D_hat - D) < 1e-6


def test_fit_rejects_degenerate_histograms():
    edges = np.linspace(-1, 1, 6)
    with pytest.raises(ValueError):
        fit_dimension(MeanHistogram(edges, np.array([0, 0, 10, 0, 0])))


def test_fit_stderr_scaling():
    errs = []
    for total in (10_000, 100_000, 1_000_000):
        h = sample_means(BallSampler(3, 1.0, make_stream(total)), np.eye(3)[:1], total)
        errs.append(fit_dimension(h).stderr)
    for big, small in zip(errs, errs[1:]):
        assert math.sqrt(10) / 1.5 <= big / small <= math.sqrt(10) * 1.5


def test_purity_constant_under_block_rotation():
    level = TheoryLevel(3)
    emb = QubitEmbedding(7, (0, 1, 2))
    rng = make_stream(4)
    n0 = emb.inject(random_pure_state(3, rng))
    trace = purity_drift(level, n0, emb.random_block(rng), 200, emb)
    assert np.abs(trace - 1).max() < 1e-10


def test_purity_planar_closed_form():
    level = TheoryLevel(3)
    emb = QubitEmbedding(7, (0, 1, 2))
    theta = 2 * math.pi / 24
    n0 = emb.inject([0.6, 0.0, 0.8])
    trace = purity_drift(level, n0, planar_rotation(7, 2, 3, theta), 100, emb)
    k = np.arange(1, 101)
    assert np.allclose(trace, np.sqrt(1 - 0.64 * np.sin(k * theta) ** 2), atol=1e-12)
    assert trace.min() == pytest.approx(0.6, abs=1e-12)
    # period 2 pi / theta = 24 steps
    assert np.allclose(trace[24:], trace[:-24], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_purity_bounds(seed):
    rng = make_stream(seed)
    emb = QubitEmbedding(15, (2, 5, 11))
    trace = purity_drift(TheoryLevel(4), random_pure_state(15, rng), random_rotation(15, rng), 30, emb)
    assert (trace >= 0).all() and (trace <= 1 + 1e-12).all()


def test_purity_dimension_mismatch():
    emb = QubitEmbedding(7, (0, 1, 2))
    with pytest.raises(ValueError):
        purity_drift(TheoryLevel(2), np.eye(7)[0], np.eye(7), 3, emb)


def test_disc_versus_half_disc():
    res = disc_halfdisc_demo(100_000, make_stream(8))
    assert res.single_axis_distance < 0.01
    assert res.two_axis_distance > 0.4
    ctrl = disc_halfdisc_demo(100_000, make_stream(8), control=True)
    assert ctrl.single_axis_distance < 0.01 and ctrl.two_axis_distance < 0.01
    with pytest.raises(ValueError):
        disc_halfdisc_demo(100, make_stream(0))
