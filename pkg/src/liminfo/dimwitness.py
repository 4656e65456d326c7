"""Dimension witness: distribution of projected mean values of random ball states.

A state drawn uniformly from the D-ball of radius R has mean value
``m = n.x`` along a fixed axis ``x``.  Its density is

    F_D(m) = V_{D-1}(sqrt(R^2 - m^2)) / V_D(R)
           = (R^2 - m^2)**((D-1)/2) / (R^D B((D+1)/2, 1/2)),

so a histogram of ``m`` reveals D, which need not be an integer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special, stats

from .geometry import QubitEmbedding, TheoryLevel

DEFAULT_BINS = 101
CHUNK = 1 << 18
SAMPLER_ID = "gaussian-direction*R*u**(1/D)"


def log_ball_volume(D: float, R: float = 1.0) -> float:
    if D < 0 or R <= 0:
        raise ValueError(f"need D >= 0 and R > 0, got D={D}, R={R}")
    return 0.5 * D * math.log(math.pi) + D * math.log(R) - math.lgamma(0.5 * D + 1)


def ball_volume(D: float, R: float = 1.0) -> float:
    """Volume of the D-ball of radius R; D may be any non-negative real."""
    return math.exp(log_ball_volume(D, R))


def _log_beta(x: float, y: float) -> float:
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def analytic_freq(m, D: float, R: float = 1.0):
    """Density F_D(m) of the projected mean value."""
    if D <= 0 or R <= 0:
        raise ValueError(f"need D > 0 and R > 0, got D={D}, R={R}")
    m = np.asarray(m, dtype=float)
    if (np.abs(m) > R).any():
        raise ValueError(f"|m| must not exceed R={R}")
    log_norm = _log_beta(0.5 * D + 0.5, 0.5) + D * math.log(R)
    expo = 0.5 * (D - 1)
    if expo == 0:
        out = np.full(m.shape, math.exp(-log_norm))
    else:
        with np.errstate(divide="ignore"):
            out = np.exp(expo * np.log(R * R - m * m) - log_norm)
    return float(out) if out.ndim == 0 else out


def analytic_cdf(m, D: float, R: float = 1.0):
    """CDF of F_D: regularized incomplete beta in (1 + m/R)/2."""
    m = np.clip(np.asarray(m, dtype=float), -R, R)
    a = 0.5 * (D + 1)
    out = special.betainc(a, a, 0.5 * (1 + m / R))
    return float(out) if np.ndim(out) == 0 else out


def analytic_freq_multi(m_vec, D: float, R: float = 1.0) -> float:
    """Joint density of means along d orthonormal axes, V_{D-d}(r) / V_D(R)."""
    m_vec = np.atleast_1d(np.asarray(m_vec, dtype=float))
    d = m_vec.size
    if not d < D:
        raise ValueError(f"need d < D, got d={d}, D={D}")
    r2 = R * R - float(m_vec @ m_vec)
    if r2 < 0:
        raise ValueError("sum of squared means exceeds R^2")
    if r2 == 0:
        return 0.0
    return math.exp(log_ball_volume(D - d, math.sqrt(r2)) - log_ball_volume(D, R))


@dataclass
class BallSampler:
    """Uniform points in the closed D-ball of radius R."""

    D: int
    R: float
    rng: np.random.Generator

    def __post_init__(self):
        if self.D < 1 or self.R <= 0:
            raise ValueError(f"need D >= 1 and R > 0, got D={self.D}, R={self.R}")

    def sample(self, count: int) -> np.ndarray:
        v = self.rng.standard_normal((count, self.D))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        v *= self.R * self.rng.random(count)[:, None] ** (1.0 / self.D)
        return v


@dataclass
class MeanHistogram:
    """Histogram of projected means over [-R, R] along d axes (d-dimensional counts)."""

    edges: np.ndarray
    counts: np.ndarray
    d: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def R(self) -> float:
        return float(self.edges[-1])

    def __add__(self, other: "MeanHistogram") -> "MeanHistogram":
        if not np.array_equal(self.edges, other.edges) or self.d != other.d:
            raise ValueError("histograms have different binning")
        return MeanHistogram(self.edges, self.counts + other.counts, self.d, dict(self.meta))

    def to_csv(self) -> str:
        if self.d != 1:
            raise ValueError("CSV export is defined for single-axis histograms")
        lines = ["bin_lo,bin_hi,count"]
        for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts):
            lines.append(f"{float(lo)!r},{float(hi)!r},{int(c)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, meta: dict | None = None) -> "MeanHistogram":
        rows = [ln.split(",") for ln in text.strip().splitlines()]
        if not rows or rows[0] != ["bin_lo", "bin_hi", "count"]:
            raise ValueError("expected header 'bin_lo,bin_hi,count'")
        lo = [float(r[0]) for r in rows[1:]]
        hi = [float(r[1]) for r in rows[1:]]
        counts = np.array([int(r[2]) for r in rows[1:]], dtype=np.int64)
        if not lo or lo[1:] != hi[:-1]:
            raise ValueError("bins must be contiguous")
        edges = np.array(lo + hi[-1:])
        return cls(edges, counts, 1, dict(meta or {}))


def sample_projections(sampler: BallSampler, axes, count: int) -> np.ndarray:
    """Means ``n.x`` for ``count`` ball states along each of the given axes.

    Drawn in fixed-size chunks from independent child streams, so the result
    depends only on the sampler's seed and ``count``.
    """
    A = np.atleast_2d(np.asarray(axes, dtype=float))
    if A.shape[1] != sampler.D:
        raise ValueError(f"axes have dimension {A.shape[1]}, sampler has D={sampler.D}")
    if np.abs(A @ A.T - np.eye(len(A))).max() > 1e-10:
        raise ValueError("axes must be orthonormal")
    if count < 1:
        raise ValueError("count must be >= 1")
    n_chunks = -(-count // CHUNK)
    out = np.empty((count, len(A)))
    for i, child in enumerate(sampler.rng.spawn(n_chunks)):
        lo, hi = i * CHUNK, min(count, (i + 1) * CHUNK)
        pts = BallSampler(sampler.D, sampler.R, child).sample(hi - lo)
        out[lo:hi] = pts @ A.T
    return out


def histogram(proj: np.ndarray, R: float, bins: int = DEFAULT_BINS) -> MeanHistogram:
    proj = np.atleast_2d(np.asarray(proj, dtype=float).T).T
    d = proj.shape[1]
    edges = np.linspace(-R, R, bins + 1)
    counts, _ = np.histogramdd(proj, bins=[edges] * d)
    counts = counts.astype(np.int64)
    if d == 1:
        counts = counts.reshape(-1)
    return MeanHistogram(edges, counts, d)


def sample_means(sampler: BallSampler, axes, count: int, bins: int = DEFAULT_BINS) -> MeanHistogram:
    h = histogram(sample_projections(sampler, axes, count), sampler.R, bins)
    h.meta.update(D=sampler.D, R=sampler.R, d=h.d, samples=count, sampler=SAMPLER_ID)
    return h


def ks_distance(proj: np.ndarray, D: float, R: float = 1.0) -> float:
    """Kolmogorov-Smirnov distance between sample means and F_D."""
    return float(stats.kstest(np.ravel(proj), lambda m: analytic_cdf(m, D, R)).statistic)


# -- fitting ----------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    D_hat: float
    stderr: float
    log_likelihood: float
    bins: int
    samples: int

    def to_dict(self) -> dict:
        return {"D_hat": self.D_hat, "stderr": self.stderr, "log_likelihood": self.log_likelihood,
                "bins": self.bins, "samples": self.samples}


def bin_probabilities(edges, D: float, R: float = 1.0) -> np.ndarray:
    return np.diff(analytic_cdf(np.asarray(edges), D, R))


def _mean_loglik(D: float, edges, freq, R: float) -> float:
    p = bin_probabilities(edges, D, R)
    used = freq > 0
    with np.errstate(divide="ignore"):
        return float(freq[used] @ np.log(p[used]))


def fit_dimension(h: MeanHistogram, R: float | None = None,
                  bounds: tuple[float, float] = (0.05, 2000.0)) -> FitResult:
    """Maximum binned multinomial likelihood of F_D over real D > 0."""
    if h.d != 1:
        raise ValueError("fit_dimension needs a single-axis histogram")
    R = h.R if R is None else R
    counts = np.asarray(h.counts, dtype=float)
    total = counts.sum()
    if total <= 0 or np.count_nonzero(counts) < 2:
        raise ValueError("histogram is degenerate: need mass in at least two bins")
    freq = counts / total

    def neg(logD):
        return -_mean_loglik(math.exp(logD), h.edges, freq, R)

    lo, hi = map(math.log, bounds)
    grid = np.linspace(lo, hi, 60)
    vals = [neg(g) for g in grid]
    i = int(np.argmin(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(neg, bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-12, "maxiter": 500})
    D_hat = math.exp(res.x)

    # observed information from a central second difference in D
    step = 1e-3 * D_hat
    f0 = _mean_loglik(D_hat, h.edges, freq, R)
    fp = _mean_loglik(D_hat + step, h.edges, freq, R)
    fm = _mean_loglik(D_hat - step, h.edges, freq, R)
    curv = -(fp - 2 * f0 + fm) / step**2 * total
    stderr = 1 / math.sqrt(curv) if curv > 0 else math.inf
    return FitResult(D_hat, stderr, float(f0 * total), len(counts), int(total))


# -- purity drift -----------------------------------------------------------

def purity_drift(level: TheoryLevel, n0, R, steps: int, embedding: QubitEmbedding) -> np.ndarray:
    """Length of the qubit-projected state after each of ``steps`` applications of R."""
    n = np.asarray(n0, dtype=float)
    R = np.asarray(R, dtype=float)
    if n.shape != (level.D,) or R.shape != (level.D, level.D) or embedding.D != level.D:
        raise ValueError(f"state, rotation and embedding must all have D={level.D}")
    trace = np.empty(steps)
    for t in range(steps):
        n = R @ n
        trace[t] = np.linalg.norm(embedding.project(n))
    return trace


# -- disc versus half disc --------------------------------------------------

def sample_disc(count: int, rng: np.random.Generator, R: float = 1.0) -> np.ndarray:
    return BallSampler(2, R, rng).sample(count)


def sample_half_disc(count: int, rng: np.random.Generator, R: float = 1.0) -> np.ndarray:
    """Uniform on the half of the disc with y >= 0 (reflection of a disc sample)."""
    pts = sample_disc(count, rng, R)
    pts[:, 1] = np.abs(pts[:, 1])
    return pts


def total_variation(a: np.ndarray, b: np.ndarray, bins: int, R: float = 1.0) -> float:
    edges = [np.linspace(-R, R, bins + 1)] * a.shape[1]
    ha, _ = np.histogramdd(a, bins=edges)
    hb, _ = np.histogramdd(b, bins=edges)
    return 0.5 * float(np.abs(ha / ha.sum() - hb / hb.sum()).sum())


@dataclass(frozen=True)
class DiscComparison:
    single_axis_distance: float
    two_axis_distance: float


def disc_halfdisc_demo(samples: int, rng: np.random.Generator, bins: int = 2,
                       control: bool = False) -> DiscComparison:
    """Compare a disc with a half disc (or, with ``control``, with another disc).

    Returns the two-sample KS distance of the x projections and the total
    variation distance of the binned (x, y) points.  The default 2 x 2 grid
    puts a bin edge on the cut line y = 0.
    """
    if samples < 10_000:
        raise ValueError("need at least 10^4 samples")
    ra, rb = rng.spawn(2)
    a = sample_disc(samples, ra)
    b = sample_disc(samples, rb) if control else sample_half_disc(samples, rb)
    ks = float(stats.ks_2samp(a[:, 0], b[:, 0]).statistic)
    return DiscComparison(ks, total_variation(a, b, bins))
