"""Information measures over complete sets of complementary axes.

The information gained in one two-outcome measurement is taken from the
alpha-entropy family,

    I(p+, p-) = 1 - k (1 - p+**alpha - p-**alpha) / (alpha - 1),

and the information in a state is the sum over a complete orthonormal
frame.  With alpha = 2, k = 2 this is sum_j (n.m_j)**2 = |n|**2, which
does not depend on the frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DimensionMismatch, InvalidState, NORM_TOL, ORTHO_TOL, random_rotation


@dataclass(frozen=True)
class InfoMeasure:
    """Parameters of the alpha-entropy measure.

    ``k=None`` picks the value that makes a fair coin carry zero
    information, (alpha - 1) / (1 - 2**(1 - alpha)); this is 2 at
    alpha = 2 and tends to 1/ln 2 as alpha -> 1.  ``shannon=True`` selects
    the alpha -> 1 limit 1 - k H(p) with natural logarithms.
    """

    alpha: float = 2.0
    k: float | None = None
    shannon: bool = False

    def __post_init__(self):
        if self.shannon:
            return
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.alpha == 1:
            raise ValueError("alpha = 1 is singular; use InfoMeasure(shannon=True)")
        if self.k is not None and self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}")

    @classmethod
    def shannon_limit(cls, k: float | None = None) -> "InfoMeasure":
        return cls(alpha=1.0, k=k, shannon=True)

    @property
    def norm(self) -> float:
        if self.k is not None:
            return self.k
        if self.shannon:
            return 1 / math.log(2)
        return (self.alpha - 1) / (1 - 2 ** (1 - self.alpha))


QUADRATIC = InfoMeasure(alpha=2.0, k=2.0)


def single_info(p_plus, params: InfoMeasure = QUADRATIC):
    """Information (bits) in one measurement with outcome probabilities p, 1 - p."""
    p = np.asarray(p_plus, dtype=float)
    if ((p < 0) | (p > 1)).any():
        raise ValueError("probabilities must lie in [0, 1]")
    q = 1 - p
    k = params.norm
    if params.shannon:
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.where(p > 0, p * np.log(p), 0.0) - np.where(q > 0, q * np.log(q), 0.0)
        out = 1 - k * h
    else:
        a = params.alpha
        out = 1 - k * (1 - p**a - q**a) / (a - 1)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ComplementaryFrame:
    """D mutually orthogonal unit axes, stored as the rows of ``axes``."""

    axes: np.ndarray

    def __post_init__(self):
        A = np.array(self.axes, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"a complete frame needs D axes in D dimensions, got {A.shape}")
        norms = np.linalg.norm(A, axis=1)
        if np.abs(norms - 1).max() > NORM_TOL:
            raise InvalidState("frame axes must have unit norm")
        gram = A @ A.T
        if np.abs(gram - np.eye(len(A))).max() > ORTHO_TOL:
            raise InvalidState("frame axes must be mutually orthogonal")
        A.setflags(write=False)
        object.__setattr__(self, "axes", A)

    @property
    def D(self) -> int:
        return self.axes.shape[0]

    @classmethod
    def canonical(cls, D: int) -> "ComplementaryFrame":
        return cls(np.eye(D))

    def rotated(self, R) -> "ComplementaryFrame":
        return ComplementaryFrame(self.axes @ np.asarray(R).T)

    @classmethod
    def random(cls, D: int, rng: np.random.Generator) -> "ComplementaryFrame":
        return cls.canonical(D).rotated(random_rotation(D, rng))


def total_info(n, frame: ComplementaryFrame, params: InfoMeasure = QUADRATIC) -> float:
    n = np.asarray(n, dtype=float)
    if n.shape != (frame.D,):
        raise DimensionMismatch(f"state has dimension {n.shape[-1]}, frame has {frame.D}")
    p = np.clip(0.5 * (1 + frame.axes @ n), 0.0, 1.0)
    return float(np.sum(single_info(p, params)))


@dataclass(frozen=True)
class ScanResult:
    max_deviation: float
    base_info: float
    witness: ComplementaryFrame | None
    witness_info: float | None


def invariance_scan(n, params: InfoMeasure, trials: int, rng: np.random.Generator) -> ScanResult:
    """Largest change of total information over ``trials`` Haar-random frames.

    The frame attaining the largest deviation is kept as a witness.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    n = np.asarray(n, dtype=float)
    base = ComplementaryFrame.canonical(n.size)
    base_info = total_info(n, base, params)
    best, witness, witness_info = 0.0, None, None
    for _ in range(trials):
        frame = ComplementaryFrame.random(n.size, rng)
        info = total_info(n, frame, params)
        dev = abs(info - base_info)
        if witness is None or dev > best:
            best, witness, witness_info = dev, frame, info
    return ScanResult(best, base_info, witness, witness_info)
