"""State-space geometry of a level-s theory.

Pure states of a level-``s`` theory are unit vectors in ``D = 2**s - 1``
dimensions, mixed states fill the rest of the ball.  Each coordinate is
attached to one parity question about an ``s``-position black box.  A
question is stored as an integer mask whose bit ``x`` is set when
``f(x)`` enters the parity.

States and axes are plain read-only float64 arrays; the constructors here
only validate them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

NORM_TOL = 1e-12
DOT_TOL = 1e-9
ORTHO_TOL = 1e-10


class DimensionMismatch(ValueError):
    pass


class InvalidState(ValueError):
    pass


def canonical_masks(s: int) -> tuple[int, ...]:
    """Nonzero masks of ``s`` bits in canonical axis order.

    Sorted by Hamming weight, then by integer value with position 0 as the
    lowest bit.  For ``s = 3`` this is f(0), f(1), f(2), f(0)+f(1),
    f(0)+f(2), f(1)+f(2), f(0)+f(1)+f(2).
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    return tuple(sorted(range(1, 1 << s), key=lambda c: (c.bit_count(), c)))


def mask_from_bits(bits: str) -> int:
    """Parse a binary string with position 0 leftmost, e.g. '110' -> f(0)+f(1)."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a binary string: {bits!r}")
    return sum(1 << x for x, b in enumerate(bits) if b == "1")


def mask_to_bits(mask: int, s: int) -> str:
    return "".join("1" if mask >> x & 1 else "0" for x in range(s))


def mask_label(mask: int) -> str:
    """Human-readable parity, e.g. 'f(0)+f(2)'."""
    return "+".join(f"f({x})" for x in range(mask.bit_length()) if mask >> x & 1)


@dataclass(frozen=True)
class TheoryLevel:
    """Level ``s`` of the hierarchy: s=1 classical bit, s=2 qubit, s=3 D=7 ..."""

    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"s must be >= 1, got {self.s}")

    @property
    def D(self) -> int:
        return (1 << self.s) - 1

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return canonical_masks(self.s)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.masks)}

    def axis_index(self, mask: int) -> int:
        try:
            return self._index[mask]
        except KeyError:
            raise ValueError(f"mask {mask} is not a nonzero {self.s}-bit mask") from None

    def canonical_axis(self, mask: int) -> np.ndarray:
        e = np.zeros(self.D)
        e[self.axis_index(mask)] = 1.0
        return _frozen(e)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def state_vector(coords) -> np.ndarray:
    """Validate a (possibly mixed) state: norm at most 1."""
    n = np.array(coords, dtype=float).reshape(-1)
    norm = np.linalg.norm(n)
    if not np.isfinite(norm) or norm > 1 + NORM_TOL:
        raise InvalidState(f"state norm {norm} exceeds 1")
    return _frozen(n)


def axis(coords) -> np.ndarray:
    """Validate a measurement direction: unit norm."""
    m = np.array(coords, dtype=float).reshape(-1)
    norm = np.linalg.norm(m)
    if abs(norm - 1) > NORM_TOL:
        raise InvalidState(f"axis norm {norm} is not 1")
    return _frozen(m)


def rotation(matrix) -> np.ndarray:
    """Validate a proper rotation (orthogonal, det +1)."""
    R = np.array(matrix, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise DimensionMismatch(f"rotation must be square, got shape {R.shape}")
    if np.abs(R @ R.T - np.eye(len(R))).max(initial=0.0) > ORTHO_TOL:
        raise InvalidState("matrix is not orthogonal")
    if abs(np.linalg.det(R) - 1) > ORTHO_TOL:
        raise InvalidState("matrix does not have determinant +1")
    return _frozen(R)


def _check_dims(*arrays):
    dims = {a.shape[-1] for a in arrays}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimensions differ: {sorted(dims)}")


def measure_prob(n, m) -> float:
    """Probability of the outcome associated with axis ``m`` given state ``n``."""
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    _check_dims(n, m)
    dot = float(n @ m)
    if abs(dot) > 1 + DOT_TOL:
        raise InvalidState(f"|n.m| = {abs(dot)} > 1")
    p = 0.5 * (1 + dot)
    if -NORM_TOL <= p < 0:
        p = 0.0
    elif 1 < p <= 1 + NORM_TOL:
        p = 1.0
    return p


def collapse(n, m, outcome: int) -> np.ndarray:
    """Post-measurement state: the pole ``outcome * m``."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    _check_dims(n, m)
    return _frozen(m.copy() if outcome == 1 else -m)


def sample_outcome(n, m, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    p = measure_prob(n, m)
    outcome = 1 if rng.random() < p else -1
    return outcome, collapse(n, m, outcome)


def apply_rotation(R, n) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    n = np.asarray(n, dtype=float)
    if R.shape != (n.shape[-1], n.shape[-1]):
        raise DimensionMismatch(f"rotation {R.shape} cannot act on dimension {n.shape[-1]}")
    return _frozen(R @ n)


def random_rotation(D: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SO(D) (QR of a Gaussian matrix, sign-fixed)."""
    Q, r = np.linalg.qr(rng.standard_normal((D, D)))
    Q = Q * np.sign(np.diag(r))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def planar_rotation(D: int, i: int, j: int, theta: float) -> np.ndarray:
    """Rotation by ``theta`` in the (i, j) coordinate plane, identity elsewhere."""
    if i == j:
        raise ValueError("plane indices must differ")
    R = np.eye(D)
    c, s = np.cos(theta), np.sin(theta)
    R[i, i] = R[j, j] = c
    R[i, j], R[j, i] = -s, s
    return R


def random_pure_state(D: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(D)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class QubitEmbedding:
    """A qubit two-sphere sitting on three canonical axes of a D-space.

    Block rotations act as SO(3) on the chosen triple and as the identity
    on the remaining axes, so states injected here never leave it.
    """

    D: int
    triple: tuple[int, int, int]

    def __post_init__(self):
        if self.D < 3:
            raise ValueError(f"need D >= 3 to embed a qubit, got D={self.D}")
        if len(self.triple) != 3 or len(set(self.triple)) != 3:
            raise ValueError(f"axis triple must be three distinct indices, got {self.triple}")
        if not all(0 <= i < self.D for i in self.triple):
            raise ValueError(f"axis indices {self.triple} out of range for D={self.D}")

    @property
    def off_triple(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.D) if i not in self.triple)

    def inject(self, v3) -> np.ndarray:
        v3 = np.asarray(v3, dtype=float)
        if v3.shape != (3,):
            raise DimensionMismatch(f"expected a 3-vector, got shape {v3.shape}")
        out = np.zeros(self.D)
        out[list(self.triple)] = v3
        return _frozen(out)

    def project(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        if n.shape[-1] != self.D:
            raise DimensionMismatch(f"expected dimension {self.D}, got {n.shape[-1]}")
        return n[..., list(self.triple)]

    def block(self, R3) -> np.ndarray:
        R3 = np.asarray(R3, dtype=float)
        if R3.shape != (3, 3):
            raise DimensionMismatch(f"expected a 3x3 rotation, got shape {R3.shape}")
        R = np.eye(self.D)
        R[np.ix_(self.triple, self.triple)] = R3
        return R

    def random_block(self, rng: np.random.Generator) -> np.ndarray:
        return self.block(random_rotation(3, rng))


def qubit_embedding(level: TheoryLevel, axis_triple) -> QubitEmbedding:
    return QubitEmbedding(level.D, tuple(int(i) for i in axis_triple))
