"""Black-box oracles and the single-query protocol.

A black box with ``s`` positions holds a Boolean function ``f``.  Position
``x`` acts on a level-``s`` system by a diagonal +-1 rotation that flips
every axis whose parity mask contains ``x``.  The whole box is therefore
diagonal with entry ``(-1)**(c.f)`` on axis ``c``, and a system prepared
along axis ``c`` comes out along ``+-c`` carrying the answer to that
parity question with certainty.

Oracle diagonals are kept as integer arrays so the protocol is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .geometry import TheoryLevel, canonical_masks, mask_from_bits, mask_to_bits


def parity(mask: int, bits: int) -> int:
    return (mask & bits).bit_count() & 1


@dataclass(frozen=True)
class BooleanFunction:
    """``f: {0..s-1} -> {0,1}`` stored as the tuple ``(f(0), ..., f(s-1))``."""

    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("a black box needs at least one position")
        if any(v not in (0, 1) for v in self.values):
            raise ValueError(f"function values must be bits, got {self.values}")

    @property
    def s(self) -> int:
        return len(self.values)

    @property
    def index(self) -> int:
        """Table index j = 2**(s-1) f(0) + ... + f(s-1)."""
        j = 0
        for v in self.values:
            j = 2 * j + v
        return j

    @property
    def bits(self) -> int:
        """Integer with bit x equal to f(x); pairs with question masks."""
        return sum(v << x for x, v in enumerate(self.values))

    @classmethod
    def from_index(cls, s: int, j: int) -> "BooleanFunction":
        if not 0 <= j < 1 << s:
            raise ValueError(f"index {j} out of range for s={s}")
        return cls(tuple(j >> (s - 1 - x) & 1 for x in range(s)))

    @classmethod
    def from_bits(cls, bits: str) -> "BooleanFunction":
        """Parse '101' as f(0)=1, f(1)=0, f(2)=1."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a binary string: {bits!r}")
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def all(cls, s: int):
        return [cls.from_index(s, j) for j in range(1 << s)]

    def __str__(self):
        return "".join(map(str, self.values))


@dataclass(frozen=True)
class ParityQuestion:
    """Asks whether the parity of ``f`` over the positions in ``mask`` is ``a``."""

    s: int
    mask: int

    def __post_init__(self):
        if not 0 < self.mask < 1 << self.s:
            raise ValueError(f"mask must be a nonzero {self.s}-bit mask, got {self.mask}")

    @classmethod
    def from_bits(cls, bits: str) -> "ParityQuestion":
        return cls(len(bits), mask_from_bits(bits))

    def evaluate(self, f: BooleanFunction) -> int:
        return parity(self.mask, f.bits)

    def __str__(self):
        return mask_to_bits(self.mask, self.s)


@lru_cache(maxsize=None)
def _level(s: int) -> TheoryLevel:
    return TheoryLevel(s)


@lru_cache(maxsize=None)
def _mask_array(s: int) -> np.ndarray:
    a = np.array(canonical_masks(s), dtype=np.int64)
    a.setflags(write=False)
    return a


def _popcount_parity(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    p = np.zeros_like(a)
    while a.any():
        p ^= a & 1
        a >>= 1
    return p


def position_oracle(s: int, x: int) -> np.ndarray:
    """Diagonal of the rotation applied by an occupied position ``x``."""
    if not 0 <= x < s:
        raise ValueError(f"position {x} out of range for s={s}")
    masks = _mask_array(s)
    return 1 - 2 * (masks >> x & 1)


def black_box_transform(f: BooleanFunction) -> np.ndarray:
    """Diagonal of the full box: entry ``(-1)**(c.f)`` for each canonical mask ``c``."""
    return 1 - 2 * _popcount_parity(_mask_array(f.s) & f.bits)


@dataclass(frozen=True)
class QueryRecord:
    answer: int
    outcome: int
    probability: Fraction
    oracle_calls: int


def run_query(q: ParityQuestion, f: BooleanFunction) -> QueryRecord:
    """Prepare the +pole of axis ``q``, pass once through the box, measure along ``q``.

    Everything is integer arithmetic, so the outcome probability is exact.
    """
    if q.s != f.s:
        raise ValueError(f"question has s={q.s} but the box has s={f.s}")
    level = _level(q.s)
    state = np.zeros(level.D, dtype=np.int64)
    state[level.axis_index(q.mask)] = 1
    out = black_box_transform(f) * state
    dot = int(out @ state)
    prob_plus = Fraction(1 + dot, 2)
    outcome = 1 if prob_plus == 1 else -1
    prob = prob_plus if outcome == 1 else 1 - prob_plus
    return QueryRecord((1 - outcome) // 2, outcome, prob, oracle_calls=1)


def single_query(q: ParityQuestion, f: BooleanFunction) -> int:
    return run_query(q, f).answer


def classical_query(design: int, f: BooleanFunction, initial: int = 0) -> int:
    """A classical bit traversing the box.

    Position ``x`` flips the bit when it is occupied and bit ``x`` of
    ``design`` is set.  Returns the change of the bit, i.e. the parity of
    ``f`` over ``design``.
    """
    bit = initial
    for x in range(f.s):
        if design >> x & 1 and f.values[x]:
            bit ^= 1
    return bit ^ initial


def classical_answerable(design: int, s: int) -> list[int]:
    """Masks whose parity is a function of the classical readout, by exhaustion."""
    found = []
    fs = BooleanFunction.all(s)
    for c in canonical_masks(s):
        table: dict[int, int] = {}
        if all(table.setdefault(classical_query(design, f), parity(c, f.bits)) == parity(c, f.bits)
               for f in fs):
            found.append(c)
    return found


def query_capability(level: TheoryLevel, s_box: int) -> int:
    """Complementary questions about an ``s_box`` box that one level-``s`` system can answer.

    Beyond the qubit case this is an extrapolation: a smaller theory
    embedded in a larger sphere only reaches its own axes.
    """
    if s_box < 1:
        raise ValueError(f"s_box must be >= 1, got {s_box}")
    return min(level.D, (1 << s_box) - 1)
