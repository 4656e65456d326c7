"""Arithmetic in GF(2**N), 1 <= N <= 16.

Elements are integers whose bits are polynomial coefficients over GF(2).
Each N uses the lexicographically least irreducible polynomial of degree
N (x, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, ...).
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_DEGREE = 16


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    deg = p.bit_length() - 1
    if deg < 1:
        return False
    for q in range(2, 1 << (deg // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(N: int) -> int:
    if not 1 <= N <= MAX_DEGREE:
        raise ValueError(f"N must be in 1..{MAX_DEGREE}, got {N}")
    for p in range(1 << N, 1 << (N + 1)):
        if is_irreducible(p):
            return p
    raise AssertionError("unreachable: an irreducible polynomial exists for every degree")


class GF2n:
    """The field GF(2**N) with a fixed modulus."""

    def __init__(self, N: int):
        self.N = N
        self.modulus = least_irreducible(N)
        self.order = 1 << N
        self.dtype = np.uint8 if N <= 8 else np.uint16
        self._table = None
        if N <= 8:
            a = np.arange(self.order)
            self._table = self._vector_mul(a[:, None], a[None, :]).astype(self.dtype)

    def __repr__(self):
        return f"GF2n(N={self.N}, modulus={self.modulus:#x})"

    def _check(self, a: int):
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of GF(2^{self.N})")

    def _slow_mul(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self._table is not None:
            return int(self._table[a, b])
        return self._slow_mul(a, b)

    def _vector_mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for k in range(self.N):
            prod ^= np.where(b >> k & 1, a << k, 0)
        for k in range(2 * self.N - 2, self.N - 1, -1):
            prod ^= np.where(prod >> k & 1, self.modulus << (k - self.N), 0)
        return prod

    def mul_array(self, a, b) -> np.ndarray:
        """Elementwise product of two broadcastable integer arrays."""
        if self._table is not None:
            return self._table[np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp)]
        return self._vector_mul(a, b).astype(self.dtype)

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return self.pow(a, self.order - 2)

    def mul_table(self) -> np.ndarray:
        if self._table is None:
            raise ValueError(f"no cached table for N={self.N}; use mul_array")
        return self._table


@lru_cache(maxsize=None)
def field(N: int) -> GF2n:
    return GF2n(N)
