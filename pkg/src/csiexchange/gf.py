"""Arithmetic and dense linear algebra over GF(2^m), 1 <= m <= 16.

Elements are integers in ``[0, 2^m)`` in polynomial-basis bit form.  Scalar
operations use shift-and-reduce; the array operations (``mul_array``,
``rank``, ``solve`` ...) go through log/antilog tables and act on numpy
integer arrays, which is the matrix type used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "DEFAULT_POLYS",
    "Field",
    "GF",
    "NoUniqueSolutionError",
    "is_irreducible",
]

# x^m + ... as bitmasks; m=8 is the AES polynomial
DEFAULT_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


class NoUniqueSolutionError(ArithmeticError):
    """Linear system is rank deficient or inconsistent."""


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division of a GF(2)[x] polynomial by every polynomial of degree <= deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


def _clmul_reduce(a: int, b: int, m: int, poly: int) -> int:
    result = 0
    top = 1 << m
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return result


@dataclass(frozen=True)
class Field:
    """GF(2^m) defined by an irreducible reduction polynomial."""

    m: int
    poly: int

    def __post_init__(self):
        if not 1 <= self.m <= 16:
            raise ValueError(f"field degree m must be in [1, 16], got {self.m}")
        if self.poly.bit_length() - 1 != self.m or not is_irreducible(self.poly):
            raise ValueError(f"{self.poly:#x} is not an irreducible polynomial of degree {self.m}")

    @property
    def q(self) -> int:
        return 1 << self.m

    def __repr__(self) -> str:
        return f"GF(2^{self.m}, poly={self.poly:#x})"

    # -- scalars -----------------------------------------------------------

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF({self.q})")
        return int(a)

    def add(self, a: int, b: int) -> int:
        return self._check(a) ^ self._check(b)

    sub = add

    def mul(self, a: int, b: int) -> int:
        return _clmul_reduce(self._check(a), self._check(b), self.m, self.poly)

    def pow(self, a: int, e: int) -> int:
        a = self._check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e:
            if e & 1:
                result = _clmul_reduce(result, a, self.m, self.poly)
            a = _clmul_reduce(a, a, self.m, self.poly)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        # a^(q-1) = 1
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- tables ------------------------------------------------------------

    @cached_property
    def generator(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        prime_factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self.pow(g, order // p) != 1 for p in prime_factors):
                return g
        raise AssertionError("multiplicative group of a finite field is cyclic")

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        order = self.q - 1
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = _clmul_reduce(x, self.generator, self.m, self.poly)
        exp[order:] = exp[:order]
        return exp, log

    # -- arrays ------------------------------------------------------------

    def asarray(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"array has entries outside GF({self.q})")
        return arr

    def random(self, shape, rng: np.random.Generator, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.q, size=shape, dtype=np.int64)

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        exp, log = self._tables
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse in a field")
        exp, log = self._tables
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product; ``b`` may be a vector."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0:
            out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        else:
            out = np.bitwise_xor.reduce(self.mul_array(a[:, :, None], b[None, :, :]), axis=1)
        return out[:, 0] if vec else out

    def _eliminate(self, stack: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Batched Gauss-Jordan elimination on the first ``ncols`` columns.

        Returns the reduced stack, the rank of each matrix, and a ``(batch, ncols)``
        table giving the pivot row of each column (-1 when the column has no pivot).
        """
        m = np.array(stack, dtype=np.int64, copy=True)
        batch, rows, cols = m.shape
        ncols = cols if ncols is None else ncols
        rank = np.zeros(batch, dtype=np.int64)
        pivots = np.full((batch, ncols), -1, dtype=np.int64)
        row_ids = np.arange(rows)
        for col in range(ncols):
            live = rank < rows
            if not live.any():
                break
            candidates = (m[:, :, col] != 0) & (row_ids[None, :] >= rank[:, None]) & live[:, None]
            has = candidates.any(axis=1)
            if not has.any():
                continue
            b = np.nonzero(has)[0]
            target = rank[b]
            src = np.argmax(candidates[b], axis=1)
            swap = m[b, src].copy()
            m[b, src] = m[b, target]
            pivot_rows = self.mul_array(swap, self.inv_array(swap[:, col])[:, None])
            m[b, target] = pivot_rows
            factors = m[b, :, col].copy()
            factors[np.arange(len(b)), target] = 0
            m[b] ^= self.mul_array(factors[:, :, None], pivot_rows[:, None, :])
            pivots[b, col] = target
            rank[b] += 1
        return m, rank, pivots

    def rank_batch(self, stack) -> np.ndarray:
        """Ranks of a ``(batch, rows, cols)`` stack of matrices."""
        stack = np.asarray(stack, dtype=np.int64)
        if stack.ndim != 3:
            raise ValueError("expected a 3-d stack of matrices")
        if stack.shape[1] == 0 or stack.shape[2] == 0:
            return np.zeros(stack.shape[0], dtype=np.int64)
        return self._eliminate(stack)[1]

    def rank(self, matrix) -> int:
        matrix = np.asarray(matrix, dtype=np.int64)
        if matrix.ndim != 2:
            raise ValueError("rank expects a 2-d matrix")
        return int(self.rank_batch(matrix[None])[0])

    def solve(self, a, b) -> np.ndarray:
        """Unique ``x`` with ``a @ x = b``; ``a`` must have full column rank.

        ``b`` may be a vector or a matrix of right-hand sides (one per column).
        """
        a = self.asarray(a)
        b = self.asarray(b)
        if a.ndim != 2:
            raise ValueError("coefficient matrix must be 2-d")
        vec = b.ndim == 1
        rhs = b[:, None] if vec else b
        rows, cols = a.shape
        if rhs.shape[0] != rows:
            raise ValueError(f"right-hand side has {rhs.shape[0]} rows, matrix has {rows}")
        if cols > rows:
            raise NoUniqueSolutionError(f"{rows}x{cols} system cannot have a unique solution")
        reduced, rank, pivots = self._eliminate(np.hstack([a, rhs])[None], ncols=cols)
        reduced, rank, pivots = reduced[0], int(rank[0]), pivots[0]
        if rank < cols:
            raise NoUniqueSolutionError(f"matrix has rank {rank} < {cols} columns")
        if np.any(reduced[rank:, cols:]):
            raise NoUniqueSolutionError("system is inconsistent")
        x = reduced[pivots, cols:]
        return x[:, 0] if vec else x


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


_FIELDS: dict[int, Field] = {}


def GF(m: int) -> Field:
    """The field GF(2^m) with the package's fixed reduction polynomial."""
    if m not in DEFAULT_POLYS:
        raise ValueError(f"field degree m must be in [1, 16], got {m}")
    if m not in _FIELDS:
        _FIELDS[m] = Field(m, DEFAULT_POLYS[m])
    return _FIELDS[m]
