"""Dense exact matrices M / sqrt(2)**k with an integer matrix M.

A matrix is stored with a single exponent shared by all entries.  The
canonical form halves M and lowers k by two while every entry of M is even,
so two matrices are equal exactly when their canonical pairs coincide.
Numerators are kept in ``int64`` arrays while the values are small enough for
overflow-free products and fall back to Python integers otherwise.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .ring import RingElem, canonicalize

_SAFE = 1 << 62


class SdeClass(enum.Enum):
    DyadicOrthogonal = "DyadicOrthogonal"
    RootTwoResidue = "RootTwoResidue"


def _pack(arr: np.ndarray) -> np.ndarray:
    """Return an int64 array when every entry fits, else an object array."""
    if arr.dtype == np.int64:
        return arr
    if arr.size == 0:
        return arr.astype(np.int64)
    lo, hi = min(arr.flat), max(arr.flat)
    if -_SAFE < lo and hi < _SAFE:
        return arr.astype(np.int64)
    return arr.astype(object)


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == np.int64:
        return int(np.abs(arr).max())
    return max(abs(int(x)) for x in arr.flat)


def _all_even(arr: np.ndarray) -> bool:
    if arr.dtype == np.int64:
        return not (arr & 1).any()
    return all(int(x) % 2 == 0 for x in arr.flat)


def _reduce(num: np.ndarray, k: int) -> tuple[np.ndarray, int]:
    num = _pack(num)
    if not num.any():
        return np.zeros(num.shape, dtype=np.int64), 0
    while k >= 2 and _all_even(num):
        num = num // 2
        k -= 2
    return _pack(num), k


class GateMatrix:
    """Immutable square matrix with exact entries num / sqrt(2)**k."""

    __slots__ = ("num", "k", "_key")

    def __init__(self, num: np.ndarray | Sequence[Sequence[int]], k: int = 0):
        arr = np.array(num, dtype=object) if not isinstance(num, np.ndarray) else num
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        if k < 0:
            raise ValueError("exponent must be non-negative")
        arr, k = _reduce(arr, k)
        arr.setflags(write=False)
        self.num = arr
        self.k = k
        if arr.dtype == np.int64:
            self._key = (arr.shape[0], k, arr.tobytes())
        else:
            self._key = (arr.shape[0], k, tuple(int(x) for x in arr.flat))

    @property
    def dim(self) -> int:
        return self.num.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "GateMatrix":
        return cls(np.eye(dim, dtype=np.int64), 0)

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[RingElem]]) -> "GateMatrix":
        elems = [[canonicalize(e) for e in row] for row in rows]
        nonzero = [e for row in elems for e in row if e.numer]
        if not nonzero:
            return cls(np.zeros((len(elems), len(elems)), dtype=np.int64), 0)
        if len({e.sde % 2 for e in nonzero}) > 1:
            raise ValueError("entries mix dyadic and sqrt2-odd values")
        k = max(e.sde for e in nonzero)
        num = np.array(
            [[e.numer << ((k - e.sde) // 2) if e.numer else 0 for e in row] for row in elems],
            dtype=object,
        )
        return cls(num, k)

    @classmethod
    def from_fractions(cls, rows: Sequence[Sequence[Fraction | int]]) -> "GateMatrix":
        return cls.from_entries([[RingElem.from_fraction(x) for x in row] for row in rows])

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "GateMatrix":
        """Matrix sending basis vector e_i to e_images[i]."""
        n = len(images)
        num = np.zeros((n, n), dtype=np.int64)
        for i, j in enumerate(images):
            num[j, i] = 1
        return cls(num, 0)

    def entry(self, i: int, j: int) -> RingElem:
        return canonicalize(RingElem(int(self.num[i, j]), self.k))

    def entries(self) -> list[list[RingElem]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def to_float(self) -> np.ndarray:
        return self.num.astype(float) / (2.0 ** (self.k / 2))

    def transpose(self) -> "GateMatrix":
        return GateMatrix(self.num.T.copy(), self.k)

    def column(self, j: int) -> list[RingElem]:
        return [self.entry(i, j) for i in range(self.dim)]

    def key(self) -> tuple:
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return mat_mul(self, other)

    def __neg__(self) -> "GateMatrix":
        return GateMatrix(-self.num, self.k)

    def __repr__(self) -> str:
        return f"GateMatrix(dim={self.dim}, k={self.k})"

    def __str__(self) -> str:
        rows = [" ".join(f"{str(e):>10}" for e in row) for row in self.entries()]
        return "\n".join(rows)


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    if a.dtype == np.int64 and b.dtype == np.int64 and _maxabs(a) * _maxabs(b) * n < _SAFE:
        return a @ b
    return np.dot(a.astype(object), b.astype(object))


def mat_mul(a: GateMatrix, b: GateMatrix) -> GateMatrix:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return GateMatrix(_int_matmul(a.num, b.num), a.k + b.k)


def mat_product(mats: Iterable[GateMatrix], dim: int) -> GateMatrix:
    return reduce(mat_mul, mats, GateMatrix.identity(dim))


def mat_kron(a: GateMatrix, b: GateMatrix) -> GateMatrix:
    return GateMatrix(np.kron(a.num.astype(object), b.num.astype(object)), a.k + b.k)


def mat_eq(a: GateMatrix, b: GateMatrix) -> bool:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return a == b


def _scaled(a: GateMatrix, k: int) -> np.ndarray:
    shift = k - a.k
    if shift % 2:
        raise ValueError("matrices mix dyadic and sqrt2-odd exponents")
    return a.num.astype(object) * (2 ** (shift // 2))


def mat_add(a: GateMatrix, b: GateMatrix) -> GateMatrix:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if not a.num.any():
        return b
    if not b.num.any():
        return a
    k = max(a.k, b.k)
    return GateMatrix(_scaled(a, k) + _scaled(b, k), k)


def mat_scale(a: GateMatrix, c: int) -> GateMatrix:
    return GateMatrix(a.num.astype(object) * c, a.k)


def is_orthogonal(a: GateMatrix) -> bool:
    return mat_mul(a.transpose(), a) == GateMatrix.identity(a.dim)


def commutes(a: GateMatrix, b: GateMatrix) -> bool:
    return mat_mul(a, b) == mat_mul(b, a)


def sde_class(a: GateMatrix) -> SdeClass:
    return SdeClass.DyadicOrthogonal if a.k % 2 == 0 else SdeClass.RootTwoResidue


def _nullspace(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer basis of the rational nullspace, one vector per free column."""
    work = [r[:] for r in rows if any(r)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        p = prow[col]
        for i in range(len(work)):
            if i == rank or not work[i][col]:
                continue
            f = work[i][col]
            row = [p * x - f * y for x, y in zip(work[i], prow)]
            g = reduce(gcd, row, 0)
            work[i] = [x // g for x in row] if g > 1 else row
        pivots.append(col)
        rank += 1
        work = work[:rank] + [r for r in work[rank:] if any(r)]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = Fraction(-work[r][f], work[r][pc])
        den = reduce(lambda x, y: x * y // gcd(x, y), (v.denominator for v in vec), 1)
        ints = [int(v * den) for v in vec]
        g = reduce(gcd, ints, 0)
        basis.append([x // g for x in ints])
    return basis


def commutant_basis(mats: Sequence[GateMatrix]) -> list[GateMatrix]:
    """Integer basis of {M : M A = A M for every A in mats}.

    Basis vectors are ordered by the row-major position of their free
    variable in the reduced system.
    """
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].dim
    if any(a.dim != n for a in mats):
        raise ValueError("matrices differ in dimension")
    rows: list[list[int]] = []
    seen: set[tuple[int, ...]] = set()
    for a in mats:
        # the common scalar 1/sqrt2^k cancels from M A - A M
        an = [[int(x) for x in r] for r in a.num]
        for r in range(n):
            for c in range(n):
                row = [0] * (n * n)
                for t in range(n):
                    row[r * n + t] += an[t][c]
                    row[t * n + c] -= an[r][t]
                key = tuple(row)
                if any(row) and key not in seen:
                    seen.add(key)
                    rows.append(row)
    basis = _nullspace(rows, n * n)
    return [GateMatrix(np.array(v, dtype=object).reshape(n, n), 0) for v in basis]


def matrix_order(a: GateMatrix, bound: int = 1000) -> int | None:
    """Least m >= 1 with a^m = I, or None if none up to bound."""
    ident = GateMatrix.identity(a.dim)
    p = a
    for m in range(1, bound + 1):
        if p == ident:
            return m
        p = mat_mul(p, a)
    return None
