"""The E8 lattice, its roots, and Householder reflections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrix import GateMatrix


@dataclass(frozen=True, order=True)
class LatticeVector:
    """Eight coordinates stored doubled, so half-integers become odd ints."""

    doubled: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.doubled) != 8:
            raise ValueError("lattice vectors have 8 coordinates")
        if len({d % 2 for d in self.doubled}) > 1:
            raise ValueError("coordinates must be all integers or all half-integers")

    @classmethod
    def of(cls, coords: Sequence[Fraction | int | str]) -> "LatticeVector":
        doubled = []
        for c in coords:
            q = Fraction(c) * 2
            if q.denominator != 1:
                raise ValueError(f"coordinate {c} is not a multiple of 1/2")
            doubled.append(int(q))
        return cls(tuple(doubled))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(d, 2) for d in self.doubled)

    def dot(self, other: "LatticeVector") -> Fraction:
        return Fraction(sum(a * b for a, b in zip(self.doubled, other.doubled)), 4)

    def norm2(self) -> Fraction:
        return self.dot(self)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-d for d in self.doubled))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def e8_member(v: LatticeVector) -> bool:
    if len({d % 2 for d in v.doubled}) > 1:
        return False
    return sum(v.doubled) % 4 == 0


# Columns of the simple-root matrix; b_j is SIMPLE_ROOTS[j - 1].
_H = Fraction(-1, 2)
SIMPLE_ROOTS: tuple[LatticeVector, ...] = (
    LatticeVector.of([1, -1, 0, 0, 0, 0, 0, 0]),
    LatticeVector.of([0, 1, -1, 0, 0, 0, 0, 0]),
    LatticeVector.of([0, 0, 1, -1, 0, 0, 0, 0]),
    LatticeVector.of([0, 0, 0, 1, -1, 0, 0, 0]),
    LatticeVector.of([0, 0, 0, 0, 1, -1, 0, 0]),
    LatticeVector.of([0, 0, 0, 0, 0, 1, -1, 0]),
    LatticeVector.of([0, 0, 0, 0, 0, 1, 1, 0]),
    LatticeVector.of([_H] * 8),
)

COXETER_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 3, 2, 2, 2, 2, 2, 2),
    (3, 1, 3, 2, 2, 2, 2, 2),
    (2, 3, 1, 3, 2, 2, 2, 2),
    (2, 2, 3, 1, 3, 2, 2, 2),
    (2, 2, 2, 3, 1, 3, 3, 2),
    (2, 2, 2, 2, 3, 1, 2, 2),
    (2, 2, 2, 2, 3, 2, 1, 3),
    (2, 2, 2, 2, 2, 2, 3, 1),
)


def e8_roots() -> list[LatticeVector]:
    """All lattice vectors of squared norm 2, sorted."""
    roots = []
    # |doubled coord| <= 2 since the doubled squared norm is 8
    for d in itertools.product(range(-2, 3), repeat=8):
        if sum(x * x for x in d) != 8:
            continue
        if len({x % 2 for x in d}) > 1:
            continue
        v = LatticeVector(d)
        if e8_member(v):
            roots.append(v)
    return sorted(roots)


def _solve(columns: Sequence[LatticeVector], target: LatticeVector) -> list[Fraction]:
    """Exact coefficients c with sum_j c_j columns[j] = target."""
    n = len(columns)
    aug = [[columns[j].coords[i] for j in range(n)] + [target.coords[i]] for i in range(8)]
    row = 0
    where = [-1] * n
    for col in range(n):
        piv = next((r for r in range(row, 8) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("basis is not linearly independent")
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [x / p for x in aug[row]]
        for r in range(8):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        where[col] = row
        row += 1
    if any(aug[r][n] != 0 for r in range(row, 8)):
        raise ValueError("target outside the span of the basis")
    return [aug[where[j]][n] for j in range(n)]


def root_coefficients(basis: Sequence[LatticeVector], v: LatticeVector) -> list[Fraction]:
    if len(basis) != 8:
        raise ValueError("need 8 basis vectors")
    return _solve(basis, v)


def positive_roots(basis: Sequence[LatticeVector] = SIMPLE_ROOTS) -> list[LatticeVector]:
    out = []
    for r in e8_roots():
        coeffs = root_coefficients(basis, r)
        if all(c >= 0 for c in coeffs):
            out.append(r)
    return out


def householder(alpha: LatticeVector) -> GateMatrix:
    """Matrix of v -> v - 2<v,a>/<a,a> a."""
    n2 = alpha.norm2()
    if n2 == 0:
        raise ValueError("cannot reflect about the zero vector")
    a = alpha.coords
    rows = [
        [(1 if i == j else 0) - 2 * a[i] * a[j] / n2 for j in range(8)]
        for i in range(8)
    ]
    return GateMatrix.from_fractions(rows)


def apply(m: GateMatrix, v: LatticeVector) -> LatticeVector:
    """Image of a lattice vector; raises if the result leaves the half-lattice."""
    out = []
    for i in range(8):
        acc = Fraction(0)
        for j in range(8):
            e = m.entry(i, j)
            if e.numer:
                acc += e.to_fraction() * v.coords[j]
        out.append(acc)
    return LatticeVector.of(out)
