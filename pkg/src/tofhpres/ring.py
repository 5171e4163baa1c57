"""Exact scalars of the form numer / sqrt(2)**sde.

Every entry of a three-qubit Toffoli-Hadamard operator can be written this
way with an integer numerator.  The canonical representative has the
smallest possible exponent: an even numerator with exponent >= 2 can always
be halved while the exponent drops by two.  The parity of the exponent is an
invariant of the value, so a nonzero value lies in the dyadic rationals
exactly when its canonical exponent is even.

Sums of values with exponents of different parity (for example 1 + 1/sqrt(2))
fall outside this representation and raise ``ValueError``; products of
Toffoli-Hadamard matrices never produce such sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, order=True)
class RingElem:
    numer: int
    sde: int = 0

    def __post_init__(self) -> None:
        if self.sde < 0:
            raise ValueError("sde must be non-negative")

    @classmethod
    def of(cls, numer: int, sde: int = 0) -> "RingElem":
        return canonicalize(cls(numer, sde))

    @classmethod
    def from_fraction(cls, q: Fraction | int) -> "RingElem":
        """Build from a rational whose denominator is a power of two."""
        q = Fraction(q)
        den = q.denominator
        j = den.bit_length() - 1
        if den != 1 << j:
            raise ValueError(f"{q} is not a dyadic rational")
        return canonicalize(cls(q.numerator, 2 * j))

    def is_zero(self) -> bool:
        return self.numer == 0

    def is_dyadic(self) -> bool:
        return canonicalize(self).sde % 2 == 0

    def to_fraction(self) -> Fraction:
        e = canonicalize(self)
        if e.sde % 2:
            raise ValueError(f"{e} is irrational")
        return Fraction(e.numer, 2 ** (e.sde // 2))

    def __float__(self) -> float:
        return self.numer / (2 ** (self.sde / 2))

    def __add__(self, other: "RingElem") -> "RingElem":
        return ring_add(self, other)

    def __sub__(self, other: "RingElem") -> "RingElem":
        return ring_add(self, ring_neg(other))

    def __mul__(self, other: "RingElem") -> "RingElem":
        return ring_mul(self, other)

    def __neg__(self) -> "RingElem":
        return ring_neg(self)

    def __str__(self) -> str:
        e = canonicalize(self)
        if e.sde == 0:
            return str(e.numer)
        return f"{e.numer}/sqrt2^{e.sde}"


ZERO = RingElem(0, 0)
ONE = RingElem(1, 0)


def canonicalize(e: RingElem) -> RingElem:
    numer, sde = e.numer, e.sde
    if numer == 0:
        return ZERO
    while sde >= 2 and numer % 2 == 0:
        numer //= 2
        sde -= 2
    if numer == e.numer and sde == e.sde:
        return e
    return RingElem(numer, sde)


def _align(a: RingElem, b: RingElem) -> tuple[int, int, int]:
    """Common exponent and rescaled numerators; raises when parities differ."""
    if a.numer == 0:
        return b.numer, 0, b.sde
    if b.numer == 0:
        return a.numer, 0, a.sde
    if (a.sde - b.sde) % 2:
        raise ValueError(f"sum of {a} and {b} is not of the form n/sqrt2^k")
    s = max(a.sde, b.sde)
    return a.numer << ((s - a.sde) // 2), b.numer << ((s - b.sde) // 2), s


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    x, y, s = _align(a, b)
    return canonicalize(RingElem(x + y, s))


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    return canonicalize(RingElem(a.numer * b.numer, a.sde + b.sde))


def ring_neg(a: RingElem) -> RingElem:
    return canonicalize(RingElem(-a.numer, a.sde))
