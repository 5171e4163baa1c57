"""Permutations of basis indices acting on words of multi-level operators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gates import GateSymbol, Word, multilevel_valid, parse_symbol


@dataclass(frozen=True)
class Permutation:
    """Bijection i -> images[i] on range(n)."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"{list(self.images)} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, j: int, k: int, n: int) -> "Permutation":
        img = list(range(n))
        img[j], img[k] = img[k], img[j]
        return cls(tuple(img))

    @classmethod
    def from_cycle(cls, cycle: Sequence[int], n: int) -> "Permutation":
        """The cycle c0 -> c1 -> ... -> c_last -> c0."""
        img = list(range(n))
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            img[a] = b
        return cls(tuple(img))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        if self.n != other.n:
            raise ValueError("permutations of different degree")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __str__(self) -> str:
        return "perm " + " ".join(map(str, self.images))


def parse_permutation(text: str) -> Permutation:
    toks = text.split()
    if not toks or toks[0] != "perm":
        raise ValueError(f"expected 'perm i0 i1 ...', got {text!r}")
    return Permutation(tuple(int(t) for t in toks[1:]))


def reindex_symbol(sigma: Permutation, g: GateSymbol | str) -> GateSymbol:
    if isinstance(g, str):
        g = parse_symbol(g)
    if not g.is_multilevel:
        raise ValueError(f"{g} is not a multi-level operator")
    if any(p >= sigma.n for p in g.params):
        raise ValueError(f"{g} has an index outside range({sigma.n})")
    return GateSymbol(g.kind, tuple(sigma(p) for p in g.params))


def reindex_word(sigma: Permutation, w: Sequence[str]) -> Word:
    return tuple(str(reindex_symbol(sigma, s)) for s in w)


def reindex_valid(sigma: Permutation, w: Sequence[str]) -> bool:
    return all(multilevel_valid(reindex_symbol(sigma, s), sigma.n) for s in w)


def adjacent_transpositions(sigma: Permutation) -> list[int]:
    """Indices j with sigma = t_{j1} o t_{j2} o ... for t_j = (j j+1).

    Found by insertion sort on the image array.
    """
    img = list(sigma.images)
    swaps: list[int] = []
    for i in range(1, len(img)):
        j = i
        while j > 0 and img[j - 1] > img[j]:
            img[j - 1], img[j] = img[j], img[j - 1]
            swaps.append(j - 1)
            j -= 1
    # sigma o t_{s1} o ... o t_{sk} = id, so sigma = t_{sk} o ... o t_{s1}
    return swaps[::-1]


def permutation_word(sigma: Permutation) -> Word:
    """A word over adjacent two-level X operators whose matrix sends e_i to e_sigma(i)."""
    return tuple(f"TLX[{j},{j + 1}]" for j in adjacent_transpositions(sigma))


def conjugation_witness(sigma: Permutation, g: GateSymbol | str) -> Word:
    """Word v with [[v]] the matrix of sigma, so that [[sigma(g)]] = [[v g rev(v)]]."""
    if isinstance(g, str):
        g = parse_symbol(g)
    if not multilevel_valid(reindex_symbol(sigma, g), sigma.n):
        raise ValueError(f"{sigma} is not a valid reindexing for {g}")
    return permutation_word(sigma)
