"""Gate symbols, their exact matrices, and word interpretations.

Qubit 0 is the most significant bit of a basis index, so on three qubits
the basis state |x0 x1 x2> has index 4*x0 + 2*x1 + x2.  A word is read as a
left-to-right matrix product: the word ``a b`` denotes the matrix A @ B.

Token grammar::

    X0 X1 X2  Z0 Z1 Z2  H0 H1 H2     single-qubit gates
    K01 K02 K12                      H on both qubits
    CX01 CX10 ... CZ01 CZ02 CZ12     controlled X (control, target) / Z
    CCX01 CCX02 CCX12 CCZ            doubly controlled X (two controls) / Z
    SW01 SW02 SW12                   qubit swaps
    NEG[a] TLX[a,b] TLK[a,b,c,d]     one-, two- and four-level operators
    r1 ... r8                        Coxeter generators of W(E8)
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .lattice import SIMPLE_ROOTS, householder
from .matrix import GateMatrix, mat_mul, matrix_order

Word = tuple[str, ...]
QUBITS = 3
DIM = 8


class GateKind(enum.Enum):
    X1q = "X"
    Z1q = "Z"
    H1q = "H"
    Kpair = "K"
    CXctrl = "CX"
    CZctrl = "CZ"
    CCX = "CCX"
    CCZ = "CCZ"
    Swap = "SW"
    OneLevelNeg = "NEG"
    TwoLevelX = "TLX"
    FourLevelK = "TLK"
    Coxeter = "r"


MULTILEVEL = (GateKind.OneLevelNeg, GateKind.TwoLevelX, GateKind.FourLevelK)
_ARITY = {GateKind.OneLevelNeg: 1, GateKind.TwoLevelX: 2, GateKind.FourLevelK: 4}


@dataclass(frozen=True)
class GateSymbol:
    kind: GateKind
    params: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.kind in MULTILEVEL:
            return f"{self.kind.value}[{','.join(map(str, self.params))}]"
        return self.kind.value + "".join(map(str, self.params))

    @property
    def is_multilevel(self) -> bool:
        return self.kind in MULTILEVEL

    def support(self) -> frozenset[int]:
        """Qubits a circuit gate touches."""
        if self.kind in MULTILEVEL or self.kind is GateKind.Coxeter:
            raise ValueError(f"{self} has no qubit support")
        if self.kind is GateKind.CCZ:
            return frozenset(range(QUBITS))
        if self.kind is GateKind.CCX:
            return frozenset(range(QUBITS))
        return frozenset(self.params)


_MULTI_RE = re.compile(r"^(NEG|TLX|TLK)\[(\d+(?:,\d+)*)\]$")
_CIRCUIT_RE = re.compile(r"^(CCX|CCZ|CX|CZ|SW|X|Z|H|K|r)(\d*)$")


def parse_symbol(tok: str) -> GateSymbol:
    """Parse a token; multi-level index order is not validated here."""
    m = _MULTI_RE.match(tok)
    if m:
        kind = GateKind(m.group(1))
        params = tuple(int(x) for x in m.group(2).split(","))
        if len(params) != _ARITY[kind]:
            raise ValueError(f"{tok}: {kind.value} takes {_ARITY[kind]} indices")
        return GateSymbol(kind, params)
    m = _CIRCUIT_RE.match(tok)
    if not m:
        raise ValueError(f"unknown gate token {tok!r}")
    kind = GateKind(m.group(1))
    params = tuple(int(c) for c in m.group(2))
    if kind is GateKind.Coxeter:
        if len(m.group(2)) != 1 or not 1 <= params[0] <= 8:
            raise ValueError(f"unknown Coxeter generator {tok!r}")
        return GateSymbol(kind, params)
    arity = {
        GateKind.X1q: 1, GateKind.Z1q: 1, GateKind.H1q: 1, GateKind.Kpair: 2,
        GateKind.CXctrl: 2, GateKind.CZctrl: 2, GateKind.CCX: 2, GateKind.CCZ: 0,
        GateKind.Swap: 2,
    }[kind]
    if len(params) != arity or any(p >= QUBITS for p in params):
        raise ValueError(f"bad qubit indices in {tok!r}")
    if arity == 2 and params[0] == params[1]:
        raise ValueError(f"repeated qubit in {tok!r}")
    if kind in (GateKind.Kpair, GateKind.CZctrl, GateKind.CCX, GateKind.Swap) and params[0] > params[1]:
        raise ValueError(f"{tok!r}: write symmetric pairs in increasing order")
    return GateSymbol(kind, params)


def multilevel_valid(g: GateSymbol, n: int = DIM) -> bool:
    p = g.params
    return all(0 <= x < n for x in p) and all(a < b for a, b in zip(p, p[1:]))


def _bit(index: int, q: int) -> int:
    return (index >> (QUBITS - 1 - q)) & 1


def _flip(index: int, q: int) -> int:
    return index ^ (1 << (QUBITS - 1 - q))


def _perm_gate(f: Callable[[int], int]) -> GateMatrix:
    return GateMatrix.permutation([f(i) for i in range(DIM)])


def _diag_gate(sign: Callable[[int], int]) -> GateMatrix:
    return GateMatrix(np.diag([sign(i) for i in range(DIM)]).astype(np.int64), 0)


_H2x2 = GateMatrix([[1, 1], [1, -1]], 1)
_I2 = GateMatrix.identity(2)


def _hadamards(qubits: Iterable[int]) -> GateMatrix:
    from .matrix import mat_kron

    qs = set(qubits)
    out = None
    for q in range(QUBITS):
        f = _H2x2 if q in qs else _I2
        out = f if out is None else mat_kron(out, f)
    return out


def multilevel_matrix(g: GateSymbol, n: int = DIM) -> GateMatrix:
    if not multilevel_valid(g, n):
        raise ValueError(f"{g} is not a well-formed operator of dimension {n}")
    num = np.eye(n, dtype=np.int64)
    p = g.params
    if g.kind is GateKind.OneLevelNeg:
        num[p[0], p[0]] = -1
        return GateMatrix(num, 0)
    if g.kind is GateKind.TwoLevelX:
        a, b = p
        num[a, a] = num[b, b] = 0
        num[a, b] = num[b, a] = 1
        return GateMatrix(num, 0)
    # four-level H (x) H block, scaled by 1/2 = 1/sqrt2^2
    num *= 2
    block = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]
    for i, a in enumerate(p):
        for j, b in enumerate(p):
            num[a, b] = block[i][j]
    return GateMatrix(num, 2)


@lru_cache(maxsize=None)
def _gate_matrix(g: GateSymbol, qubits: int) -> GateMatrix:
    if g.kind in MULTILEVEL:
        return multilevel_matrix(g, 2**qubits)
    if qubits != QUBITS:
        raise ValueError("circuit gates are defined on 3 qubits")
    k, p = g.kind, g.params
    if k is GateKind.X1q:
        return _perm_gate(lambda i: _flip(i, p[0]))
    if k is GateKind.Z1q:
        return _diag_gate(lambda i: -1 if _bit(i, p[0]) else 1)
    if k is GateKind.H1q:
        return _hadamards(p)
    if k is GateKind.Kpair:
        return _hadamards(p)
    if k is GateKind.CXctrl:
        c, t = p
        return _perm_gate(lambda i: _flip(i, t) if _bit(i, c) else i)
    if k is GateKind.CZctrl:
        return _diag_gate(lambda i: -1 if _bit(i, p[0]) and _bit(i, p[1]) else 1)
    if k is GateKind.CCX:
        t = ({0, 1, 2} - set(p)).pop()
        return _perm_gate(lambda i: _flip(i, t) if _bit(i, p[0]) and _bit(i, p[1]) else i)
    if k is GateKind.CCZ:
        return _diag_gate(lambda i: -1 if i == DIM - 1 else 1)
    if k is GateKind.Swap:
        a, b = p

        def swap(i: int) -> int:
            if _bit(i, a) != _bit(i, b):
                return _flip(_flip(i, a), b)
            return i

        return _perm_gate(swap)
    if k is GateKind.Coxeter:
        return householder(SIMPLE_ROOTS[p[0] - 1])
    raise ValueError(f"no matrix for {g}")


def gate_matrix(g: GateSymbol | str, qubits: int = QUBITS) -> GateMatrix:
    if isinstance(g, str):
        g = parse_symbol(g)
    return _gate_matrix(g, qubits)


@dataclass(frozen=True)
class Interpretation:
    """Assignment of a matrix to each symbol of an alphabet."""

    mapping: Mapping[str, GateMatrix]
    injective_flag: bool = False
    dim: int = DIM

    def __post_init__(self) -> None:
        for s, m in self.mapping.items():
            if m.dim != self.dim:
                raise ValueError(f"image of {s} has dimension {m.dim}, expected {self.dim}")

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.mapping)

    def __call__(self, w: Sequence[str]) -> GateMatrix:
        return interp_word(self, w)


class _OpenMapping(Mapping[str, GateMatrix]):
    """Lazily resolves any token of the shared grammar."""

    def __init__(self, qubits: int):
        self.qubits = qubits

    def __getitem__(self, tok: str) -> GateMatrix:
        try:
            return gate_matrix(tok, self.qubits)
        except ValueError as exc:
            raise KeyError(tok) from exc

    def __contains__(self, tok: object) -> bool:
        if not isinstance(tok, str):
            return False
        try:
            self[tok]
        except KeyError:
            return False
        return True

    def __iter__(self):
        return iter(())

    def __len__(self) -> int:
        return 0


def standard_interpretation(symbols: Iterable[str] | None = None, injective: bool = False) -> Interpretation:
    """Interpretation by gate_matrix; with no symbols it accepts every token."""
    if symbols is None:
        return Interpretation(_OpenMapping(QUBITS), injective, DIM)
    return Interpretation({s: gate_matrix(s) for s in symbols}, injective, DIM)


class _LevelMapping(_OpenMapping):
    """Multi-level tokens on an n-dimensional space."""

    def __init__(self, n: int):
        self.n = n

    def __getitem__(self, tok: str) -> GateMatrix:
        try:
            g = parse_symbol(tok)
            if not g.is_multilevel:
                raise ValueError(tok)
            return multilevel_matrix(g, self.n)
        except ValueError as exc:
            raise KeyError(tok) from exc


def level_interpretation(n: int) -> Interpretation:
    """Standard matrices of NEG, TLX and TLK tokens acting on n levels."""
    if n == DIM:
        return standard_interpretation()
    return Interpretation(_LevelMapping(n), False, n)


def interp_word(i: Interpretation, w: Sequence[str]) -> GateMatrix:
    out = GateMatrix.identity(i.dim)
    for s in w:
        if s not in i.mapping:
            raise ValueError(f"unknown symbol {s!r}")
        out = mat_mul(out, i.mapping[s])
    return out


def word(text: str) -> Word:
    """Split a whitespace-separated token string; '.' or '' is the empty word."""
    toks = text.split()
    if toks == ["."]:
        return ()
    return tuple(toks)


# Sigma_D in generator-table order; ties in minimal-word searches use it.
SIGMA_D: tuple[str, ...] = (
    "X0", "X1", "X2", "Z0", "Z1", "Z2",
    "CX01", "CX02", "CX10", "CX12", "CX20", "CX21",
    "CZ01", "CZ02", "CZ12",
    "CCX01", "CCX02", "CCX12",
    "K01", "K12",
    "SW01", "SW02", "SW12",
)
SIGMA_0: tuple[str, ...] = ("X0", "CX01", "CCX12", "K12")
SIGMA_1: tuple[str, ...] = SIGMA_D + ("TLK[0,1,2,3]", "CCZ")
SIGMA_2: tuple[str, ...] = SIGMA_1 + ("H2",)
COXETER_GENERATORS: tuple[str, ...] = tuple(f"r{j}" for j in range(1, 9))


_COXETER_CIRCUITS = {
    1: "X0 X1 CCX01 X1 X0",
    2: "X0 CX21 CCX01 CX21 X0",
    3: "X0 CCX01 X0",
    4: "CX01 CX02 CCX12 CX02 CX01",
    5: "X1 CCX01 X1",
    6: "CX21 CCX01 CX21",
    7: "CZ01 CX21 CCX01 CX21 CZ01",
    8: "K12 X1 X2 CZ02 CCX12 CZ02 X2 X1 K12",
}


def coxeter_generator(j: int) -> GateMatrix:
    if not 1 <= j <= 8:
        raise ValueError("Coxeter generators are numbered 1..8")
    return householder(SIMPLE_ROOTS[j - 1])


def coxeter_circuit(j: int) -> Word:
    if not 1 <= j <= 8:
        raise ValueError("Coxeter generators are numbered 1..8")
    return word(_COXETER_CIRCUITS[j])


_CONSTRUCTION_DEFS: tuple[tuple[str, str], ...] = (
    ("w1", "r6 r7"),
    ("w2", "r6 r5 w1 r5 r6"),
    ("w3", "r5 r4 w2 r4 r5"),
    ("w4", "r4 r3 w3 r3 r4"),
    ("w5", "r3 r2 w4 r2 r3"),
    ("w6", "r2 r1 w5 r1 r2"),
    ("w7", "r7 r8 r6 w6 w4 w2 r8 w6 w4 w2 r6 r8 r7"),
    ("w8", "r1 r3 r5 w7"),
    ("w9", "r6 w7 w1 w7 r6"),
    ("w10", "r2 r6 w5 w3 r8 w2 w9 r8 w5 w3 w2 w9"),
    ("w11", "r3 r4 w8 r4 r3 w8"),
    ("w12", "r2 r6"),
    ("w13", "w11 w12 w11"),
    ("w14", "w10 w9 w10"),
)

# Verbatim variants that do not evaluate to their targets.
_PRINTED_DEFS: dict[str, str] = {
    "w10": "r2 r6 w5 w3 w2 r8 w9 r8 w5 w3 w2 w9",
    "w11": "w10 r4 w8 r4 w10 w8",
    "w14": "w12 x0 w10 x0 w12",
}


def construction_words(printed: bool = False) -> dict[str, Word]:
    """Words w1..w14 over r1..r8 with nested definitions expanded.

    With ``printed=True`` the words w10, w11 and w14 take their verbatim
    published form; those three fail to reach their targets.
    """
    w: dict[str, Word] = {f"r{j}": (f"r{j}",) for j in range(1, 9)}
    for name, body in _CONSTRUCTION_DEFS:
        if printed and name == "w14":
            # X0 enters the printed w14 through its defining word w13 w8 w13
            w["x0"] = w["w13"] + w["w8"] + w["w13"]
        text = _PRINTED_DEFS[name] if printed and name in _PRINTED_DEFS else body
        w[name] = tuple(s for part in text.split() for s in w[part])
    return {f"w{j}": w[f"w{j}"] for j in range(1, 15)}


# Targets under the qubit-0-most-significant convention.
CONSTRUCTION_TARGETS: dict[str, Word] = {
    "w7": ("CCX01",),
    "w8": ("X2",),
    "w10": ("K12",),
    "w11": ("SW01",),
    "w12": ("SW12",),
    "w13": ("SW02",),
    "w14": ("CX01",),
}

# Targets as published; w11 and w12 exchange the two swap labels.
PUBLISHED_TARGETS: dict[str, Word] = {
    **CONSTRUCTION_TARGETS,
    "w11": ("SW12",),
    "w12": ("SW01",),
}


def coxeter_orders() -> dict[tuple[int, int], int | None]:
    """Order of r_j r_k for 1 <= j <= k <= 8."""
    out = {}
    for j in range(1, 9):
        for k in range(j, 9):
            out[(j, k)] = matrix_order(mat_mul(coxeter_generator(j), coxeter_generator(k)), 64)
    return out
