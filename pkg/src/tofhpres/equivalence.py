"""Equivalence of 3-qubit Toffoli-Hadamard circuits, Toffoli counts and
commutant-based minimality checks."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import tables
from .gates import SIGMA_1, SIGMA_D, Word, gate_matrix, standard_interpretation
from .matrix import GateMatrix, SdeClass, commutant_basis, commutes, mat_add, mat_mul, mat_scale, sde_class
from .presentation import format_word
from .schemas import _minimal_words

H = "H2"
DEBUG = False

_I = standard_interpretation()


def _sem(w: Sequence[str]) -> GateMatrix:
    return _I(w)


# --- pushing table -----------------------------------------------------------


@lru_cache(maxsize=None)
def _published_rules() -> dict[str, Word]:
    """Published H2 pushing rules H2 g = g' H2, keyed by g."""
    out = {}
    for r in tables.fig8():
        if len(r.lhs) == 2 and r.lhs[0] == H and r.rhs and r.rhs[-1] == H:
            out[r.lhs[1]] = r.rhs[:-1]
    return out


@lru_cache(maxsize=None)
def _definitions() -> dict[str, Word]:
    return {r.lhs[0]: r.rhs for r in tables.defining_relations()}


def expand_to_primitives(g: str) -> Word:
    """Unfold defining relations until only symbols with a published rule remain."""
    rules, defs = _published_rules(), _definitions()
    out: list[str] = []
    stack = [g]
    while stack:
        s = stack.pop()
        if s in rules:
            out.append(s)
        elif s in defs:
            stack.extend(reversed(defs[s]))
        else:
            raise KeyError(f"no pushing route for {s!r}")
    return tuple(out)


def expanded_push(g: str) -> Word:
    """H2 conjugate of g built only from the published rules."""
    rules = _published_rules()
    return tuple(t for s in expand_to_primitives(g) for t in rules[s])


@lru_cache(maxsize=None)
def pushing_table(compact: bool = True) -> dict[str, Word]:
    """For each g in Sigma_1 a word g' with [[H2 g]] = [[g' H2]].

    Published rules are used verbatim.  Other symbols use the expanded route;
    with ``compact`` its result is replaced by the shortest Sigma_1 word of
    the same matrix when one of length <= 3 exists.  Every entry is checked
    exactly against the expanded route and against H2 g H2.
    """
    rules = _published_rules()
    hm = gate_matrix(H)
    short = _minimal_words(3, SIGMA_1) if compact else {}
    table: dict[str, Word] = {}
    for g in SIGMA_1:
        target = mat_mul(mat_mul(hm, gate_matrix(g)), hm)
        if g in rules:
            entry = rules[g]
        else:
            entry = expanded_push(g)
            if _sem(entry) != target:
                raise AssertionError(f"expanded pushing route for {g} is unsound")
            entry = short.get(target, entry)
        if _sem(entry) != target:
            raise AssertionError(f"pushing entry for {g} is unsound")
        table[g] = entry
    return table


# --- normal form ---------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    body: Word
    h_exp: int

    def word(self) -> Word:
        return self.body + (H,) * self.h_exp

    def __str__(self) -> str:
        return f"{format_word(self.body)} ; H2^{self.h_exp}"


def normalize_h(w: Sequence[str], check: bool | None = None, compact: bool = True) -> NormalForm:
    """Push every H2 to the right end: [[w]] = [[body]] [[H2]]^h_exp with body over Sigma_1."""
    check = DEBUG if check is None else check
    table = pushing_table(compact)
    w = tuple(w)
    for s in w:
        if s != H and s not in table:
            raise ValueError(f"{s!r} is not a Sigma_2 symbol")
    # each body symbol remembers how many H2 had been passed when it was added
    stamped: list[tuple[str, int]] = []
    passed = 0
    for k in range(len(w) - 1, -1, -1):
        s = w[k]
        if s == H:
            passed += 1
        else:
            stamped.append((s, passed))
        if check:
            nf = _materialize(stamped, passed, table)
            if _sem(nf.word()) != _sem(w[k:]):
                raise AssertionError(f"normal form diverges at position {k}")
    return _materialize(stamped, passed, table)


def _materialize(stamped: list[tuple[str, int]], passed: int, table: dict[str, Word]) -> NormalForm:
    body: list[str] = []
    for s, at in reversed(stamped):
        if (passed - at) % 2:
            body.extend(table[s])
        else:
            body.append(s)
    return NormalForm(tuple(body), passed % 2)


@dataclass(frozen=True)
class Verdict:
    equal: bool
    witness_column: int | None = None
    h_exp: tuple[int, int] | None = None

    def __str__(self) -> str:
        if self.equal:
            return "equal"
        return f"unequal (column {self.witness_column} differs)"


def circuits_equal(w1: Sequence[str], w2: Sequence[str]) -> Verdict:
    """Exact matrix comparison, cross-checked against the normal forms' H2 parity."""
    m1, m2 = _sem(w1), _sem(w2)
    n1, n2 = normalize_h(w1), normalize_h(w2)
    if m1 == m2:
        if n1.h_exp != n2.h_exp:
            raise AssertionError("equal matrices with different H2 parity")
        return Verdict(True, None, (n1.h_exp, n2.h_exp))
    for j in range(m1.dim):
        if [m1.entry(i, j) for i in range(m1.dim)] != [m2.entry(i, j) for i in range(m2.dim)]:
            return Verdict(False, j, (n1.h_exp, n2.h_exp))
    raise AssertionError("unequal matrices with identical columns")


def h_parity(w: Sequence[str]) -> int:
    """H2 exponent forced by the matrix alone."""
    return 0 if sde_class(_sem(w)) is SdeClass.DyadicOrthogonal else 1


# --- Toffoli count --------------------------------------------------------------

TOFFOLI_BOUND = 120


@dataclass(frozen=True)
class ToffoliReport:
    count: int
    within_bound: bool


def toffoli_report(w: Sequence[str]) -> ToffoliReport:
    w = tuple(w)
    bad = [s for s in w if s not in SIGMA_D]
    if bad:
        raise ValueError(f"symbols {bad[:3]} are not in Sigma_D")
    count = sum(1 for s in w if s.startswith("CCX"))
    return ToffoliReport(count, count <= TOFFOLI_BOUND)


# --- minimality -------------------------------------------------------------------


def _block(b00: Sequence[Sequence[int]], b01: Sequence[Sequence[int]], b10: Sequence[Sequence[int]],
           b11: Sequence[Sequence[int]]) -> GateMatrix:
    top = np.hstack([np.array(b00, dtype=np.int64), np.array(b01, dtype=np.int64)])
    bottom = np.hstack([np.array(b10, dtype=np.int64), np.array(b11, dtype=np.int64)])
    return GateMatrix(np.vstack([top, bottom]), 0)


_ZERO4 = [[0] * 4 for _ in range(4)]

# Commutes with CX01, CCX12, K12 and CCZ but not with X0.
WITNESS_N = _block([[4, 2, 2, 0], [2, 1, 1, 0], [2, 1, 1, 0], [0, 0, 0, 0]], _ZERO4, _ZERO4, _ZERO4)

_L0 = [[1, 2, 2, 0], [2, 0, -1, 0], [2, -1, 0, 0], [0, 0, 0, -3]]
# Commutes with X0, CCX12 and TLK[0,1,2,3] but not with CX01.
WITNESS_L = _block(_L0, _ZERO4, _ZERO4, _L0)

SIGMA_K: tuple[str, ...] = ("X0", "CX01", "CCX12", "TLK[0,1,2,3]")
SIGMA_Z: tuple[str, ...] = ("X0", "CX01", "CCX12", "K12", "CCZ")


def separates(m: GateMatrix, sub: Sequence[GateMatrix], full: Sequence[GateMatrix]) -> bool:
    """m commutes with every matrix of sub and fails to commute with some matrix of full."""
    return all(commutes(m, a) for a in sub) and any(not commutes(m, g) for g in full)


def minimality_witness(
    sub: Sequence[GateMatrix],
    full: Sequence[GateMatrix],
    coeff_bound: int = 4,
    max_terms: int = 2,
) -> GateMatrix | None:
    """A matrix commuting with sub but not with some element of full outside sub.

    Candidates are commutant basis vectors, then integer combinations of up
    to ``max_terms`` of them.  None means nothing was found within bounds.
    """
    rest = [g for g in full if not any(g == a for a in sub)]
    if not rest or not sub:
        return None
    basis = commutant_basis(list(sub))
    coeffs = [c for c in range(-coeff_bound, coeff_bound + 1) if c]
    for terms in range(1, max_terms + 1):
        for idx in itertools.combinations(range(len(basis)), terms):
            for cs in itertools.product(coeffs, repeat=terms):
                if terms == 1 and cs[0] != 1:
                    continue
                m = mat_scale(basis[idx[0]], cs[0])
                for i, c in zip(idx[1:], cs[1:]):
                    m = mat_add(m, mat_scale(basis[i], c))
                if separates(m, sub, rest):
                    return m
    return None


# --- finite subgroup probe ----------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    order: int | None
    exceeded_cap: bool
    method: str
    orbit_size: int | None = None

    def __str__(self) -> str:
        if self.order is None:
            return f"ExceededCap ({self.method})"
        tag = " (above cap)" if self.exceeded_cap else ""
        return f"order {self.order}{tag} ({self.method})"


def closure_order(gens: Sequence[GateMatrix], cap: int) -> int | None:
    """Size of the generated group by breadth-first closure, or None past cap."""
    if not gens:
        return 1
    ident = GateMatrix.identity(gens[0].dim)
    seen = {ident}
    queue = deque([ident])
    while queue:
        m = queue.popleft()
        for g in gens:
            p = mat_mul(m, g)
            if p not in seen:
                seen.add(p)
                if len(seen) > cap:
                    return None
                queue.append(p)
    return len(seen)


def _reduce_vec(num: tuple[int, ...], k: int) -> tuple[tuple[int, ...], int]:
    while k >= 2 and all(x % 2 == 0 for x in num):
        num = tuple(x // 2 for x in num)
        k -= 2
    return num, k


def _orbit_permutations(gens: Sequence[GateMatrix], limit: int) -> tuple[list[list[int]], int] | None:
    """Generators as permutations of the orbit of the signed basis vectors."""
    dim = gens[0].dim
    mats = [[[int(x) for x in row] for row in g.num] for g in gens]
    start = []
    for i in range(dim):
        for s in (1, -1):
            start.append((tuple(s if j == i else 0 for j in range(dim)), 0))
    index: dict[tuple[tuple[int, ...], int], int] = {}
    order: list[tuple[tuple[int, ...], int]] = []
    for v in start:
        if v not in index:
            index[v] = len(order)
            order.append(v)
    images: list[list[int]] = [[] for _ in gens]
    pos = 0
    while pos < len(order):
        num, k = order[pos]
        for gi, (m, g) in enumerate(zip(mats, gens)):
            out = tuple(sum(m[r][c] * num[c] for c in range(dim)) for r in range(dim))
            v = _reduce_vec(out, k + g.k)
            if v not in index:
                if len(order) >= limit:
                    return None
                index[v] = len(order)
                order.append(v)
            images[gi].append(index[v])
        pos += 1
    return images, len(order)


BFS_LIMIT = 200_000


def finite_subgroup_probe(gens: Sequence[GateMatrix], cap: int, orbit_limit: int = 100_000) -> ProbeResult:
    """Order of the group generated by gens, if finite and computable within bounds.

    Small caps use breadth-first closure.  Otherwise the action on the orbit
    of the signed basis vectors is handed to Schreier-Sims; the action is
    faithful because the orbit spans the space.  When both routes apply they
    must agree.
    """
    if not gens:
        return ProbeResult(1, False, "closure")
    if cap <= BFS_LIMIT:
        n = closure_order(gens, cap)
        return ProbeResult(n, n is None, "closure")
    from sympy.combinatorics import Permutation, PermutationGroup

    perm = _orbit_permutations(gens, orbit_limit)
    if perm is None:
        return ProbeResult(None, True, "orbit")
    images, size = perm
    order = int(PermutationGroup([Permutation(img) for img in images]).order())
    if order <= BFS_LIMIT:
        check = closure_order(gens, BFS_LIMIT)
        if check != order:
            raise AssertionError(f"closure gives {check}, Schreier-Sims gives {order}")
    return ProbeResult(order, order > cap, "orbit+schreier-sims", size)
