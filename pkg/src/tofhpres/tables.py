"""Fixed relation tables and circuit abbreviations for multi-level operators."""

from __future__ import annotations

from functools import lru_cache

from .gates import (
    COXETER_GENERATORS,
    GateKind,
    Word,
    coxeter_circuit,
    construction_words,
    parse_symbol,
    word,
)
from .lattice import COXETER_MATRIX
from .presentation import Relation, formal_reverse, parse_word
from .reindex import Permutation, permutation_word

# Relations over Sigma_D; the first 19 define the derived generators.
_R0_TEXT = """\
CZ01 = K12 CX01 K12
X1 = CX01 X0 CX01 X0
Z0 = CZ01 CX01 CZ01 CX01
Z1 = K12 X1 K12
CX20 = X1 CCX12 X1 CCX12
CX21 = CX20 CX01 CX20 CX01
CX12 = K12 CX21 K12
SW12 = CX12 CX21 CX12
CX02 = SW12 CX01 SW12
SW02 = CX02 CX20 CX02
K01 = SW02 K12 SW02
CX10 = K01 CX01 K01
SW01 = CX01 CX10 CX01
CCX02 = SW01 CCX12 SW01
X2 = SW02 X0 SW02
Z2 = SW02 Z0 SW02
CCX01 = K12 CCX02 K12
CZ02 = SW12 CZ01 SW12
CZ12 = SW01 CZ02 SW01
SW12 = CZ12 K12 CZ12 K12 CZ12 K12
X0 X0 = .
CX01 CX01 = .
K12 K12 = .
CCX12 CCX12 = .
K01 K01 = .
CX12 X0 = X0 CX12
X0 K12 = K12 X0
X1 = SW01 X0 SW01
CX20 = SW02 CX02 SW02
CX12 = SW01 CX02 SW01
CX21 = SW01 CX20 SW01
CCX01 = SW02 CCX12 SW02
CCX01 = SW12 CCX02 SW12
Z1 = SW01 Z0 SW01
K01 = SW01 K01 SW01
CCX12 CX10 = CX10 CCX12
X0 CCX12 = CCX12 X0
X0 CX10 = CX10 X0
K01 K12 = K12 K01
CZ01 CZ12 = CZ12 CZ01
K01 Z0 = X0 K01
X0 CCX01 = CCX01 CX12 X0
CX01 CZ12 = CZ12 CZ02 CX01
CX12 CCX12 = CCX12 CX10 CX12
CCX12 CX01 = CX01 CCX02 CCX12 CCX02
CCX01 CCX02 = CCX02 CCX01 CCX02 CCX01
"""

DEFINING_COUNT = 19

# Published forms that are not sound; the table above carries the repair.
R0_PUBLISHED_ERRATA: dict[str, str] = {
    "fig4.eq33": "CCX01 = SW12 CCX02 SW02",
}

_FIG7_TEXT = """\
NEG[0] NEG[0] = .
TLK[0,1,2,3] TLK[0,1,2,3] = .
TLX[1,2] NEG[0] = NEG[0] TLX[1,2]
TLX[2,3] NEG[0] = NEG[0] TLX[2,3]
TLX[3,4] NEG[0] = NEG[0] TLX[3,4]
TLX[4,5] NEG[0] = NEG[0] TLX[4,5]
TLX[5,6] NEG[0] = NEG[0] TLX[5,6]
TLX[6,7] NEG[0] = NEG[0] TLX[6,7]
TLX[4,5] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[4,5]
TLX[5,6] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[5,6]
TLX[6,7] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[6,7]
NEG[4] TLK[0,1,2,3] = TLK[0,1,2,3] NEG[4]
NEG[0] NEG[4] = NEG[4] NEG[0]
TLK[0,1,2,3] TLK[4,5,6,7] = TLK[4,5,6,7] TLK[0,1,2,3]
TLX[0,1] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[1,3] NEG[1] NEG[3]
TLX[1,2] TLK[0,1,2,3] = NEG[0] TLK[0,1,2,3] NEG[0] TLK[0,1,2,3] NEG[0]
TLX[2,3] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[1,3]
TLK[0,1,2,3] TLK[1,3,4,5] = TLK[1,3,4,5] TLK[0,1,2,3]
NEG[0] NEG[4] TLX[0,4] RHO = RHO TLX[0,4] NEG[4] NEG[0]
"""

FIG7_PUBLISHED_ERRATA: dict[str, str] = {
    "fig7.eq15": "TLX[0,1] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[0,1] NEG[1] NEG[3]",
}

# Unsound under the four-level K block (H (x) H); no short repair exists.
KNOWN_UNSOUND: frozenset[str] = frozenset({"fig7.eq18"})

_RHO = "TLK[4,5,6,7] TLK[0,1,2,3] TLX[3,4] TLK[0,1,2,3] TLK[4,5,6,7]"

_FIG8 = (
    ("fig8.g21", "H2 X0", "X0 H2"),
    ("fig8.g22", "H2 CX01", "CX01 H2"),
    ("fig8.g23", "H2 CCX12", "K01 K12 CCZ K12 K01 H2"),
    ("fig8.g24", "H2 CCZ", "CCX01 H2"),
    ("fig8.g25", "H2 K12", "K12 H2"),
    ("fig8.g25a", "H2 TLK[0,1,2,3]", "TLK[0,1,2,3] H2"),
    ("fig8.g26", "H2 H2", "."),
)

# Adjacent two-level X operators as circuits; TLX[6,7] is CCX01 itself.
ADJACENT_X_CIRCUITS: dict[str, str] = {
    "TLX[0,1]": "X0 X1 CCX01 X1 X0",
    "TLX[1,2]": "X0 CCX01 CCX02 CCX01 X0",
    "TLX[2,3]": "X0 CCX01 X0",
    "TLX[3,4]": "X0 X2 CCX01 X0 CCX12 CCX02 CCX12 X0 CCX01 X2 X0",
    "TLX[4,5]": "X1 CCX01 X1",
    "TLX[5,6]": "CCX01 CCX02 CCX01",
    "TLX[6,7]": "CCX01",
}

# One-level sign flip on basis index 0 as a circuit (all three qubits negated).
NEG0_CIRCUIT = "X0 X1 X2 CCZ X2 X1 X0"
NEG0_PUBLISHED = "X0 X1 CCZ X1 X0"

# Single-gate decompositions over multi-level operators.
_MULTILEVEL_DEFS = (
    ("abbr.rX", "X0", "TLX[0,4] TLX[1,5] TLX[2,6] TLX[3,7]"),
    ("abbr.rCX", "CX01", "TLX[4,6] TLX[5,7]"),
    ("abbr.rK", "K12", "TLK[4,5,6,7] X0 TLK[4,5,6,7] X0"),
)
MULTILEVEL_PUBLISHED_ERRATA: dict[str, str] = {
    "abbr.rCX": "CX01 = TLX[2,6] TLX[3,7]",
}

# Interdefinability of CCZ and the four-level K operator.
_INTERDEF = (
    ("interdef.CCZ", "CCZ", "K12 CZ12 X0 TLK[0,1,2,3] X0 CZ12 K12 TLX[5,6]"),
    ("interdef.TLK", "TLK[0,1,2,3]", "K12 CCZ K12 CCZ K12 CCZ TLX[5,6]"),
)
INTERDEF_PUBLISHED_ERRATA: dict[str, str] = {
    "interdef.CCZ": "CCZ = K12 CZ12 X0 TLK[0,1,2,3] X0 CZ12 TLK[0,1,2,3] TLX[5,6]",
}


def _rel(rid: str, line: str) -> Relation:
    lhs, rhs = line.split("=")
    return Relation(parse_word(lhs), parse_word(rhs), rid)


def r0() -> list[Relation]:
    return [_rel(f"fig4.eq{k}", line) for k, line in enumerate(_R0_TEXT.splitlines(), 1)]


def r0_published() -> list[Relation]:
    out = []
    for rel in r0():
        if rel.id in R0_PUBLISHED_ERRATA:
            rel = _rel(rel.id, R0_PUBLISHED_ERRATA[rel.id])
        out.append(rel)
    return out


def defining_relations() -> list[Relation]:
    return r0()[:DEFINING_COUNT]


def coxeter_relations() -> list[Relation]:
    """(r_j r_k)^N ≈ ε for the upper triangle of the Coxeter matrix."""
    out = []
    for j in range(1, 9):
        for k in range(j, 9):
            n = COXETER_MATRIX[j - 1][k - 1]
            lhs = (f"r{j}",) * 2 if j == k else (f"r{j}", f"r{k}") * n
            out.append(Relation(lhs, (), f"cox.{j}.{k}"))
    return out


def e8d_relations() -> list[Relation]:
    """Each Coxeter generator equals its circuit."""
    return [Relation((f"r{j}",), coxeter_circuit(j), f"e8d.r{j}") for j in range(1, 9)]


def de8_relations(printed: bool = False) -> list[Relation]:
    """The four primitive gates as Coxeter words, plus the 19 defining relations."""
    w = construction_words(printed=printed)
    head = [
        Relation(("K12",), w["w10"], "de8.K12"),
        Relation(("CCX12",), w["w13"] + w["w7"] + w["w13"], "de8.CCX12"),
        Relation(("X0",), w["w13"] + w["w8"] + w["w13"], "de8.X0"),
        Relation(("CX01",), w["w14"], "de8.CX01"),
    ]
    return head + defining_relations()


def fig7_published() -> list[Relation]:
    """The O(8, D) relations over multi-level operators, as printed."""
    out = []
    for k, line in enumerate(_FIG7_TEXT.splitlines(), 1):
        out.append(_rel(f"fig7.eq{k}", line.replace("RHO", _RHO)))
    return out


def fig8() -> list[Relation]:
    return [Relation(word(a), parse_word(b), rid) for rid, a, b in _FIG8]


def multilevel_definitions() -> list[Relation]:
    return [Relation(word(a), word(b), rid) for rid, a, b in _MULTILEVEL_DEFS]


def interdefinability() -> list[Relation]:
    return [Relation(word(a), word(b), rid) for rid, a, b in _INTERDEF]


def adjacent_x_decompositions() -> list[Relation]:
    return [
        Relation((tok,), word(circ), f"abbr.{tok}") for tok, circ in ADJACENT_X_CIRCUITS.items()
    ]


_BASE = {
    GateKind.OneLevelNeg: (0,),
    GateKind.TwoLevelX: (0, 1),
    GateKind.FourLevelK: (0, 1, 2, 3),
}


def _carrier(params: tuple[int, ...], base: tuple[int, ...], n: int) -> Permutation:
    """Permutation sending base[i] to params[i], the rest in increasing order."""
    img = [-1] * n
    for b, p in zip(base, params):
        img[b] = p
    rest = iter(sorted(set(range(n)) - set(params)))
    for i in range(n):
        if img[i] < 0:
            img[i] = next(rest)
    return Permutation(tuple(img))


@lru_cache(maxsize=None)
def multilevel_circuit(tok: str) -> Word:
    """A word over Sigma_1 with the same 8x8 matrix as a multi-level token."""
    g = parse_symbol(tok)
    if not g.is_multilevel:
        return (tok,)
    if tok == "TLK[0,1,2,3]":
        return (tok,)
    if tok in ADJACENT_X_CIRCUITS:
        return word(ADJACENT_X_CIRCUITS[tok])
    if tok == "NEG[0]":
        return word(NEG0_CIRCUIT)
    if tok == "NEG[7]":
        return ("CCZ",)
    base = _BASE[g.kind]
    v = permutation_word(_carrier(g.params, base, 8))
    core = f"{g.kind.value}[{','.join(map(str, base))}]"
    return expand_multilevel(v + (core,) + formal_reverse(v))


def expand_multilevel(w: Word) -> Word:
    return tuple(s for tok in w for s in multilevel_circuit(tok))


def fig7() -> list[Relation]:
    """The O(8, D) relations with multi-level operators written as Sigma_1 circuits."""
    return [
        Relation(expand_multilevel(r.lhs), expand_multilevel(r.rhs), r.id) for r in fig7_published()
    ]


def r1() -> list[Relation]:
    return r0() + fig7()


def r2() -> list[Relation]:
    return r1() + fig8()


TABLES = {
    "R0": r0,
    "R_E8": coxeter_relations,
    "R_E8(D)": e8d_relations,
    "R_D(E8)": de8_relations,
    "R4": fig7_published,
    "R4_circuits": fig7,
    "TofH": fig8,
    "R1": r1,
    "R2": r2,
    "abbreviations": lambda: multilevel_definitions() + adjacent_x_decompositions() + interdefinability(),
}

COXETER_ALPHABET = COXETER_GENERATORS
