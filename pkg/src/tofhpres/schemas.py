"""Relation schemata over multi-level operators and the Sigma_D relation families."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable

from .gates import SIGMA_D, GateKind, GateSymbol, Word, gate_matrix, multilevel_valid, parse_symbol, word
from .matrix import GateMatrix, mat_mul
from .presentation import Relation, parse_word
from . import tables

_RHO = "TLK[e,f,g,h] TLK[a,b,c,d] TLX[d,e] TLK[a,b,c,d] TLK[e,f,g,h]"

# Multi-level relation schemata; letters range over distinct basis indices.
SCHEMATA: dict[str, str] = {
    "Perm1": "TLX[a,b] TLX[a,b] = .",
    "Rep1": "NEG[a] NEG[a] = .",
    "Rep2": "TLK[a,b,c,d] TLK[a,b,c,d] = .",
    "Perm2": "TLX[a,b] TLX[c,d] = TLX[c,d] TLX[a,b]",
    "Perm3": "TLX[a,b] NEG[c] = NEG[c] TLX[a,b]",
    "Perm4": "TLX[a,b] TLK[c,d,e,f] = TLK[c,d,e,f] TLX[a,b]",
    "Rep3": "NEG[a] TLK[b,c,d,e] = TLK[b,c,d,e] NEG[a]",
    "ZCom1": "NEG[a] NEG[b] = NEG[b] NEG[a]",
    "KCom1": "TLK[a,b,c,d] TLK[e,f,g,h] = TLK[e,f,g,h] TLK[a,b,c,d]",
    "Perm5": "TLX[a,c] TLX[a,b] = TLX[c,b] TLX[a,c]",
    "Perm6": "TLX[b,c] TLX[a,b] = TLX[a,c] TLX[b,c]",
    "Perm7": "TLX[a,b] NEG[a] = NEG[b] TLX[a,b]",
    "Perm8": "TLX[a,e] TLK[a,b,c,d] = TLK[e,b,c,d] TLX[a,e]",
    "Perm9": "TLX[b,e] TLK[a,b,c,d] = TLK[a,e,c,d] TLX[b,e]",
    "Perm10": "TLX[c,e] TLK[a,b,c,d] = TLK[a,b,e,d] TLX[c,e]",
    "Perm11": "TLX[d,e] TLK[a,b,c,d] = TLK[a,b,c,e] TLX[d,e]",
    "Rep5a": "TLX[a,b] TLK[a,b,c,d] = TLK[a,b,c,d] TLX[b,d] NEG[b] NEG[d]",
    "Rep6": "TLX[b,c] TLK[a,b,c,d] = NEG[a] TLK[a,b,c,d] NEG[a] TLK[a,b,c,d] NEG[a]",
    "Rep7": "TLX[c,d] TLK[a,b,c,d] = TLK[a,b,c,d] TLX[b,d]",
    "Rep8": "TLK[a,b,c,d] TLK[b,d,e,f] = TLK[b,d,e,f] TLK[a,b,c,d]",
    "Rep9": f"NEG[a] NEG[e] TLX[a,e] {_RHO} = {_RHO} TLX[a,e] NEG[e] NEG[a]",
}

SCHEMATA_PUBLISHED_ERRATA: dict[str, str] = {
    "Rep5a": "TLX[a,b] TLK[a,b,c,d] = TLK[a,b,c,d] TLX[a,b] NEG[b] NEG[d]",
}

# Schemata that stay unsound as published (no short repair exists).
KNOWN_UNSOUND_SCHEMATA: frozenset[str] = frozenset({"Rep8"})

LINEAR = ("Rep1", "Perm1", "Perm7", "Perm5", "Perm6", "Rep2", "Rep5a", "Rep6", "Rep7",
          "Perm8", "Perm9", "Perm10", "Perm11", "Rep8", "Rep9")
PARTIAL = ("ZCom1", "Perm3", "Rep3", "Perm2", "Perm4", "KCom1")

# Instance counts as closed-form binomials in n.
FORMULAS: dict[str, Callable[[int], int]] = {
    "Perm1": lambda n: comb(n, 2),
    "Rep1": lambda n: n,
    "Rep2": lambda n: comb(n, 4),
    "Perm2": lambda n: comb(n, 2) * comb(n - 2, 2),
    "Perm3": lambda n: comb(n, 2) * (n - 2),
    "Perm4": lambda n: comb(n, 2) * comb(n - 2, 4),
    "Rep3": lambda n: n * comb(n - 1, 4),
    "ZCom1": lambda n: n * (n - 1),
    "KCom1": lambda n: comb(n, 4) * comb(n - 4, 4),
    "Perm5": lambda n: comb(n, 3),
    "Perm6": lambda n: comb(n, 3),
    "Perm7": lambda n: comb(n, 2),
    "Perm8": lambda n: comb(n, 5),
    "Perm9": lambda n: comb(n, 5),
    "Perm10": lambda n: comb(n, 5),
    "Perm11": lambda n: comb(n, 5),
    "Rep5a": lambda n: comb(n, 4),
    "Rep6": lambda n: comb(n, 4),
    "Rep7": lambda n: comb(n, 4),
    "Rep8": lambda n: comb(n, 6),
    "Rep9": lambda n: comb(n, 8),
}

# Published subtotals of linearly ordered schemata, by number of parameters.
PUBLISHED_LINEAR_BY_M = {1: 8, 2: 56, 3: 102, 4: 280, 5: 224, 6: 28, 8: 1}
PUBLISHED_LINEAR = 699
PUBLISHED_PARTIAL = 1414
PUBLISHED_TOTAL = 2113

_INDEX = re.compile(r"\[([^\]]*)\]")


def _letters(template: str) -> list[str]:
    seen: dict[str, None] = {}
    for group in _INDEX.findall(template):
        for item in group.split(","):
            name = item.strip().split("+")[0]
            if name.isalpha():
                seen.setdefault(name, None)
    return sorted(seen)


def _substitute(template: str, env: dict[str, int]) -> str:
    def one(item: str) -> str:
        item = item.strip()
        if item.isdigit():
            return item
        name, _, off = item.partition("+")
        return str(env[name] + (int(off) if off else 0))

    return _INDEX.sub(lambda m: "[" + ",".join(one(x) for x in m.group(1).split(",")) + "]", template)


def _index_terms(group: str) -> list[tuple[str | None, int]]:
    out: list[tuple[str | None, int]] = []
    for item in group.split(","):
        item = item.strip()
        if item.isdigit():
            out.append((None, int(item)))
        else:
            name, _, off = item.partition("+")
            out.append((name, int(off) if off else 0))
    return out


def _increasing(terms: list[tuple[str | None, int]], env: dict[str, int], n: int) -> bool:
    # multi-level indices must be strictly increasing and below n
    prev = -1
    for name, off in terms:
        v = off if name is None else env[name] + off
        if v <= prev or v >= n:
            return False
        prev = v
    return True


def _instance(template: str, env: dict[str, int], n: int, rid: str) -> Relation | None:
    text = _substitute(template, env)
    lhs, rhs = text.split("=")
    rel = Relation(parse_word(lhs), parse_word(rhs), rid)
    for tok in rel.lhs + rel.rhs:
        g = parse_symbol(tok)
        if g.is_multilevel and not multilevel_valid(g, n):
            return None
    return rel


def instantiate_template(tag: str, template: str, n: int, distinct: bool = True,
                         where: Callable[[dict[str, int]], bool] | None = None) -> list[Relation]:
    """All well-formed instances, sorted by parameter tuple."""
    names = _letters(template)
    groups = [_index_terms(g) for g in _INDEX.findall(template)]
    out = []
    values = itertools.permutations(range(n), len(names)) if distinct else itertools.product(range(n), repeat=len(names))
    for vals in values:
        env = dict(zip(names, vals))
        if not all(_increasing(g, env, n) for g in groups):
            continue
        if where is not None and not where(env):
            continue
        rid = f"{tag}[{','.join(map(str, vals))}]"
        rel = _instance(template, env, n, rid)
        if rel is not None:
            out.append(rel)
    return out


# Relations over operators on 8 levels reduced to representatives (a, b, c free).
_R3_TEMPLATES: tuple[tuple[str, str, Callable[[dict[str, int]], bool] | None], ...] = (
    ("fig5.eq1", "TLX[a,a+1] TLX[a,a+1] = .", None),
    ("fig5.eq2", "NEG[0] NEG[0] = .", None),
    ("fig5.eq3", "TLK[0,1,2,3] TLK[0,1,2,3] = .", None),
    ("fig5.eq4", "TLX[b,b+1] NEG[0] = NEG[0] TLX[b,b+1]", lambda e: e["b"] > 0),
    ("fig5.eq5", "TLX[c,c+1] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[c,c+1]", lambda e: e["c"] > 3),
    ("fig5.eq6", "NEG[4] TLK[0,1,2,3] = TLK[0,1,2,3] NEG[4]", None),
    ("fig5.eq7", "NEG[0] NEG[4] = NEG[4] NEG[0]", None),
    ("fig5.eq8", "TLK[0,1,2,3] TLK[4,5,6,7] = TLK[4,5,6,7] TLK[0,1,2,3]", None),
    ("fig5.eq9", "TLX[a,a+1] TLX[a,a+2] = TLX[a+1,a+2] TLX[a,a+1]", None),
    ("fig5.eq10", "TLX[a+1,b] TLX[a,a+1] = TLX[a,b] TLX[a+1,b]", lambda e: e["b"] > 0),
    ("fig5.eq11", "TLX[0,1] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[1,3] NEG[1] NEG[3]", None),
    ("fig5.eq12", "TLX[1,2] TLK[0,1,2,3] = NEG[0] TLK[0,1,2,3] NEG[0] TLK[0,1,2,3] NEG[0]", None),
    ("fig5.eq13", "TLX[2,3] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[1,3]", None),
    ("fig5.eq14", "TLK[0,1,2,3] TLK[1,3,4,5] = TLK[1,3,4,5] TLK[0,1,2,3]", None),
    ("fig5.eq15", "NEG[0] NEG[4] TLX[0,4] RHO = RHO TLX[0,4] NEG[4] NEG[0]", None),
)

R3_PUBLISHED_ERRATA = {"fig5.eq11": "TLX[0,1] TLK[0,1,2,3] = TLK[0,1,2,3] TLX[0,1] NEG[1] NEG[3]"}
R3_KNOWN_UNSOUND = frozenset({"fig5.eq14"})
_R3_RHO = "TLK[4,5,6,7] TLK[0,1,2,3] TLX[3,4] TLK[0,1,2,3] TLK[4,5,6,7]"


def r3(n: int = 8) -> list[Relation]:
    """Reduced relations; fixed operators that do not fit in n levels are dropped."""
    out: list[Relation] = []
    for rid, template, cond in _R3_TEMPLATES:
        template = template.replace("RHO", _R3_RHO)
        names = _letters(template)
        if not names:
            rel = _instance(template, {}, n, rid)
            if rel is not None:
                out.append(rel)
            continue
        for rel in instantiate_template(rid, template, n, distinct=False, where=cond):
            out.append(rel)
    return out


# --- Sigma_D families ------------------------------------------------------


def _relabel(tok: str, qubit_map: dict[int, int]) -> str | None:
    """The Sigma_D symbol on relabelled qubits, or None when it is not in Sigma_D."""
    g = parse_symbol(tok)
    p = tuple(qubit_map.get(q, q) for q in g.params)
    if g.kind in (GateKind.Kpair, GateKind.CZctrl, GateKind.CCX, GateKind.Swap):
        p = tuple(sorted(p))
    out = str(GateSymbol(g.kind, p))
    return out if out in SIGMA_D else None


def _swap_map(sw: str) -> dict[int, int]:
    i, j = parse_symbol(sw).params
    return {i: j, j: i}


def order_family() -> list[Relation]:
    return [Relation((m, m), (), f"ord.{m}") for m in SIGMA_D]


def symmetry_family() -> list[Relation]:
    out = []
    for sw in ("SW01", "SW02", "SW12"):
        qmap = _swap_map(sw)
        for m in SIGMA_D:
            image = _relabel(m, qmap)
            if image is not None:
                out.append(Relation((sw, m, sw), (image,), f"sym.{sw}.{m}"))
    return out


def symmetry_skipped() -> list[tuple[str, str]]:
    """(swap, gate) pairs whose relabelled gate lies outside Sigma_D."""
    return [
        (sw, m)
        for sw in ("SW01", "SW02", "SW12")
        for m in SIGMA_D
        if _relabel(m, _swap_map(sw)) is None
    ]


def _support(tok: str) -> frozenset[int]:
    return parse_symbol(tok).support()


def bifunctoriality_family() -> list[Relation]:
    out = []
    for i, m in enumerate(SIGMA_D):
        for nn in SIGMA_D[i + 1:]:
            if not _support(m) & _support(nn):
                out.append(Relation((m, nn), (nn, m), f"bif.{m}.{nn}"))
    return out


class SearchBoundExceeded(Exception):
    pass


@lru_cache(maxsize=None)
def _minimal_words(depth: int, alphabet: tuple[str, ...] = SIGMA_D) -> dict[GateMatrix, Word]:
    """Lex-least minimal word for every matrix reachable within depth."""
    gens = [(s, gate_matrix(s)) for s in alphabet]
    best: dict[GateMatrix, Word] = {GateMatrix.identity(8): ()}
    layer: list[tuple[Word, GateMatrix]] = [((), GateMatrix.identity(8))]
    for _ in range(depth):
        nxt = []
        # prefixes of lex-least minimal words are lex-least minimal, so
        # extending in table order visits candidates in lex order
        for w, m in layer:
            for s, g in gens:
                mm = mat_mul(m, g)
                if mm not in best:
                    best[mm] = w + (s,)
                    nxt.append((w + (s,), mm))
        layer = nxt
    return best


def minimal_word(target: GateMatrix, max_depth: int = 3) -> Word:
    found = _minimal_words(max_depth).get(target)
    if found is None:
        raise SearchBoundExceeded(f"no Sigma_D word of length <= {max_depth} found")
    return found


def commutator_family(m: str, nn: str, max_depth: int = 3) -> Relation:
    """M N ≈ N w with w minimal, for gates with overlapping support."""
    if m not in SIGMA_D or nn not in SIGMA_D:
        raise ValueError("commutator relations are defined over Sigma_D")
    if not _support(m) & _support(nn):
        raise ValueError(f"{m} and {nn} act on disjoint qubits; see bifunctoriality")
    gm, gn = gate_matrix(m), gate_matrix(nn)
    target = mat_mul(mat_mul(gn.transpose(), gm), gn)
    return Relation((m, nn), (nn,) + minimal_word(target, max_depth), f"com.{m}.{nn}")


def commutator_relations(max_depth: int = 3) -> list[Relation]:
    return [
        commutator_family(m, nn, max_depth)
        for m in SIGMA_D
        for nn in SIGMA_D
        if _support(m) & _support(nn)
    ]


EXTRA_SWAP_RELATION = Relation(("SW12",), word("CZ12 K12 CZ12 K12 CZ12 K12"), "extra.SW12")


def rd_relations() -> list[Relation]:
    return (
        bifunctoriality_family()
        + symmetry_family()
        + order_family()
        + commutator_relations()
        + [EXTRA_SWAP_RELATION]
    )


# --- dispatch and counting --------------------------------------------------

FAMILIES: dict[str, Callable[[], list[Relation]]] = {
    "Bifunctoriality": bifunctoriality_family,
    "Symmetry": symmetry_family,
    "Order": order_family,
    "Commutator": commutator_relations,
    "R_D": rd_relations,
}


def instantiate(schema: str, n: int = 8) -> list[Relation]:
    if schema in SCHEMATA:
        if n < 4:
            raise ValueError("multi-level schemata need n >= 4")
        return instantiate_template(schema, SCHEMATA[schema], n)
    if schema == "R3":
        if n < 4:
            raise ValueError("multi-level schemata need n >= 4")
        return r3(n)
    if schema == "R_n":
        return [r for tag in SCHEMATA for r in instantiate(tag, n)]
    if schema in FAMILIES:
        return FAMILIES[schema]()
    if schema in tables.TABLES:
        if n != 8:
            raise ValueError(f"table {schema} is fixed at n = 8")
        return tables.TABLES[schema]()
    raise ValueError(f"unknown schema {schema!r}")


SCHEMA_IDS = tuple(SCHEMATA) + ("R3", "R_n") + tuple(FAMILIES) + tuple(tables.TABLES)


@dataclass
class CountReport:
    n: int
    enumerated: dict[str, int]
    formula: dict[str, int]
    linear_by_m: dict[int, int] = field(default_factory=dict)

    @property
    def linear(self) -> int:
        return sum(self.enumerated[t] for t in LINEAR)

    @property
    def partial(self) -> int:
        return sum(self.enumerated[t] for t in PARTIAL)

    @property
    def total(self) -> int:
        return self.linear + self.partial

    def mismatches(self) -> list[str]:
        return [t for t in SCHEMATA if self.enumerated[t] != self.formula[t]]

    def diagnostics(self) -> list[str]:
        """Differences from the published tallies (meaningful at n = 8)."""
        if self.n != 8:
            return []
        out = []
        for m, pub in PUBLISHED_LINEAR_BY_M.items():
            got = self.linear_by_m.get(m, 0)
            if got != pub:
                out.append(f"linear m={m}: enumerated {got}, published {pub}")
        if self.linear != PUBLISHED_LINEAR:
            out.append(f"linear subtotal: enumerated {self.linear}, published {PUBLISHED_LINEAR}")
        if self.partial != PUBLISHED_PARTIAL:
            out.append(f"partial subtotal: enumerated {self.partial}, published {PUBLISHED_PARTIAL}")
        if self.total != PUBLISHED_TOTAL:
            out.append(f"total: enumerated {self.total}, published {PUBLISHED_TOTAL}")
        return out


def count_all(n: int = 8) -> CountReport:
    enumerated = {t: len(instantiate(t, n)) for t in SCHEMATA}
    formula = {t: FORMULAS[t](n) for t in SCHEMATA}
    by_m: dict[int, int] = {}
    for t in LINEAR:
        m = len(_letters(SCHEMATA[t]))
        by_m[m] = by_m.get(m, 0) + enumerated[t]
    return CountReport(n, enumerated, formula, dict(sorted(by_m.items())))
