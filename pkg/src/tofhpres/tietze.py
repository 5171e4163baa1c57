"""Tietze transformations with validity checks, interpretation bookkeeping and
derived-generator elimination.

Every move is a value (:class:`TietzeMove`); :class:`Journal` applies moves to
a presentation and records them so a sequence can be audited or undone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .gates import Interpretation, Word, interp_word
from .matrix import GateMatrix
from .presentation import (
    Direction,
    Presentation,
    Relation,
    RewriteStep,
    format_word,
    parse_relation,
    parse_word,
    relation_set,
    relation_sound,
    replay,
)


class TietzeError(ValueError):
    pass


class MoveKind(enum.Enum):
    GenPlus = "gen+"
    GenMinus = "gen-"
    RelPlus = "rel+"
    RelMinus = "rel-"


class SemanticInjective:
    """Justification by exact semantics under an injective interpretation."""

    _instance: "SemanticInjective | None" = None

    def __new__(cls) -> "SemanticInjective":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SEMANTIC"


SEMANTIC = SemanticInjective()


@dataclass(frozen=True)
class TietzeMove:
    kind: MoveKind
    relation: Relation
    justification: tuple[RewriteStep, ...] | SemanticInjective = ()

    @property
    def symbol(self) -> str:
        if self.kind not in (MoveKind.GenPlus, MoveKind.GenMinus):
            raise AttributeError("only generator moves carry a symbol")
        return self.relation.lhs[0]

    def inverse(self) -> "TietzeMove":
        flip = {
            MoveKind.GenPlus: MoveKind.GenMinus,
            MoveKind.GenMinus: MoveKind.GenPlus,
            MoveKind.RelPlus: MoveKind.RelMinus,
            MoveKind.RelMinus: MoveKind.RelPlus,
        }
        return TietzeMove(flip[self.kind], self.relation, self.justification)

    def __str__(self) -> str:
        r = self.relation
        if self.kind is MoveKind.GenPlus:
            return f"gen+ {r.lhs[0]} = {format_word(r.rhs)}"
        if self.kind is MoveKind.GenMinus:
            return f"gen- {r.lhs[0]}"
        if isinstance(self.justification, SemanticInjective):
            via = "semantic"
        else:
            via = "[" + ", ".join(map(str, self.justification)) + "]"
        if self.kind is MoveKind.RelPlus:
            return f"rel+ {r} via {via}"
        return f"rel- {r.id} via {via}"


# --- interpretations -------------------------------------------------------


class _Layered(Mapping[str, GateMatrix]):
    """Base mapping with symbols added and removed on top."""

    def __init__(self, base: Mapping[str, GateMatrix], added: dict[str, GateMatrix], removed: frozenset[str]):
        self.base, self.added, self.removed = base, added, removed

    def __getitem__(self, tok: str) -> GateMatrix:
        if tok in self.removed:
            raise KeyError(tok)
        if tok in self.added:
            return self.added[tok]
        return self.base[tok]

    def __contains__(self, tok: object) -> bool:
        if tok in self.removed:
            return False
        return tok in self.added or tok in self.base

    def __iter__(self) -> Iterator[str]:
        yield from self.added
        for k in self.base:
            if k not in self.added and k not in self.removed:
                yield k

    def __len__(self) -> int:
        return sum(1 for _ in self)


def _layers(i: Interpretation) -> tuple[Mapping[str, GateMatrix], dict[str, GateMatrix], frozenset[str]]:
    m = i.mapping
    if isinstance(m, _Layered):
        return m.base, dict(m.added), m.removed
    return m, {}, frozenset()


def extend_interp(i: Interpretation, x: str, w: Sequence[str]) -> Interpretation:
    """Send x to the image of w; the unique extension that respects x ≈ w."""
    if x in i.alphabet:
        raise TietzeError(f"{x!r} is already interpreted")
    image = interp_word(i, w)
    base, added, removed = _layers(i)
    added[x] = image
    return Interpretation(_Layered(base, added, removed - {x}), i.injective_flag, i.dim)


def restrict_interp(i: Interpretation, x: str) -> Interpretation:
    if x not in i.alphabet:
        raise TietzeError(f"{x!r} is not interpreted")
    base, added, removed = _layers(i)
    added.pop(x, None)
    return Interpretation(_Layered(base, added, removed | {x}), i.injective_flag, i.dim)


def induced_hom_check(i: Interpretation, p: Presentation | Iterable[Relation]) -> bool:
    """True iff every relation holds under i, i.e. i induces a homomorphism."""
    rels = p.relations if isinstance(p, Presentation) else tuple(p)
    return all(relation_sound(r, i) for r in rels)


# --- the four moves --------------------------------------------------------


def _fresh_id(p: Presentation, stem: str) -> str:
    taken = p.relation_map
    if stem not in taken:
        return stem
    k = 1
    while f"{stem}.{k}" in taken:
        k += 1
    return f"{stem}.{k}"


def gen_plus(p: Presentation, x: str, w: Sequence[str], rid: str | None = None) -> Presentation:
    if x in p.alphabet:
        raise TietzeError(f"generator {x!r} already present")
    w = tuple(w)
    p.check_word(w)
    rel = Relation((x,), w, rid or _fresh_id(p, f"def.{x}"))
    if rel.id in p.relation_map:
        raise TietzeError(f"relation id {rel.id!r} already present")
    interp = p.interpretation
    if interp is not None:
        if x not in interp.mapping:
            interp = extend_interp(interp, x, w)
        elif interp.mapping[x] != interp_word(interp, w):
            raise TietzeError(f"{x!r} is already interpreted differently from its definition")
    return Presentation(p.alphabet + (x,), p.relations + (rel,), interp)


def defining_relation(p: Presentation, x: str, rid: str | None = None) -> Relation:
    """The unique relation x ≈ w usable by gen_minus."""
    if x not in p.alphabet:
        raise TietzeError(f"generator {x!r} not present")
    mentions = [r for r in p.relations if x in r.symbols()]
    if rid is not None:
        cands = [r for r in mentions if r.id == rid]
        if not cands:
            raise TietzeError(f"relation {rid!r} does not mention {x!r}")
    else:
        cands = [r for r in mentions if (r.lhs == (x,) and x not in r.rhs) or (r.rhs == (x,) and x not in r.lhs)]
        if not cands:
            raise TietzeError(f"no defining relation for {x!r}")
        if len(cands) > 1:
            raise TietzeError(f"several defining relations for {x!r}: {[r.id for r in cands]}; select one by id")
    rel = cands[0]
    if rel.rhs == (x,) and rel.lhs != (x,):
        rel = Relation(rel.rhs, rel.lhs, rel.id)
    if rel.lhs != (x,):
        raise TietzeError(f"relation {rel.id} is not of the form {x} = w")
    if x in rel.rhs:
        raise TietzeError(f"relation {rel.id} defines {x!r} in terms of itself")
    others = [r.id for r in mentions if r.id != rel.id]
    if others:
        raise TietzeError(f"{x!r} also occurs in relation {others[0]}")
    return rel


def gen_minus(p: Presentation, x: str, rid: str | None = None) -> Presentation:
    rel = defining_relation(p, x, rid)
    interp = p.interpretation
    if interp is not None and x in interp.alphabet:
        interp = restrict_interp(interp, x)
    return Presentation(
        tuple(s for s in p.alphabet if s != x),
        tuple(r for r in p.relations if r.id != rel.id),
        interp,
    )


def _check_justification(
    rel: Relation, just: tuple[RewriteStep, ...] | SemanticInjective, over: Sequence[Relation], p: Presentation
) -> None:
    if isinstance(just, SemanticInjective):
        i = p.interpretation
        if i is None or not i.injective_flag:
            raise TietzeError("semantic justification needs an interpretation flagged injective")
        if not relation_sound(rel, i):
            raise TietzeError(f"relation {rel.id} does not hold under the interpretation")
        return
    try:
        end = replay(rel.lhs, just, relation_set(over))
    except (KeyError, ValueError) as exc:
        raise TietzeError(f"justification for {rel.id} fails to replay: {exc}") from None
    if end != rel.rhs:
        raise TietzeError(f"justification for {rel.id} ends at {format_word(end)!r}, not the right-hand side")


def rel_plus(p: Presentation, rel: Relation, just: tuple[RewriteStep, ...] | SemanticInjective) -> Presentation:
    if rel.id in p.relation_map:
        raise TietzeError(f"relation id {rel.id!r} already present")
    p.check_word(rel.lhs + rel.rhs)
    _check_justification(rel, just if isinstance(just, SemanticInjective) else tuple(just), p.relations, p)
    return Presentation(p.alphabet, p.relations + (rel,), p.interpretation)


def rel_minus(p: Presentation, rid: str, just: tuple[RewriteStep, ...] | SemanticInjective) -> Presentation:
    rel = p.relation(rid)
    rest = tuple(r for r in p.relations if r.id != rid)
    _check_justification(rel, just if isinstance(just, SemanticInjective) else tuple(just), rest, p)
    return Presentation(p.alphabet, rest, p.interpretation)


def apply_move(p: Presentation, move: TietzeMove) -> Presentation:
    r = move.relation
    if move.kind is MoveKind.GenPlus:
        return gen_plus(p, r.lhs[0], r.rhs, r.id)
    if move.kind is MoveKind.GenMinus:
        return gen_minus(p, r.lhs[0], r.id if r.id in p.relation_map else None)
    if move.kind is MoveKind.RelPlus:
        return rel_plus(p, r, move.justification)
    return rel_minus(p, r.id, move.justification)


@dataclass
class Journal:
    """A presentation together with the moves that produced it."""

    start: Presentation
    moves: list[TietzeMove] = field(default_factory=list)
    current: Presentation | None = None

    def __post_init__(self) -> None:
        if self.current is None:
            self.current = self.start

    def apply(self, move: TietzeMove) -> Presentation:
        assert self.current is not None
        if move.kind is MoveKind.GenMinus:
            # record the removed relation so the move can be inverted
            rid = move.relation.id if move.relation.id in self.current.relation_map else None
            move = TietzeMove(move.kind, defining_relation(self.current, move.relation.lhs[0], rid))
        nxt = apply_move(self.current, move)
        self.moves.append(move)
        self.current = nxt
        return nxt

    def gen_plus(self, x: str, w: Sequence[str], rid: str | None = None) -> Presentation:
        assert self.current is not None
        rid = rid or _fresh_id(self.current, f"def.{x}")
        return self.apply(TietzeMove(MoveKind.GenPlus, Relation((x,), tuple(w), rid)))

    def gen_minus(self, x: str, rid: str | None = None) -> Presentation:
        assert self.current is not None
        return self.apply(TietzeMove(MoveKind.GenMinus, defining_relation(self.current, x, rid)))

    def rel_plus(self, rel: Relation, just: tuple[RewriteStep, ...] | SemanticInjective) -> Presentation:
        return self.apply(TietzeMove(MoveKind.RelPlus, rel, just))

    def rel_minus(self, rid: str, just: tuple[RewriteStep, ...] | SemanticInjective) -> Presentation:
        assert self.current is not None
        return self.apply(TietzeMove(MoveKind.RelMinus, self.current.relation(rid), just))

    def undo_all(self) -> Presentation:
        """Apply the inverse moves in reverse order; returns the reconstructed start."""
        p = self.current
        assert p is not None
        for move in reversed(self.moves):
            p = apply_move(p, move.inverse())
        return p


def replay_moves(p: Presentation, moves: Iterable[TietzeMove]) -> Journal:
    j = Journal(p)
    for m in moves:
        j.apply(m)
    return j


# --- derived generators ----------------------------------------------------


class DerivedCycleError(TietzeError):
    def __init__(self, cycle: list[tuple[str, str]]):
        self.cycle = cycle
        path = " -> ".join([cycle[0][0]] + [v for _, v in cycle])
        super().__init__(f"derived generators are defined cyclically: {path}")


@dataclass(frozen=True)
class DefiningFamily:
    defs: Mapping[str, Word]

    def __post_init__(self) -> None:
        object.__setattr__(self, "defs", {x: tuple(w) for x, w in self.defs.items()})

    @classmethod
    def from_relations(cls, rels: Iterable[Relation]) -> "DefiningFamily":
        out: dict[str, Word] = {}
        for r in rels:
            if len(r.lhs) != 1:
                raise ValueError(f"relation {r.id} is not of the form x = w")
            if r.lhs[0] in out:
                raise ValueError(f"{r.lhs[0]!r} defined twice")
            out[r.lhs[0]] = r.rhs
        return cls(out)

    @property
    def derived(self) -> tuple[str, ...]:
        return tuple(self.defs)

    def primitives(self) -> frozenset[str]:
        used = {s for w in self.defs.values() for s in w}
        return frozenset(used - set(self.defs))


def dgen_graph(D: DefiningFamily) -> nx.DiGraph:
    """Edge x -> y when y is derived and occurs in the definition of x."""
    g = nx.DiGraph()
    g.add_nodes_from(D.derived)
    for x, w in D.defs.items():
        for y in w:
            if y in D.defs:
                g.add_edge(x, y)
    return g


def _cycle(g: nx.DiGraph) -> list[tuple[str, str]] | None:
    try:
        return [(u, v) for u, v in nx.find_cycle(g)]
    except nx.NetworkXNoCycle:
        return None


def dgen_intro_order(D: DefiningFamily) -> list[str]:
    """Derived symbols with every symbol after those its definition uses."""
    g = dgen_graph(D)
    cyc = _cycle(g)
    if cyc is not None:
        raise DerivedCycleError(cyc)
    pos = {x: k for k, x in enumerate(D.derived)}
    return list(nx.lexicographical_topological_sort(g.reverse(copy=True), key=pos.__getitem__))


def substitute(w: Sequence[str], D: DefiningFamily, def_ids: Mapping[str, str]) -> tuple[Word, list[RewriteStep]]:
    """Replace the leftmost derived symbol repeatedly; returns the word and forward steps."""
    out: list[str] = []
    todo = list(reversed(tuple(w)))
    steps: list[RewriteStep] = []
    # out holds the primitive prefix; todo is the rest, reversed
    while todo:
        s = todo.pop()
        if s in D.defs:
            steps.append(RewriteStep(def_ids[s], len(out), Direction.Forward))
            todo.extend(reversed(D.defs[s]))
        else:
            out.append(s)
    return tuple(out), steps


def _reversed_steps(steps: Sequence[RewriteStep]) -> list[RewriteStep]:
    return [s.inverse() for s in reversed(steps)]


def dgen_eliminate(p: Presentation, D: DefiningFamily, journal: Journal | None = None) -> Presentation:
    """Rewrite every other relation over primitives, then drop the derived symbols.

    Each rewritten relation enters by Rel(+) and its original leaves by
    Rel(-), both justified by explicit steps; derived generators then leave
    by Gen(-) in reverse introduction order.
    """
    order = dgen_intro_order(D)
    def_ids: dict[str, str] = {}
    for x in order:
        rel = next((r for r in p.relations if r.lhs == (x,) and r.rhs == D.defs[x]), None)
        if rel is None:
            raise TietzeError(f"presentation has no relation {x} = {format_word(D.defs[x])}")
        def_ids[x] = rel.id
    j = journal if journal is not None else Journal(p)
    if j.current != p:
        raise TietzeError("journal is not positioned at the given presentation")
    defining = set(def_ids.values())
    for r in p.relations:
        if r.id in defining or not (r.symbols() & set(D.defs)):
            continue
        lhs2, sl = substitute(r.lhs, D, def_ids)
        rhs2, sr = substitute(r.rhs, D, def_ids)
        assert j.current is not None
        new = Relation(lhs2, rhs2, _fresh_id(j.current, f"{r.id}.sub"))
        to_r = RewriteStep(r.id, 0, Direction.Forward)
        j.rel_plus(new, tuple(_reversed_steps(sl) + [to_r] + sr))
        to_new = RewriteStep(new.id, 0, Direction.Forward)
        j.rel_minus(r.id, tuple(sl + [to_new] + _reversed_steps(sr)))
    for x in reversed(order):
        j.gen_minus(x, def_ids[x])
    assert j.current is not None
    return j.current


def dgen_introduce(p: Presentation, D: DefiningFamily, journal: Journal | None = None) -> Presentation:
    """Add every derived symbol by Gen(+) in introduction order."""
    j = journal if journal is not None else Journal(p)
    for x in dgen_intro_order(D):
        j.gen_plus(x, D.defs[x])
    assert j.current is not None
    return j.current


def substitution_normal_form(p: Presentation, D: DefiningFamily) -> frozenset[tuple[Word, Word]]:
    """Relation set with derived symbols substituted out (defining relations kept as is)."""
    out = set()
    ids = {x: f"def.{x}" for x in D.defs}
    for r in p.relations:
        if len(r.lhs) == 1 and r.lhs[0] in D.defs and r.rhs == D.defs[r.lhs[0]]:
            out.add((r.lhs, r.rhs))
        else:
            out.add((substitute(r.lhs, D, ids)[0], substitute(r.rhs, D, ids)[0]))
    return frozenset(out)


# --- move scripts ------------------------------------------------------------


def parse_move_line(
    line: str,
    resolve: Callable[[str, Relation, MoveKind], "tuple[RewriteStep, ...] | SemanticInjective"],
    current: Presentation,
) -> TietzeMove:
    """One move-script line; ``resolve`` turns a ``via`` reference into a justification."""
    head, _, rest = line.partition(" ")
    rest = rest.strip()
    if head == "gen+":
        x, sep, w = rest.partition("=")
        if not sep:
            raise ValueError(f"expected 'gen+ x = word', got {line!r}")
        x = x.strip()
        return TietzeMove(MoveKind.GenPlus, Relation((x,), parse_word(w), _fresh_id(current, f"def.{x}")))
    if head == "gen-":
        parts = rest.split()
        if len(parts) not in (1, 2):
            raise ValueError(f"expected 'gen- x [relation-id]', got {line!r}")
        return TietzeMove(MoveKind.GenMinus, defining_relation(current, parts[0], parts[1] if len(parts) == 2 else None))
    if head in ("rel+", "rel-"):
        body, sep, ref = rest.rpartition(" via ")
        if not sep:
            raise ValueError(f"{head} needs a 'via' justification: {line!r}")
        if head == "rel+":
            rel = parse_relation(body)
            return TietzeMove(MoveKind.RelPlus, rel, resolve(ref.strip(), rel, MoveKind.RelPlus))
        rel = current.relation(body.strip())
        return TietzeMove(MoveKind.RelMinus, rel, resolve(ref.strip(), rel, MoveKind.RelMinus))
    raise ValueError(f"unknown move {head!r}")
