"""Monoid presentations, single-step rewriting and bounded derivation search.

A presentation is an alphabet plus a list of relations ``lhs = rhs``.  One
rewrite step replaces an occurrence of one side of a relation by the other
side; two words are equal in the presented monoid exactly when a finite
sequence of such steps connects them.  That question is undecidable in
general, so :func:`derive_search` only explores a bounded neighbourhood.

File format (UTF-8, line oriented)::

    # comment
    [generators]
    X0 CX01 CCX12 K12
    [relations]
    ord.X0: X0 X0 = .
    com.1: CX01 X0 = X0 CX01 X1

``.`` stands for the empty word.  Generator tokens follow the grammar in
:mod:`tofhpres.gates`.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .gates import Interpretation, Word, interp_word

EPSILON: Word = ()


class Direction(enum.Enum):
    Forward = "fwd"
    Reverse = "rev"

    def flipped(self) -> "Direction":
        return Direction.Reverse if self is Direction.Forward else Direction.Forward


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word
    id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def side(self, d: Direction) -> tuple[Word, Word]:
        """Matched side and replacement for a step in direction d."""
        return (self.lhs, self.rhs) if d is Direction.Forward else (self.rhs, self.lhs)

    def symbols(self) -> frozenset[str]:
        return frozenset(self.lhs) | frozenset(self.rhs)

    def __str__(self) -> str:
        return f"{self.id}: {format_word(self.lhs)} = {format_word(self.rhs)}"


@dataclass(frozen=True, order=True)
class RewriteStep:
    relation_id: str
    position: int
    direction: Direction = field(compare=False)

    def inverse(self) -> "RewriteStep":
        return RewriteStep(self.relation_id, self.position, self.direction.flipped())

    def sort_key(self) -> tuple[int, str, int]:
        return (self.position, self.relation_id, 0 if self.direction is Direction.Forward else 1)

    def __str__(self) -> str:
        return f"rel {self.relation_id} at {self.position} {self.direction.value}"


RelationSet = Mapping[str, Relation]


def relation_set(rels: Iterable[Relation]) -> dict[str, Relation]:
    """Index relations by id; ids must be unique."""
    out: dict[str, Relation] = {}
    for r in rels:
        if r.id in out:
            raise ValueError(f"duplicate relation id {r.id!r}")
        out[r.id] = r
    return out


def _as_set(R: "RelationSet | Iterable[Relation] | Presentation") -> RelationSet:
    if isinstance(R, Presentation):
        return R.relation_map
    if isinstance(R, Mapping):
        return R
    return relation_set(R)


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple[str, ...]
    relations: tuple[Relation, ...]
    interpretation: Interpretation | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", tuple(dict.fromkeys(self.alphabet)))
        object.__setattr__(self, "relations", tuple(self.relations))
        sigma = set(self.alphabet)
        index = relation_set(self.relations)
        for r in self.relations:
            extra = r.symbols() - sigma
            if extra:
                raise ValueError(f"relation {r.id} uses undeclared symbols {sorted(extra)}")
        object.__setattr__(self, "_index", index)

    @property
    def relation_map(self) -> dict[str, Relation]:
        return self._index  # type: ignore[attr-defined]

    def relation(self, rid: str) -> Relation:
        try:
            return self.relation_map[rid]
        except KeyError:
            raise KeyError(f"unknown relation id {rid!r}") from None

    def check_word(self, w: Sequence[str]) -> None:
        sigma = set(self.alphabet)
        bad = [s for s in w if s not in sigma]
        if bad:
            raise ValueError(f"symbols {bad} are not in the alphabet")

    def with_relations(self, rels: Iterable[Relation]) -> "Presentation":
        return Presentation(self.alphabet, tuple(rels), self.interpretation)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        return (
            set(self.alphabet) == set(other.alphabet)
            and set(self.relations) == set(other.relations)
        )

    def __hash__(self) -> int:
        return hash((frozenset(self.alphabet), frozenset(self.relations)))


def format_word(w: Sequence[str]) -> str:
    return " ".join(w) if w else "."


def parse_word(text: str) -> Word:
    toks = text.split()
    if toks in ([], ["."]):
        return EPSILON
    if "." in toks:
        raise ValueError(f"'.' must stand alone: {text!r}")
    return tuple(toks)


def apply_step(w: Sequence[str], step: RewriteStep, R: "RelationSet | Iterable[Relation] | Presentation") -> Word:
    rels = _as_set(R)
    try:
        rel = rels[step.relation_id]
    except KeyError:
        raise KeyError(f"unknown relation id {step.relation_id!r}") from None
    pat, rep = rel.side(step.direction)
    p = step.position
    w = tuple(w)
    if p < 0 or p + len(pat) > len(w) or w[p:p + len(pat)] != pat:
        raise ValueError(f"{step} does not match {format_word(w)!r}")
    return w[:p] + rep + w[p + len(pat):]


class _MatchIndex:
    """Relation sides grouped by first symbol, plus the empty sides."""

    def __init__(self, rels: RelationSet):
        self.by_first: dict[str, list[tuple[Word, Word, str, Direction]]] = {}
        self.empty: list[tuple[Word, str, Direction]] = []
        for rid in sorted(rels):
            rel = rels[rid]
            for d in (Direction.Forward, Direction.Reverse):
                pat, rep = rel.side(d)
                if rel.lhs == rel.rhs and d is Direction.Reverse:
                    continue
                if pat:
                    self.by_first.setdefault(pat[0], []).append((pat, rep, rid, d))
                else:
                    self.empty.append((rep, rid, d))

    def matches(self, w: Word) -> Iterator[tuple[RewriteStep, Word]]:
        """Applicable steps with their results, in (position, id, direction) order."""
        n = len(w)
        for p in range(n + 1):
            found: list[tuple[RewriteStep, Word]] = []
            for rep, rid, d in self.empty:
                found.append((RewriteStep(rid, p, d), w[:p] + rep + w[p:]))
            if p < n:
                for pat, rep, rid, d in self.by_first.get(w[p], ()):
                    if w[p:p + len(pat)] == pat:
                        found.append((RewriteStep(rid, p, d), w[:p] + rep + w[p + len(pat):]))
            found.sort(key=lambda sr: sr[0].sort_key())
            yield from found


def find_matches(w: Sequence[str], R: "RelationSet | Iterable[Relation] | Presentation") -> list[RewriteStep]:
    """All applicable steps, ordered by (position, relation id, direction)."""
    return [s for s, _ in _MatchIndex(_as_set(R)).matches(tuple(w))]


def _bigrams(rels: RelationSet) -> frozenset[tuple[str, str]]:
    out: set[tuple[str, str]] = set()
    for rel in rels.values():
        for side in (rel.lhs, rel.rhs):
            out.update(zip(side, side[1:]))
    return frozenset(out)


@dataclass
class SearchStats:
    expanded: int = 0
    visited: int = 0
    truncated: bool = False


def derive_search(
    u: Sequence[str],
    v: Sequence[str],
    R: "RelationSet | Iterable[Relation] | Presentation",
    max_steps: int = 12,
    max_width: int = 200_000,
    slack: int = 6,
    prune_insertions: bool = True,
    stats: SearchStats | None = None,
) -> list[RewriteStep] | None:
    """Bounded bidirectional breadth-first search for a derivation of u ~ v.

    Returns a step list replayable from u to v by :func:`apply_step`, or
    ``None`` when no derivation exists within the bounds.  Words longer than
    ``max(len(u), len(v)) + slack`` are never visited.  With
    ``prune_insertions`` an insertion of an empty-sided relation is kept only
    when it creates, at one of its two borders, a symbol pair occurring inside
    some relation side.  Results are deterministic.
    """
    rels = _as_set(R)
    u, v = tuple(u), tuple(v)
    if u == v:
        return []
    index = _MatchIndex(rels)
    pairs = _bigrams(rels)
    limit = max(len(u), len(v)) + slack
    stats = stats if stats is not None else SearchStats()

    def admissible(w: Word, step: RewriteStep, out: Word) -> bool:
        if len(out) > limit:
            return False
        if not prune_insertions or len(out) <= len(w):
            return True
        rel = rels[step.relation_id]
        pat, rep = rel.side(step.direction)
        if pat:
            return True
        p, q = step.position, len(rep)
        left = (w[p - 1], rep[0]) if p > 0 else None
        right = (rep[-1], w[p]) if p < len(w) else None
        return left in pairs or right in pairs or (left is None and right is None)

    # parent maps: word -> (previous word, step taking previous to word)
    fwd: dict[Word, tuple[Word, RewriteStep] | None] = {u: None}
    bwd: dict[Word, tuple[Word, RewriteStep] | None] = {v: None}
    fwd_layer, bwd_layer = [u], [v]
    fwd_depth = bwd_depth = 0

    def expand(layer: list[Word], seen: dict, other: dict) -> tuple[list[Word], Word | None]:
        nxt: list[Word] = []
        for w in layer:
            stats.expanded += 1
            for step, out in index.matches(w):
                if out in seen or not admissible(w, step, out):
                    continue
                seen[out] = (w, step)
                stats.visited += 1
                if out in other:
                    return nxt, out
                nxt.append(out)
                if len(nxt) >= max_width:
                    stats.truncated = True
                    return nxt, None
        return nxt, None

    while fwd_depth + bwd_depth < max_steps and (fwd_layer or bwd_layer):
        grow_fwd = bool(fwd_layer) and (not bwd_layer or len(fwd_layer) <= len(bwd_layer))
        if grow_fwd:
            fwd_layer, meet = expand(fwd_layer, fwd, bwd)
            fwd_depth += 1
        else:
            bwd_layer, meet = expand(bwd_layer, bwd, fwd)
            bwd_depth += 1
        if meet is not None:
            return _join(fwd, bwd, meet)
    return None


def _join(fwd: dict, bwd: dict, meet: Word) -> list[RewriteStep]:
    head: list[RewriteStep] = []
    w = meet
    while fwd[w] is not None:
        w, step = fwd[w]
        head.append(step)
    head.reverse()
    tail: list[RewriteStep] = []
    w = meet
    while bwd[w] is not None:
        prev, step = bwd[w]
        tail.append(step.inverse())
        w = prev
    return head + tail


def replay(u: Sequence[str], steps: Sequence[RewriteStep], R: "RelationSet | Iterable[Relation] | Presentation") -> Word:
    rels = _as_set(R)
    w = tuple(u)
    for s in steps:
        w = apply_step(w, s, rels)
    return w


def relation_sound(rel: Relation, i: Interpretation) -> bool:
    return interp_word(i, rel.lhs) == interp_word(i, rel.rhs)


def formal_reverse(w: Sequence[str]) -> Word:
    return tuple(reversed(tuple(w)))


def parse_presentation(text: str) -> Presentation:
    section = None
    gens: list[str] = []
    rels: list[Relation] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("generators", "relations"):
                raise ValueError(f"line {lineno}: unknown section [{section}]")
            continue
        if section == "generators":
            gens.extend(line.split())
        elif section == "relations":
            rels.append(parse_relation(line, lineno))
        else:
            raise ValueError(f"line {lineno}: content before any section header")
    return Presentation(tuple(gens), tuple(rels))


def parse_relation(line: str, lineno: int = 0) -> Relation:
    rid, sep, body = line.partition(":")
    if not sep or "=" not in body:
        raise ValueError(f"line {lineno}: expected 'id: lhs = rhs', got {line!r}")
    lhs, _, rhs = body.partition("=")
    if "=" in rhs:
        raise ValueError(f"line {lineno}: more than one '=' in relation")
    rid = rid.strip()
    if not rid or any(c.isspace() for c in rid):
        raise ValueError(f"line {lineno}: bad relation id {rid!r}")
    return Relation(parse_word(lhs), parse_word(rhs), rid)


def dump_presentation(p: Presentation) -> str:
    lines = ["[generators]", " ".join(p.alphabet), "[relations]"]
    lines += [str(r) for r in p.relations]
    return "\n".join(lines) + "\n"
