"""Derivational proofs: parsing, checking, lemma inlining and flattening.

Proof file format::

    [proof over <presentation-file> | builtin:<SET>,<SET>,...]
    lemma <name> (<index>): lhs = rhs
      rel <id> at <pos> fwd|rev
      use <name> at <pos> fwd|rev

Positions are 0-based word offsets.  ``at <pos>`` and the direction may be
omitted; such a step is resolved to its leftmost match at check time and any
alternative match is reported.  Steps are numbered from 1 in diagnostics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx

from .gates import Word
from .presentation import (
    Direction,
    Presentation,
    Relation,
    RewriteStep,
    format_word,
    parse_presentation,
    parse_word,
)
from .tietze import MoveKind, TietzeMove


class ProofError(ValueError):
    pass


@dataclass(frozen=True)
class ProofLabel:
    name: str
    index: int
    claim: Relation

    @property
    def key(self) -> tuple[int, Word, Word]:
        return (self.index, self.claim.lhs, self.claim.rhs)

    def __str__(self) -> str:
        return f"{self.name} ({self.index}): {format_word(self.claim.lhs)} = {format_word(self.claim.rhs)}"


@dataclass(frozen=True)
class ProofStep:
    ref: str
    lemma: bool = False
    position: int | None = None
    direction: Direction | None = None

    def __str__(self) -> str:
        out = f"{'use' if self.lemma else 'rel'} {self.ref}"
        if self.position is not None:
            out += f" at {self.position}"
        if self.direction is not None:
            out += f" {self.direction.value}"
        return out


@dataclass(frozen=True)
class Derivation:
    label: ProofLabel
    steps: tuple[ProofStep, ...]

    def citations(self) -> list[str]:
        return [s.ref for s in self.steps if s.lemma]


@dataclass(frozen=True)
class Proof:
    derivations: tuple[Derivation, ...]
    base: Presentation

    def by_name(self) -> dict[str, Derivation]:
        return {d.label.name: d for d in self.derivations}

    def derivation(self, name: str) -> Derivation:
        for d in self.derivations:
            if d.label.name == name:
                return d
        raise ProofError(f"no derivation named {name!r}")

    def claims(self) -> list[Relation]:
        return [d.label.claim for d in self.derivations]


@dataclass
class DerivationReport:
    name: str
    valid: bool
    resolved: list[RewriteStep] = field(default_factory=list)
    messages: list[str] = field(default_factory=list)


@dataclass
class ProofReport:
    indexed: bool
    wellfounded: bool
    valid: bool
    acyclic: bool
    derivations: list[DerivationReport]
    cycle: list[tuple[str, str]] | None = None
    messages: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.indexed and self.wellfounded and self.valid and self.acyclic

    def lines(self) -> list[str]:
        out = [
            f"indexed: {'yes' if self.indexed else 'no'}",
            f"well-founded: {'yes' if self.wellfounded else 'no'}",
            f"valid: {'yes' if self.valid else 'no'}",
            f"acyclic: {'yes' if self.acyclic else 'no'}",
        ]
        if self.cycle:
            out.append("cycle: " + " -> ".join([self.cycle[0][0]] + [v for _, v in self.cycle]))
        out += self.messages
        for d in self.derivations:
            out += [f"{d.name}: {m}" for m in d.messages]
        out.append("ACCEPTED" if self.accepted else "REJECTED")
        return out


# --- checking ----------------------------------------------------------------


def _relation_for(step: ProofStep, proof: Proof) -> Relation | None:
    if step.lemma:
        d = proof.by_name().get(step.ref)
        return d.label.claim if d is not None else None
    return proof.base.relation_map.get(step.ref)


def _candidates(w: Word, rel: Relation, direction: Direction | None, position: int | None) -> list[tuple[int, Direction]]:
    out = []
    dirs = [direction] if direction is not None else [Direction.Forward, Direction.Reverse]
    positions = [position] if position is not None else range(len(w) + 1)
    for p in positions:
        for d in dirs:
            pat, _ = rel.side(d)
            if 0 <= p and p + len(pat) <= len(w) and w[p:p + len(pat)] == pat:
                out.append((p, d))
    return out


def _apply(w: Word, rel: Relation, p: int, d: Direction) -> Word:
    pat, rep = rel.side(d)
    return w[:p] + rep + w[p + len(pat):]


def _replay(deriv: Derivation, proof: Proof) -> DerivationReport:
    rep = DerivationReport(deriv.label.name, True)
    w = deriv.label.claim.lhs
    for k, step in enumerate(deriv.steps, 1):
        rel = _relation_for(step, proof)
        if rel is None:
            rep.valid = False
            rep.messages.append(f"step {k}: {step} cites nothing in scope")
            return rep
        cands = _candidates(w, rel, step.direction, step.position)
        if not cands:
            rep.valid = False
            rep.messages.append(f"step {k}: {step} does not apply to {format_word(w)}")
            return rep
        if step.position is None and len(cands) > 1:
            alts = ", ".join(f"{p} {d.value}" for p, d in cands[1:4])
            rep.messages.append(f"step {k}: {step} resolved leftmost to {cands[0][0]} {cands[0][1].value}; also matches {alts}")
        p, d = cands[0]
        rep.resolved.append(RewriteStep(step.ref, p, d))
        w = _apply(w, rel, p, d)
    if w != deriv.label.claim.rhs:
        rep.valid = False
        rep.messages.append(f"ends at {format_word(w)}, expected {format_word(deriv.label.claim.rhs)}")
    return rep


def derivation_graph(proof: Proof) -> nx.DiGraph:
    """Edge l -> l' when the derivation of l cites l'."""
    g = nx.DiGraph()
    g.add_nodes_from(d.label.name for d in proof.derivations)
    names = set(g.nodes)
    for d in proof.derivations:
        for ref in d.citations():
            if ref in names:
                g.add_edge(d.label.name, ref)
    return g


def check_proof(proof: Proof) -> ProofReport:
    msgs: list[str] = []
    keys = [d.label.key for d in proof.derivations]
    names = [d.label.name for d in proof.derivations]
    indexed = len(set(keys)) == len(keys) and len(set(names)) == len(names)
    if not indexed:
        msgs.append("two derivations share a label")
    wellfounded = True
    lookup = proof.by_name()
    for d in proof.derivations:
        for k, s in enumerate(d.steps, 1):
            ok = s.ref in lookup if s.lemma else s.ref in proof.base.relation_map
            if not ok:
                wellfounded = False
                kind = "lemma" if s.lemma else "relation"
                msgs.append(f"{d.label.name} step {k}: unknown {kind} {s.ref!r}")
    reports = [_replay(d, proof) for d in proof.derivations]
    valid = all(r.valid for r in reports)
    try:
        cycle = [(u, v) for u, v in nx.find_cycle(derivation_graph(proof))]
    except nx.NetworkXNoCycle:
        cycle = None
    return ProofReport(indexed, wellfounded, valid, cycle is None, reports, cycle, msgs)


def resolve(proof: Proof) -> Proof:
    """The same proof with every position and direction made explicit."""
    lookup = {}
    for d in proof.derivations:
        rep = _replay(d, proof)
        if not rep.valid:
            raise ProofError(f"derivation {d.label.name} does not replay: {rep.messages[-1]}")
        steps = tuple(
            ProofStep(s.ref, s.lemma, r.position, r.direction) for s, r in zip(d.steps, rep.resolved)
        )
        lookup[d.label.name] = Derivation(d.label, steps)
    return Proof(tuple(lookup[d.label.name] for d in proof.derivations), proof.base)


# --- inlining and flattening ---------------------------------------------------


def _rebased(steps: Sequence[ProofStep], offset: int, direction: Direction) -> list[ProofStep]:
    if direction is Direction.Forward:
        return [replace(s, position=s.position + offset) for s in steps]  # type: ignore[operator]
    return [
        replace(s, position=s.position + offset, direction=s.direction.flipped())  # type: ignore[operator,union-attr]
        for s in reversed(steps)
    ]


def inline_lemma(proof: Proof, at: str, lemma: str) -> Proof:
    """Replace every citation of ``lemma`` inside ``at`` by the lemma's own steps."""
    if at == lemma:
        raise ProofError("a derivation cannot be inlined into itself")
    proof = resolve(proof)
    target, source = proof.derivation(at), proof.derivation(lemma)
    if lemma not in target.citations():
        raise ProofError(f"{at} does not cite {lemma}")
    if source.citations():
        raise ProofError(f"{lemma} cites other lemmas; inline those first")
    steps: list[ProofStep] = []
    for s in target.steps:
        if s.lemma and s.ref == lemma:
            steps += _rebased(source.steps, s.position, s.direction)  # type: ignore[arg-type]
        else:
            steps.append(s)
    new = Derivation(target.label, tuple(steps))
    return Proof(tuple(new if d.label.name == at else d for d in proof.derivations), proof.base)


def flatten(proof: Proof) -> Proof:
    """Inline lemmas until every derivation cites base relations only."""
    report = check_proof(proof)
    if not report.accepted:
        raise ProofError("only accepted proofs can be flattened")
    g = derivation_graph(proof)
    # cited lemmas are flattened before the derivations citing them
    for name in reversed(list(nx.topological_sort(g))):
        while True:
            cited = proof.derivation(name).citations()
            if not cited:
                break
            proof = inline_lemma(proof, name, cited[0])
    return resolve(proof)


def to_relplus_moves(proof: Proof, target: Iterable[Relation]) -> list[TietzeMove]:
    """Rel(+) moves adding every target relation outside the base, justified by flattened steps."""
    flat = flatten(proof)
    base = {(r.lhs, r.rhs) for r in proof.base.relations}
    by_claim = {(d.label.claim.lhs, d.label.claim.rhs): d for d in flat.derivations}
    moves: list[TietzeMove] = []
    for rel in target:
        key = (rel.lhs, rel.rhs)
        if key in base:
            continue
        d = by_claim.get(key)
        if d is None:
            raise ProofError(f"relation {rel} is neither a base relation nor a claim of the proof")
        steps = tuple(RewriteStep(s.ref, s.position, s.direction) for s in d.steps)  # type: ignore[arg-type]
        moves.append(TietzeMove(MoveKind.RelPlus, Relation(rel.lhs, rel.rhs, rel.id), steps))
    return moves


# --- parsing -------------------------------------------------------------------

_HEADER = re.compile(r"^\[proof over\s+(.+)\]$")
_LEMMA = re.compile(r"^lemma\s+(\S+)\s*\((\d+)\)\s*:(.*)$")
_STEP = re.compile(r"^(rel|use)\s+(\S+)(?:\s+at\s+(\d+))?(?:\s+(fwd|rev))?$")


def builtin_presentation(names: Sequence[str]) -> Presentation:
    from .schemas import instantiate

    rels: list[Relation] = []
    for name in names:
        rels += instantiate(name.strip(), 8)
    alphabet = tuple(dict.fromkeys(s for r in rels for s in r.lhs + r.rhs))
    return Presentation(alphabet, tuple(rels))


def load_base(spec: str, relative_to: Path | None = None) -> Presentation:
    spec = spec.strip()
    if spec.startswith("builtin:"):
        return builtin_presentation([n for n in spec[len("builtin:"):].split(",") if n.strip()])
    path = Path(spec)
    if not path.is_absolute() and relative_to is not None:
        path = relative_to / path
    return parse_presentation(path.read_text(encoding="utf-8"))


def parse_proof(text: str, relative_to: Path | None = None, base: Presentation | None = None) -> Proof:
    derivs: list[tuple[ProofLabel, list[ProofStep]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            if base is None:
                base = load_base(m.group(1), relative_to)
            continue
        m = _LEMMA.match(line)
        if m:
            lhs, sep, rhs = m.group(3).partition("=")
            if not sep:
                raise ProofError(f"line {lineno}: lemma claim needs 'lhs = rhs'")
            name = m.group(1)
            claim = Relation(parse_word(lhs), parse_word(rhs), name)
            derivs.append((ProofLabel(name, int(m.group(2)), claim), []))
            continue
        m = _STEP.match(line)
        if m:
            if not derivs:
                raise ProofError(f"line {lineno}: step before any lemma")
            pos = int(m.group(3)) if m.group(3) is not None else None
            d = Direction(m.group(4)) if m.group(4) else None
            derivs[-1][1].append(ProofStep(m.group(2), m.group(1) == "use", pos, d))
            continue
        raise ProofError(f"line {lineno}: cannot parse {line!r}")
    if base is None:
        raise ProofError("missing '[proof over ...]' header")
    return Proof(tuple(Derivation(lab, tuple(steps)) for lab, steps in derivs), base)


def load_proof(path: str | Path) -> Proof:
    path = Path(path)
    return parse_proof(path.read_text(encoding="utf-8"), path.parent)


def dump_proof(proof: Proof, over: str) -> str:
    lines = [f"[proof over {over}]"]
    for d in proof.derivations:
        lines.append(f"lemma {d.label}")
        lines += [f"  {s}" for s in d.steps]
    return "\n".join(lines) + "\n"
