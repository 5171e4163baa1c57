"""Command-line interface.  Every subcommand prints line-oriented text, or a
JSON report with ``--json``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import schemas, tables
from .equivalence import circuits_equal, minimality_witness, normalize_h
from .gates import coxeter_orders, gate_matrix, level_interpretation, standard_interpretation
from .lattice import COXETER_MATRIX, e8_roots, positive_roots
from .presentation import (
    Direction,
    Presentation,
    Relation,
    RewriteStep,
    derive_search,
    dump_presentation,
    format_word,
    parse_presentation,
    parse_word,
    relation_sound,
    replay,
)
from .proofs import check_proof, flatten, load_base, load_proof, parse_proof
from .tietze import SEMANTIC, Journal, MoveKind, TietzeError, parse_move_line


class CliError(Exception):
    pass


def _read_word(source: str) -> tuple[str, ...]:
    text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    return parse_word(" ".join(lines))


def _emit(args: argparse.Namespace, report: dict[str, Any], lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for ln in lines:
            print(ln)


def _relations_source(spec: str) -> Presentation:
    return load_base(spec if spec.startswith("builtin:") or Path(spec).exists() else f"builtin:{spec}")


# --- subcommands ------------------------------------------------------------


def cmd_eq(args: argparse.Namespace) -> int:
    w1, w2 = _read_word(args.file1), _read_word(args.file2)
    v = circuits_equal(w1, w2)
    report = {"equal": v.equal, "witness_column": v.witness_column, "h_exp": list(v.h_exp or ())}
    _emit(args, report, [str(v)])
    return 0 if v.equal else 1


def cmd_normalize(args: argparse.Namespace) -> int:
    nf = normalize_h(_read_word(args.file))
    _emit(args, {"body": list(nf.body), "h_exp": nf.h_exp}, [f"body: {format_word(nf.body)}", f"h_exp: {nf.h_exp}"])
    return 0


_KNOWN_UNSOUND = tables.KNOWN_UNSOUND | schemas.R3_KNOWN_UNSOUND


def _known(rid: str) -> bool:
    return rid in _KNOWN_UNSOUND or rid.split("[")[0] in schemas.KNOWN_UNSOUND_SCHEMATA


def cmd_verify(args: argparse.Namespace) -> int:
    rels = schemas.instantiate(args.set, args.n)
    interp = level_interpretation(args.n) if args.n != 8 else standard_interpretation()
    bad = [r.id for r in rels if not relation_sound(r, interp)]
    known = [b for b in bad if _known(b)]
    report = {
        "set": args.set,
        "n": args.n,
        "relations": len(rels),
        "sound": len(rels) - len(bad),
        "unsound": bad,
        "unsound_known": known,
    }
    lines = [f"{args.set} (n={args.n}): {len(rels) - len(bad)}/{len(rels)} sound"]
    lines += [f"UNSOUND {b}" + (" (known)" if _known(b) else "") for b in bad]
    _emit(args, report, lines)
    return 1 if bad else 0


def cmd_check_proof(args: argparse.Namespace) -> int:
    proof = load_proof(args.proof)
    rep = check_proof(proof)
    report = {
        "indexed": rep.indexed,
        "wellfounded": rep.wellfounded,
        "valid": rep.valid,
        "acyclic": rep.acyclic,
        "accepted": rep.accepted,
        "cycle": [list(e) for e in rep.cycle] if rep.cycle else None,
        "messages": rep.messages + [f"{d.name}: {m}" for d in rep.derivations for m in d.messages],
    }
    lines = rep.lines()
    if args.flatten and rep.accepted:
        flat = flatten(proof)
        for d in flat.derivations:
            lines.append(f"flat {d.label.name}: " + "; ".join(str(s) for s in d.steps))
        report["flattened"] = {d.label.name: [str(s) for s in d.steps] for d in flat.derivations}
    _emit(args, report, lines)
    return 0 if rep.accepted else 1


def cmd_rewrite(args: argparse.Namespace) -> int:
    pres = _relations_source(args.rels)
    u, v = parse_word(args.from_word), parse_word(args.to_word)
    steps = derive_search(u, v, pres, args.max_steps, args.max_width, args.slack)
    if steps is None:
        _emit(args, {"found": False, "steps": []}, ["no derivation within bounds"])
        return 1
    lines, w = [format_word(u)], u
    for s in steps:
        w = replay(w, [s], pres)
        lines.append(f"  {s}  ->  {format_word(w)}")
    _emit(args, {"found": True, "steps": [str(s) for s in steps]}, lines)
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    rep = schemas.count_all(args.n)
    lines = [f"{'schema':<8} {'enumerated':>10} {'formula':>8}"]
    for t in schemas.SCHEMATA:
        lines.append(f"{t:<8} {rep.enumerated[t]:>10} {rep.formula[t]:>8}")
    lines.append(f"linear subtotal: {rep.linear}")
    lines += [f"  m={m}: {c}" for m, c in rep.linear_by_m.items()]
    lines.append(f"partial subtotal: {rep.partial}")
    lines.append(f"total: {rep.total}")
    lines += [f"DELTA {d}" for d in rep.diagnostics()]
    report = {
        "n": rep.n,
        "enumerated": rep.enumerated,
        "formula": rep.formula,
        "linear_by_m": {str(m): c for m, c in rep.linear_by_m.items()},
        "linear": rep.linear,
        "partial": rep.partial,
        "total": rep.total,
        "mismatches": rep.mismatches(),
        "published_deltas": rep.diagnostics(),
    }
    _emit(args, report, lines)
    return 0 if not rep.mismatches() else 1


def cmd_roots(args: argparse.Namespace) -> int:
    roots, pos = e8_roots(), positive_roots()
    orders = coxeter_orders()
    bad = [f"{j},{k}" for (j, k), o in orders.items() if o != COXETER_MATRIX[j - 1][k - 1]]
    report = {"roots": len(roots), "positive_roots": len(pos), "coxeter_mismatches": bad}
    lines = [f"roots: {len(roots)}", f"positive roots: {len(pos)}", f"Coxeter orders match: {'yes' if not bad else 'no'}"]
    _emit(args, report, lines)
    return 0 if not bad else 1


def cmd_minimality(args: argparse.Namespace) -> int:
    sub = [s for s in args.sub.split(",") if s]
    full = [s for s in args.full.split(",") if s]
    m = minimality_witness([gate_matrix(s) for s in sub], [gate_matrix(s) for s in full], args.coeff_bound)
    if m is None:
        _emit(args, {"witness": None}, ["no witness within bounds (inconclusive)"])
        return 1
    rows = [[str(e) for e in row] for row in m.entries()]
    _emit(args, {"witness": rows}, ["witness:"] + [" ".join(f"{e:>6}" for e in row) for row in rows])
    return 0


def _parse_steps(text: str) -> tuple[RewriteStep, ...]:
    out = []
    for part in text.split(";"):
        toks = part.split()
        if not toks:
            continue
        if len(toks) != 5 or toks[0] != "rel" or toks[2] != "at":
            raise CliError(f"bad step {part.strip()!r}; expected 'rel <id> at <pos> fwd|rev'")
        out.append(RewriteStep(toks[1], int(toks[3]), Direction(toks[4])))
    return tuple(out)


def run_move_script(path: Path) -> Journal:
    """Apply a move script; the first line names the starting presentation."""
    journal: Journal | None = None
    lemmas: dict[str, tuple[Relation, tuple[RewriteStep, ...]]] = {}
    injective = False

    def resolve(ref: str, rel: Relation, kind: MoveKind):
        assert journal is not None and journal.current is not None
        if ref == "semantic":
            return SEMANTIC
        if ref == "search":
            pres = journal.current
            if kind is MoveKind.RelMinus:
                pres = pres.with_relations(r for r in pres.relations if r.id != rel.id)
            steps = derive_search(rel.lhs, rel.rhs, pres)
            if steps is None:
                raise CliError(f"no derivation found for {rel.id}")
            return tuple(steps)
        if ref.startswith("steps "):
            return _parse_steps(ref[len("steps "):])
        if ref in lemmas:
            claim, steps = lemmas[ref]
            if (claim.lhs, claim.rhs) == (rel.lhs, rel.rhs):
                return steps
            if (claim.rhs, claim.lhs) == (rel.lhs, rel.rhs):
                return tuple(s.inverse() for s in reversed(steps))
            raise CliError(f"lemma {ref} proves {claim}, not {rel}")
        raise CliError(f"unknown justification {ref!r}")

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("[moves over") and line.endswith("]"):
                start = load_base(line[len("[moves over"):-1], path.parent)
                journal = Journal(start)
                continue
            if journal is None:
                raise CliError("missing '[moves over ...]' header")
            if line.startswith("interpret "):
                injective = line.split()[1:] == ["standard", "injective"]
                cur = journal.current
                assert cur is not None
                interp = standard_interpretation(cur.alphabet, injective=injective)
                journal.current = Presentation(cur.alphabet, cur.relations, interp)
                continue
            if line.startswith("proofs "):
                proof_path = path.parent / line.split(None, 1)[1]
                flat = flatten(parse_proof(proof_path.read_text(encoding="utf-8"), proof_path.parent))
                for d in flat.derivations:
                    lemmas[d.label.name] = (
                        d.label.claim,
                        tuple(RewriteStep(s.ref, s.position, s.direction) for s in d.steps),  # type: ignore[arg-type]
                    )
                continue
            assert journal.current is not None
            journal.apply(parse_move_line(line, resolve, journal.current))
        except (TietzeError, CliError, KeyError, ValueError) as exc:
            raise CliError(f"{path.name}:{lineno}: {exc}") from None
    if journal is None:
        raise CliError("empty move script")
    return journal


def cmd_apply_moves(args: argparse.Namespace) -> int:
    journal = run_move_script(Path(args.script))
    assert journal.current is not None
    report = {
        "moves": [str(m) for m in journal.moves],
        "generators": list(journal.current.alphabet),
        "relations": [str(r) for r in journal.current.relations],
    }
    lines = [f"applied {len(journal.moves)} moves"] + [f"  {m}" for m in journal.moves]
    lines.append(dump_presentation(journal.current).rstrip())
    _emit(args, report, lines)
    return 0


def cmd_emit(args: argparse.Namespace) -> int:
    rels = schemas.instantiate(args.set, args.n)
    alphabet = tuple(dict.fromkeys(s for r in rels for s in r.lhs + r.rhs))
    text = dump_presentation(Presentation(alphabet, tuple(rels)))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    elif args.json:
        print(json.dumps({"generators": list(alphabet), "relations": [str(r) for r in rels]}, indent=2))
    else:
        sys.stdout.write(text)
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tofhpres", description="Presentations and circuit equivalence for 3-qubit Toffoli-Hadamard gates.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    sp = add("eq", cmd_eq, "decide whether two circuits are equal (exit 0 equal, 1 unequal, 2 error)")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp = add("normalize", cmd_normalize, "push every H2 to the right end")
    sp.add_argument("file")
    sp = add("verify", cmd_verify, "check every relation of a set by exact matrices")
    sp.add_argument("--set", required=True, choices=schemas.SCHEMA_IDS)
    sp.add_argument("--n", type=int, default=8)
    sp = add("check-proof", cmd_check_proof, "validate a derivational proof file")
    sp.add_argument("proof")
    sp.add_argument("--flatten", action="store_true")
    sp = add("rewrite", cmd_rewrite, "bounded search for a derivation between two words")
    sp.add_argument("--from", dest="from_word", required=True)
    sp.add_argument("--to", dest="to_word", required=True)
    sp.add_argument("--rels", required=True, help="presentation file or builtin:SET,SET")
    sp.add_argument("--max-steps", type=int, default=12)
    sp.add_argument("--max-width", type=int, default=200_000)
    sp.add_argument("--slack", type=int, default=6)
    sp = add("count", cmd_count, "count the instances of every relation schema")
    sp.add_argument("--n", type=int, default=8)
    add("roots", cmd_roots, "E8 root counts and Coxeter orders")
    sp = add("minimality", cmd_minimality, "find a matrix separating a generator subset")
    sp.add_argument("--sub", required=True, help="comma-separated gate tokens")
    sp.add_argument("--full", required=True, help="comma-separated gate tokens")
    sp.add_argument("--coeff-bound", type=int, default=4)
    sp = add("apply-moves", cmd_apply_moves, "apply a Tietze move script")
    sp.add_argument("script")
    sp = add("emit", cmd_emit, "write a built-in relation set as a presentation file")
    sp.add_argument("--set", required=True, choices=schemas.SCHEMA_IDS)
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("-o", "--output")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, TietzeError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
