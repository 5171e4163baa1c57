"""
Derivations, proofs and Tietze moves
====================================
"""

from pathlib import Path

import tofhpres
from tofhpres import schemas, tables
from tofhpres.gates import word
from tofhpres.presentation import Presentation, Relation, derive_search, replay
from tofhpres.proofs import check_proof, flatten, load_proof
from tofhpres.tietze import DefiningFamily, Journal, dgen_eliminate

data = Path(tofhpres.__file__).parent / "data"

# search for a derivation of CX01 X1 = X1 CX01 using only swap symmetry and orders
rels = schemas.symmetry_family() + schemas.order_family() + [schemas.commutator_family("CX10", "X0")]
steps = derive_search(word("CX01 X1"), word("X1 CX01"), rels, max_steps=12)
w = word("CX01 X1")
print(" ".join(w))
for s in steps:
    w = replay(w, [s], rels)
    print(f"  {s}  ->  {' '.join(w) or '.'}")

# proofs cite base relations and other lemmas
proof = load_proof(data / "proofs" / "derivs_subs.proof")
print("\n".join(check_proof(proof).lines()))
for d in flatten(proof).derivations:
    print("flat", d.label.name, [str(s) for s in d.steps])

# a proof whose lemmas depend on each other is rejected
print(check_proof(load_proof(data / "proofs" / "cyclic.proof")).lines()[-2:])

# eliminate the derived generators of R0; every move is journalled
rels = tables.r0()
p = Presentation(tuple(dict.fromkeys(s for r in rels for s in r.lhs + r.rhs)), tuple(rels))
journal = Journal(p)
q = dgen_eliminate(p, DefiningFamily.from_relations(tables.defining_relations()), journal)
print("alphabet after elimination:", q.alphabet)
print("moves recorded:", len(journal.moves))
print("undo restores the start:", journal.undo_all() == p)
