"""
Relation tables, schema instances and their counts
==================================================
"""

from tofhpres import schemas, tables
from tofhpres.gates import standard_interpretation
from tofhpres.presentation import relation_sound

interp = standard_interpretation()

# a few relations over the 3-qubit alphabet
for r in tables.r0()[:5]:
    print(r)

# check whole tables by exact matrix equality
for name in ("R0", "R_E8", "R_E8(D)", "TofH", "R_D"):
    rels = schemas.instantiate(name)
    ok = sum(relation_sound(r, interp) for r in rels)
    print(f"{name:8s} {ok}/{len(rels)} sound")

# multi-level schemata are instantiated over index tuples
rep1 = schemas.instantiate("Rep1", 8)
print(rep1[0], "...", rep1[-1])

# enumeration versus closed-form binomials
report = schemas.count_all(8)
print("linear:", report.linear, "partial:", report.partial, "total:", report.total)
print("formula mismatches:", report.mismatches())
for line in report.diagnostics():
    print("DELTA", line)

# one schema stays unsound as listed; the tables flag it
bad = [r.id for r in schemas.instantiate("Rep8", 8) if not relation_sound(r, interp)]
print("Rep8 unsound instances:", len(bad))
