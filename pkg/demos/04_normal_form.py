"""
Pushing H2 to the end of a circuit
==================================
"""

import random

from tofhpres import equivalence as eq
from tofhpres.gates import SIGMA_2, gate_matrix, word

# the pushing table: H2 g = g' H2
for g, entry in list(eq.pushing_table().items())[:8]:
    print(f"H2 {g:6s} = {' '.join(entry):30s} H2")

w = word("H2 CCX12 X0 H2 K12 H2")
nf = eq.normalize_h(w, check=True)
print("word:       ", " ".join(w))
print("normal form:", nf)
print("equal:      ", eq.circuits_equal(w, nf.word()))

# parity of the H2 exponent is forced by the matrix
rng = random.Random(1)
for _ in range(5):
    w = tuple(rng.choice(SIGMA_2) for _ in range(10))
    print(eq.normalize_h(w).h_exp, eq.h_parity(w), " ".join(w))

# Toffoli count of a circuit over the 3-qubit W(E8) alphabet
print(eq.toffoli_report(word("X0 CCX01 X0 CCX12")))

# a matrix commuting with everything except X0
sub = [gate_matrix(s) for s in ("CX01", "CCX12", "K12")]
full = sub + [gate_matrix("X0")]
print(eq.minimality_witness(sub, full))

# the group generated by X0, CX01, K12 and CCZ is finite
print(eq.finite_subgroup_probe([gate_matrix(s) for s in ("X0", "CX01", "K12", "CCZ")], 10 ** 7))
