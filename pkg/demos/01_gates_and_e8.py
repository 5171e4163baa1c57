"""
Gates, exact matrices and the E8 root system
============================================
"""

from tofhpres.gates import coxeter_circuit, coxeter_generator, gate_matrix, standard_interpretation, word
from tofhpres.lattice import e8_roots, positive_roots, householder, SIMPLE_ROOTS
from tofhpres.matrix import sde_class, mat_mul

interp = standard_interpretation()

# every entry is numer / sqrt2**k with one shared exponent
k12 = gate_matrix("K12")
print("K12 =")
print(k12)
print("K12 class:", sde_class(k12).name)
print("H2 class: ", sde_class(gate_matrix("H2")).name)

# a word is read left to right as a matrix product
print("H2 CCZ == CCX01 H2 :", interp(word("H2 CCZ")) == interp(word("CCX01 H2")))

# the 240 roots and the 120 positive ones for the chosen simple roots
roots = e8_roots()
print("roots:", len(roots), "positive:", len(positive_roots()))

# each Coxeter generator is a reflection and also a short circuit
for j in range(1, 9):
    circuit = coxeter_circuit(j)
    same = interp(circuit) == coxeter_generator(j) == householder(SIMPLE_ROOTS[j - 1])
    print(f"r{j} = {' '.join(circuit):45s} matches: {same}")

# r1 r2 has order 3, r1 r3 order 2
r1, r2, r3 = (coxeter_generator(j) for j in (1, 2, 3))
p = mat_mul(r1, r2)
print("(r1 r2)^3 is identity:", mat_mul(mat_mul(p, p), p) == interp(()))
