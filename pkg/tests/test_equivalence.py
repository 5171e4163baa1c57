import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tofhpres import equivalence as eq
from tofhpres import tables
from tofhpres.gates import SIGMA_0, SIGMA_1, SIGMA_2, coxeter_circuit, gate_matrix, standard_interpretation, word
from tofhpres.matrix import GateMatrix, SdeClass, commutes, mat_mul, sde_class

I = standard_interpretation()
HM = gate_matrix("H2")


def _recombined(nf: eq.NormalForm) -> GateMatrix:
    m = I(nf.body)
    return mat_mul(m, HM) if nf.h_exp else m


def test_normalize_examples():
    assert eq.normalize_h(word("H2 H2")) == eq.NormalForm((), 0)
    assert eq.normalize_h(word("H2 CCZ")) == eq.NormalForm(("CCX01",), 1)
    assert eq.normalize_h(("X0",)) == eq.NormalForm(("X0",), 0)
    with pytest.raises(ValueError):
        eq.normalize_h(("NEG[0]",))


def test_pushing_table_entries():
    table = eq.pushing_table()
    assert set(table) == set(SIGMA_1)
    for g, entry in table.items():
        assert mat_mul(HM, gate_matrix(g)) == mat_mul(I(entry), HM)
        assert "H2" not in entry
    assert table["CCX12"] == word("K01 K12 CCZ K12 K01")
    assert table["X2"] == ("Z2",)


def test_expanded_route_is_independent_and_sound():
    for g in SIGMA_1:
        route = eq.expanded_push(g)
        assert mat_mul(HM, gate_matrix(g)) == mat_mul(I(route), HM)
    assert set(eq.expand_to_primitives("CX02")) <= set(SIGMA_0)


def test_uncompacted_table_matches_semantics():
    for g, entry in eq.pushing_table(compact=False).items():
        assert I(entry) == mat_mul(mat_mul(HM, gate_matrix(g)), HM)


def test_circuits_equal_examples():
    v = eq.circuits_equal(word("H2 CCX12"), word("K01 K12 CCZ K12 K01 H2"))
    assert v.equal
    v = eq.circuits_equal((), ("X0",))
    assert not v.equal and v.witness_column == 0


def test_toffoli_report():
    assert eq.toffoli_report(()) == eq.ToffoliReport(0, True)
    assert eq.toffoli_report(("CCX01",) * 121) == eq.ToffoliReport(121, False)
    assert eq.toffoli_report(coxeter_circuit(3)) == eq.ToffoliReport(1, True)
    with pytest.raises(ValueError):
        eq.toffoli_report(("H2",))


sigma2_words = st.lists(st.sampled_from(SIGMA_2), max_size=10).map(tuple)


@given(sigma2_words)
def test_normal_form_semantics(w):
    nf = eq.normalize_h(w, check=True)
    assert _recombined(nf) == I(w)
    dyadic = sde_class(I(w)) is SdeClass.DyadicOrthogonal
    assert dyadic == (nf.h_exp == 0)
    assert eq.h_parity(w) == nf.h_exp


@given(sigma2_words, sigma2_words)
def test_circuits_equal_symmetric(a, b):
    assert eq.circuits_equal(a, b).equal == eq.circuits_equal(b, a).equal


def test_circuits_equal_equivalence_relation():
    rng = random.Random(3)
    pool = [tuple(rng.choice(("X0", "H2", "CCZ", "K12")) for _ in range(rng.randint(0, 4))) for _ in range(25)]
    pool += [eq.normalize_h(w).word() for w in pool]
    for a in pool:
        assert eq.circuits_equal(a, a).equal
    for a in pool[:12]:
        for b in pool[:12]:
            for c in pool[:12]:
                if eq.circuits_equal(a, b).equal and eq.circuits_equal(b, c).equal:
                    assert eq.circuits_equal(a, c).equal


def test_interdefinability_identities():
    for r in tables.interdefinability():
        assert I(r.lhs) == I(r.rhs), r.id
    ccz = word("K12 CZ12 X0 TLK[0,1,2,3] X0 CZ12 TLK[0,1,2,3] TLX[5,6]")
    assert I(ccz) != gate_matrix("CCZ")
    assert I(word("K12 CCZ") * 3 + ("TLX[5,6]",)) == gate_matrix("TLK[0,1,2,3]")


def test_two_level_decompositions():
    assert I(word("X0 X1 CCX01 X1 X0")) == gate_matrix("TLX[0,1]")
    for tok, circuit in tables.ADJACENT_X_CIRCUITS.items():
        assert I(word(circuit)) == gate_matrix(tok)
    assert I(word(tables.NEG0_CIRCUIT)) == gate_matrix("NEG[0]")
    assert I(word(tables.NEG0_PUBLISHED)) == gate_matrix("NEG[1]")


def test_commutant_witnesses():
    sub_n = [gate_matrix(s) for s in ("CX01", "CCX12", "K12", "CCZ")]
    assert all(commutes(eq.WITNESS_N, m) for m in sub_n)
    assert not commutes(eq.WITNESS_N, gate_matrix("X0"))
    sub_l = [gate_matrix(s) for s in ("X0", "CCX12", "TLK[0,1,2,3]")]
    assert all(commutes(eq.WITNESS_L, m) for m in sub_l)
    assert not commutes(eq.WITNESS_L, gate_matrix("CX01"))


def test_minimality_witness():
    full = [gate_matrix(s) for s in SIGMA_0]
    sub = full[1:]
    m = eq.minimality_witness(sub, full)
    assert m is not None and eq.separates(m, sub, full)
    assert eq.minimality_witness(full, full) is None
    full_k = [gate_matrix(s) for s in eq.SIGMA_K]
    sub_k = [full_k[0], full_k[2], full_k[3]]
    m = eq.minimality_witness(sub_k, full_k)
    assert m is not None and eq.separates(m, sub_k, full_k)


def test_probe_examples():
    assert eq.finite_subgroup_probe([gate_matrix("X0")], 100).order == 2
    gens = [gate_matrix(s) for s in ("X0", "SW01", "SW12")]
    res = eq.finite_subgroup_probe(gens, 1000)
    assert res.order == 48 == eq.closure_order(gens, 1000)
    small = eq.finite_subgroup_probe([HM, gate_matrix("CCX01")], 10)
    assert small.order is None and small.exceeded_cap
    big = eq.finite_subgroup_probe([HM, gate_matrix("CCX01")], 10 ** 7)
    assert big.order == 16 and not big.exceeded_cap


def test_probe_routes_agree():
    gens = [gate_matrix(s) for s in ("X0", "CX01", "K12")]
    assert eq.finite_subgroup_probe(gens, 10 ** 7).order == eq.closure_order(gens, 10 ** 6)
