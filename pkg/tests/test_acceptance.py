"""Acceptance suite: one group of tests per criterion.

The terminal summary prints one PASS/FAIL line per criterion.  Targets that
the shipped tables cannot meet as stated are checked literally under a
strict xfail, so they show up as FAIL while the run stays green.
"""

import itertools
import random

import pytest

from tofhpres import equivalence as eq
from tofhpres import schemas, tables
from tofhpres.gates import (
    CONSTRUCTION_TARGETS,
    PUBLISHED_TARGETS,
    SIGMA_0,
    SIGMA_2,
    construction_words,
    coxeter_generator,
    gate_matrix,
    parse_symbol,
    standard_interpretation,
    word,
)
from tofhpres.lattice import COXETER_MATRIX, e8_roots, positive_roots
from tofhpres.matrix import GateMatrix, SdeClass, commutes, mat_mul, sde_class
from tofhpres.presentation import Presentation, Relation, derive_search, relation_sound, replay
from tofhpres.proofs import check_proof, flatten, load_proof
from tofhpres.reindex import Permutation, conjugation_witness, reindex_symbol, reindex_valid, reindex_word
from tofhpres.tietze import (
    DefiningFamily,
    Journal,
    dgen_eliminate,
    dgen_intro_order,
    dgen_introduce,
    gen_minus,
    gen_plus,
    substitution_normal_form,
)

from conftest import DATA

I = standard_interpretation()
ID8 = GateMatrix.identity(8)
HM = gate_matrix("H2")

SOUNDNESS_SETS = ("R_E8", "R_E8(D)", "R0", "R_n", "R3", "R4", "R4_circuits", "TofH")
KNOWN_UNSOUND = tables.KNOWN_UNSOUND | schemas.R3_KNOWN_UNSOUND


def _unsound(name: str) -> list[str]:
    return [r.id for r in schemas.instantiate(name, 8) if not relation_sound(r, I)]


def _known(rid: str) -> bool:
    return rid in KNOWN_UNSOUND or rid.split("[")[0] in schemas.KNOWN_UNSOUND_SCHEMATA


# --- 1. relation soundness -----------------------------------------------------


@pytest.mark.criterion(1)
@pytest.mark.parametrize("name", SOUNDNESS_SETS)
def test_soundness_outside_known_unsound(name):
    bad = _unsound(name)
    assert [b for b in bad if not _known(b)] == []


@pytest.mark.criterion(1)
@pytest.mark.xfail(strict=True, reason="Rep8 instances, fig7.eq18 and fig5.eq14 are unsound as published")
def test_soundness_every_relation():
    bad = [b for name in SOUNDNESS_SETS for b in _unsound(name)]
    assert bad == [], f"{len(bad)} unsound: {sorted(set(b.split('[')[0] for b in bad))}"


# --- 2. Coxeter structure ------------------------------------------------------


@pytest.mark.criterion(2)
def test_coxeter_orders_exact():
    for j in range(1, 9):
        for k in range(j, 9):
            n = COXETER_MATRIX[j - 1][k - 1]
            prod = mat_mul(coxeter_generator(j), coxeter_generator(k))
            power = ID8
            for m in range(1, n + 1):
                power = mat_mul(power, prod)
                assert (power == ID8) == (m == n), (j, k, m)


# --- 3. root counts --------------------------------------------------------------


@pytest.mark.criterion(3)
def test_root_counts():
    assert len(e8_roots()) == 240
    assert len(positive_roots()) == 120


# --- 4. counting -------------------------------------------------------------------


@pytest.mark.criterion(4)
def test_counts_at_8():
    report = schemas.count_all(8)
    assert report.mismatches() == []
    assert report.partial == schemas.PUBLISHED_PARTIAL == 1414
    diag = report.diagnostics()
    assert report.linear_by_m[3] == 112
    assert any(d.startswith("linear m=3") for d in diag)
    assert any(str(report.linear) in d and "699" in d for d in diag)
    assert any(str(report.total) in d and "2113" in d for d in diag)


# --- 5. construction words ---------------------------------------------------------


@pytest.mark.criterion(5)
def test_construction_words_repaired():
    words = construction_words()
    for name, target in CONSTRUCTION_TARGETS.items():
        assert I(words[name]) == I(target), name


@pytest.mark.criterion(5)
@pytest.mark.xfail(strict=True, reason="published w10, w11, w13, w14 miss their targets; w11/w12 labels are exchanged")
def test_construction_words_as_published():
    words = construction_words(printed=True)
    missed = [n for n, t in PUBLISHED_TARGETS.items() if I(words[n]) != I(t)]
    assert missed == [], f"missed: {missed}"


# --- 6. proof checker ---------------------------------------------------------------


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", ["fig2a", "fig2b", "derivs_subs"])
def test_proofs_accepted(name):
    assert check_proof(load_proof(DATA / "proofs" / f"{name}.proof")).accepted


@pytest.mark.criterion(6)
def test_cyclic_proof_rejected():
    report = check_proof(load_proof(DATA / "proofs" / "cyclic.proof"))
    assert not report.accepted and report.cycle
    assert {u for u, _ in report.cycle} == {"l", "l'"}


@pytest.mark.criterion(6)
def test_flatten_derivs_subs():
    proof = load_proof(DATA / "proofs" / "derivs_subs.proof")
    flat = flatten(proof)
    assert flat.claims() == proof.claims()
    assert all(not s.lemma for d in flat.derivations for s in d.steps)
    assert check_proof(flat).accepted


# --- 7. derived-generator machinery ---------------------------------------------------


@pytest.mark.criterion(7)
def test_fig4_definitions_acyclic():
    D = DefiningFamily.from_relations(tables.defining_relations())
    assert len(dgen_intro_order(D)) == tables.DEFINING_COUNT


@pytest.mark.criterion(7)
def test_gen_roundtrip_random_presentations():
    rng = random.Random(11)
    for _ in range(100):
        alphabet = tuple(f"g{k}" for k in range(rng.randint(1, 4)))

        def rand_word() -> tuple[str, ...]:
            return tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 5)))

        rels = tuple(Relation(rand_word(), rand_word(), f"r{k}") for k in range(rng.randint(0, 5)))
        p = Presentation(alphabet, rels)
        assert gen_minus(gen_plus(p, "x", rand_word()), "x") == p


@pytest.mark.criterion(7)
def test_eliminate_then_reintroduce_r0():
    rels = tables.r0()
    alphabet = tuple(dict.fromkeys(s for r in rels for s in r.lhs + r.rhs))
    p = Presentation(alphabet, tuple(rels))
    D = DefiningFamily.from_relations(tables.defining_relations())
    j = Journal(p)
    q = dgen_eliminate(p, D, j)
    assert set(q.alphabet) == set(SIGMA_0)
    back = dgen_introduce(q, D)
    assert substitution_normal_form(back, D) == substitution_normal_form(p, D)
    assert j.undo_all() == p


# --- 8. normal form --------------------------------------------------------------------


def _normal_form_ok(w: tuple[str, ...]) -> None:
    nf = eq.normalize_h(w, check=True)
    m = I(w)
    body = I(nf.body)
    assert (mat_mul(body, HM) if nf.h_exp else body) == m
    assert (sde_class(m) is SdeClass.DyadicOrthogonal) == (nf.h_exp == 0)
    assert eq.circuits_equal(w, nf.word()).equal


@pytest.mark.criterion(8)
def test_normal_form_random_words():
    rng = random.Random(2024)
    for _ in range(1000):
        w = tuple(rng.choice(SIGMA_2) for _ in range(rng.randint(0, 20)))
        _normal_form_ok(w)


SUBALPHABET = ("X0", "CX01", "CCX12", "K12", "CCZ", "TLK[0,1,2,3]", "H2", "X2", "CX20", "SW02")


@pytest.mark.criterion(8)
def test_normal_form_exhaustive_short_words():
    for n in range(5):
        for w in itertools.product(SUBALPHABET, repeat=n):
            nf = eq.normalize_h(w)
            body = I(nf.body)
            assert (mat_mul(body, HM) if nf.h_exp else body) == I(w)
            assert (sde_class(I(w)) is SdeClass.DyadicOrthogonal) == (nf.h_exp == 0)


# --- 9. minimality ----------------------------------------------------------------------


@pytest.mark.criterion(9)
def test_fixed_witness_matrices():
    for g in ("CX01", "CCX12", "K12", "CCZ"):
        assert commutes(eq.WITNESS_N, gate_matrix(g))
    assert not commutes(eq.WITNESS_N, gate_matrix("X0"))
    for g in ("X0", "CCX12", "TLK[0,1,2,3]"):
        assert commutes(eq.WITNESS_L, gate_matrix(g))
    assert not commutes(eq.WITNESS_L, gate_matrix("CX01"))


@pytest.mark.criterion(9)
def test_witness_search():
    full0 = [gate_matrix(s) for s in SIGMA_0]
    sub0 = [gate_matrix(s) for s in SIGMA_0 if s != "X0"]
    m = eq.minimality_witness(sub0, full0)
    assert m is not None and eq.separates(m, sub0, full0)
    fullk = [gate_matrix(s) for s in eq.SIGMA_K]
    subk = [gate_matrix(s) for s in eq.SIGMA_K if s != "CX01"]
    m = eq.minimality_witness(subk, fullk)
    assert m is not None and eq.separates(m, subk, fullk)


@pytest.mark.criterion(9)
def test_subgroup_probe_below_cap():
    gens = [gate_matrix(s) for s in ("X0", "CX01", "K12", "CCZ")]
    res = eq.finite_subgroup_probe(gens, 10 ** 7)
    assert res.order is not None and not res.exceeded_cap
    # independent route: breadth-first closure
    assert eq.closure_order(gens, 10 ** 6) == res.order == 147456
    conj = [gate_matrix(s) for s in ("X0", "CX01", "K12", "CCX01")]
    assert eq.finite_subgroup_probe(conj, 10 ** 7).order == res.order


# --- 10. bounded derivation search --------------------------------------------------------


def _search(u: str, v: str, rels: list[Relation], slack: int) -> list:
    steps = derive_search(word(u), word(v), rels, max_steps=12, slack=slack)
    assert steps is not None and len(steps) <= 12
    assert replay(word(u), steps, rels) == word(v)
    return steps


@pytest.mark.criterion(10)
def test_search_r1_squared():
    rels = tables.e8d_relations() + schemas.rd_relations()
    first = _search("r1 r1", ".", rels, slack=8)
    assert _search("r1 r1", ".", rels, slack=8) == first


@pytest.mark.criterion(10)
def test_search_commutation():
    rels = schemas.rd_relations()
    first = _search("CX01 X1", "X1 CX01", rels, slack=6)
    assert _search("CX01 X1", "X1 CX01", rels, slack=6) == first
    # the longer route through the swap conjugation, without the direct commutator
    narrow = schemas.symmetry_family() + schemas.order_family() + [schemas.commutator_family("CX10", "X0")]
    route = _search("CX01 X1", "X1 CX01", narrow, slack=6)
    assert len(route) == 7


# --- 11. reindexing --------------------------------------------------------------------------

WORKED = word("TLK[2,3,4,5] TLK[3,5,6,7]")
WORKED_TARGET = word("TLK[0,1,2,5] TLK[1,3,4,5]")
WORKED_CYCLE = Permutation.from_cycle([7, 5, 3, 1, 6, 4, 2, 0], 8)


@pytest.mark.criterion(11)
@pytest.mark.xfail(strict=True, reason="no permutation maps the worked word to the stated target")
def test_worked_example_as_stated():
    assert reindex_valid(WORKED_CYCLE, WORKED)
    assert reindex_word(WORKED_CYCLE, WORKED) == WORKED_TARGET


@pytest.mark.criterion(11)
def test_worked_example_unreachable():
    hits = [
        p for p in itertools.permutations(range(8))
        if reindex_word(Permutation(p), WORKED) == WORKED_TARGET
    ]
    assert hits == []
    assert reindex_word(WORKED_CYCLE, WORKED) == word("TLK[0,1,2,3] TLK[1,3,4,5]")


def _random_pair(rng: random.Random, kind: str) -> tuple[Permutation, str]:
    k = {"NEG": 1, "TLX": 2, "TLK": 4}[kind]
    src = sorted(rng.sample(range(8), k))
    dst = sorted(rng.sample(range(8), k))
    rest_src = [i for i in range(8) if i not in src]
    rest_dst = [i for i in range(8) if i not in dst]
    rng.shuffle(rest_dst)
    img = [0] * 8
    for a, b in zip(src + rest_src, dst + rest_dst):
        img[a] = b
    return Permutation(tuple(img)), f"{kind}[{','.join(map(str, src))}]"


@pytest.mark.criterion(11)
def test_conjugation_witnesses_random():
    rng = random.Random(5)
    kinds = ["NEG", "TLX", "TLK"]
    for t in range(200):
        sigma, g = _random_pair(rng, kinds[t % 3])
        v = conjugation_witness(sigma, g)
        vm = I(v)
        image = gate_matrix(str(reindex_symbol(sigma, g)))
        assert image == mat_mul(mat_mul(vm, gate_matrix(g)), I(tuple(reversed(v))))
