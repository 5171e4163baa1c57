import itertools

import pytest

from tofhpres import schemas, tables
from tofhpres.gates import SIGMA_D, gate_matrix, level_interpretation, standard_interpretation, word
from tofhpres.matrix import mat_mul
from tofhpres.presentation import Relation, relation_sound

I = standard_interpretation()


def test_instantiate_examples():
    assert len(schemas.instantiate("ZCom1", 8)) == 56
    rep1 = schemas.instantiate("Rep1", 8)
    assert len(rep1) == 8
    assert rep1[3] == Relation(("NEG[3]", "NEG[3]"), (), "Rep1[3]")
    assert len(schemas.instantiate("R_E8", 8)) == 36


def test_instantiate_is_sorted_and_deterministic():
    for tag in schemas.SCHEMATA:
        a = schemas.instantiate(tag, 6)
        assert a == schemas.instantiate(tag, 6)
        keys = [tuple(int(x) for x in r.id[len(tag) + 1:-1].split(",")) for r in a]
        assert keys == sorted(keys)


def test_instances_are_well_formed():
    for r in schemas.instantiate("R_n", 8):
        for tok in r.lhs + r.rhs:
            idx = [int(x) for x in tok[tok.index("[") + 1:-1].split(",")]
            assert idx == sorted(set(idx))


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8, 9])
def test_counts_match_formulas(n):
    report = schemas.count_all(n)
    assert report.mismatches() == []


def test_count_subtotals_at_8():
    report = schemas.count_all(8)
    assert report.partial == 1414
    assert report.linear_by_m[5] == 224
    assert report.enumerated["Rep9"] == 1
    assert report.linear == 709
    assert report.total == 2123
    diag = report.diagnostics()
    assert any("m=3" in d and "112" in d and "102" in d for d in diag)
    assert schemas.count_all(6).diagnostics() == []


def test_unknown_schema():
    with pytest.raises(ValueError):
        schemas.instantiate("Nope")
    with pytest.raises(ValueError):
        schemas.instantiate("R0", 6)


@pytest.mark.parametrize("n", [5, 6])
def test_schemata_sound_at_small_n(n):
    i = level_interpretation(n)
    bad = {r.id.split("[")[0] for r in schemas.instantiate("R_n", n) if not relation_sound(r, i)}
    assert bad <= schemas.KNOWN_UNSOUND_SCHEMATA


def test_published_rep5a_is_unsound():
    tpl = schemas.SCHEMATA_PUBLISHED_ERRATA["Rep5a"]
    rels = schemas.instantiate_template("Rep5a", tpl, 8)
    assert rels and not any(relation_sound(r, I) for r in rels)


def test_r3_restrictions():
    ids = {r.id.split("[")[0] for r in schemas.r3(8)}
    assert "fig5.eq1" in ids
    for r in schemas.r3(8):
        if r.id.startswith("fig5.eq1["):
            a = int(r.id[len("fig5.eq1["):-1])
            assert 0 <= a < 7
    assert len(schemas.r3(6)) < len(schemas.r3(8))


def test_commutator_examples():
    r = schemas.commutator_family("CX10", "X0")
    m, n = gate_matrix("CX10"), gate_matrix("X0")
    assert r.lhs == ("CX10", "X0") and r.rhs[0] == "X0"
    assert I(r.rhs[1:]) == mat_mul(mat_mul(n, m), n)
    assert schemas.commutator_family("X0", "X0").rhs == ("X0", "X0")
    with pytest.raises(ValueError):
        schemas.commutator_family("X0", "X1")


def _bfs_minimal_length(target, depth: int) -> int | None:
    """Oracle: plain breadth-first search over Sigma_D to the given depth."""
    frontier = {I(()): 0}
    layer = [I(())]
    for d in range(1, depth + 1):
        nxt = []
        for m in layer:
            for s in SIGMA_D:
                mm = mat_mul(m, gate_matrix(s))
                if mm not in frontier:
                    frontier[mm] = d
                    nxt.append(mm)
        layer = nxt
    return frontier.get(target)


def test_commutator_words_are_minimal():
    sample = schemas.commutator_relations()[::23]
    for r in sample:
        w = r.rhs[1:]
        assert _bfs_minimal_length(I(w), 3) == len(w)


def test_family_sizes_and_soundness():
    sizes = {name: len(f()) for name, f in schemas.FAMILIES.items()}
    assert sizes["Order"] == len(SIGMA_D)
    assert sizes["R_D"] == sizes["Bifunctoriality"] + sizes["Symmetry"] + sizes["Order"] + sizes["Commutator"] + 1
    assert all(relation_sound(r, I) for r in schemas.rd_relations())
    assert schemas.symmetry_skipped() == [("SW01", "K12"), ("SW12", "K01")]


def test_bifunctoriality_disjoint_only():
    for r in schemas.bifunctoriality_family():
        a, b = r.lhs
        assert not (schemas._support(a) & schemas._support(b))


def test_tables_sound_except_known():
    for name in ("R_E8", "R_E8(D)", "R_D(E8)", "R0", "TofH", "abbreviations"):
        assert all(relation_sound(r, I) for r in schemas.instantiate(name)), name
    bad = [r.id for r in tables.r2() if not relation_sound(r, I)]
    assert bad == ["fig7.eq18"]


def test_published_errata_are_unsound():
    for rid, text in tables.R0_PUBLISHED_ERRATA.items():
        lhs, rhs = text.split("=")
        assert not relation_sound(Relation(word(lhs), word(rhs), rid), I)
    for rid, text in tables.INTERDEF_PUBLISHED_ERRATA.items():
        lhs, rhs = text.split("=")
        assert not relation_sound(Relation(word(lhs), word(rhs), rid), I)


def test_relation_tallies():
    assert len(tables.r1()) == 65
    assert len(tables.r2()) == 72
    assert len(tables.r0()) == 46


def test_derived_symbols_defined_once():
    defs = tables.defining_relations()
    assert len(defs) == tables.DEFINING_COUNT
    lhs = [r.lhs[0] for r in defs]
    assert len(lhs) == len(set(lhs))
    assert set(lhs) | set(tables.COXETER_ALPHABET) >= set(lhs)
    assert not set(itertools.chain.from_iterable(r.rhs for r in defs)) - set(SIGMA_D)
