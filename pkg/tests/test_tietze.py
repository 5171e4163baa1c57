import pytest
from hypothesis import given
from hypothesis import strategies as st

from tofhpres import tables
from tofhpres.gates import SIGMA_0, gate_matrix, standard_interpretation, word
from tofhpres.presentation import Direction, Presentation, Relation, RewriteStep
from tofhpres.tietze import (
    SEMANTIC,
    DefiningFamily,
    DerivedCycleError,
    Journal,
    MoveKind,
    TietzeError,
    TietzeMove,
    dgen_eliminate,
    dgen_graph,
    dgen_intro_order,
    dgen_introduce,
    extend_interp,
    gen_minus,
    gen_plus,
    induced_hom_check,
    rel_minus,
    rel_plus,
    replay_moves,
    restrict_interp,
    substitution_normal_form,
)

FWD, REV = Direction.Forward, Direction.Reverse
Z0_DEF = word("CZ01 CX01 CZ01 CX01")


def sigma0() -> Presentation:
    rels = [Relation((s, s), (), f"ord.{s}") for s in SIGMA_0]
    return Presentation(SIGMA_0 + ("CZ01",), tuple(rels), standard_interpretation(SIGMA_0 + ("CZ01",)))


def test_gen_plus_examples():
    p = gen_plus(sigma0(), "Z0", Z0_DEF)
    assert p.relation("def.Z0") == Relation(("Z0",), Z0_DEF, "def.Z0")
    assert p.interpretation.mapping["Z0"] == gate_matrix("Z0")
    q = gen_plus(sigma0(), "x", ())
    assert q.relation("def.x").rhs == ()
    with pytest.raises(TietzeError):
        gen_plus(sigma0(), "X0", ())


def test_gen_minus_examples():
    p0 = sigma0()
    assert gen_minus(gen_plus(p0, "Z0", Z0_DEF), "Z0") == p0
    p = gen_plus(p0, "Z0", Z0_DEF)
    p = Presentation(p.alphabet, p.relations + (Relation(("Z0", "Z0"), (), "ord.Z0"),))
    with pytest.raises(TietzeError, match="ord.Z0"):
        gen_minus(p, "Z0")
    loop = Presentation(("a", "b"), (Relation(("a",), ("a", "b"), "self"),))
    with pytest.raises(TietzeError):
        gen_minus(loop, "a", "self")


def test_rel_plus_fig2a():
    from tofhpres import schemas

    rels = tables.e8d_relations() + schemas.rd_relations()
    alphabet = tuple(dict.fromkeys(s for r in rels for s in r.lhs + r.rhs))
    p = Presentation(alphabet, tuple(rels))
    steps = (
        RewriteStep("e8d.r1", 0, FWD),
        RewriteStep("e8d.r1", 5, FWD),
        RewriteStep("ord.X0", 4, FWD),
        RewriteStep("ord.X1", 3, FWD),
        RewriteStep("ord.CCX01", 2, FWD),
        RewriteStep("ord.X1", 1, FWD),
        RewriteStep("ord.X0", 0, FWD),
    )
    q = rel_plus(p, Relation(("r1", "r1"), (), "r1.order"), steps)
    assert "r1.order" in q.relation_map
    with pytest.raises(TietzeError):
        rel_plus(p, Relation(("r1", "r1"), (), "r1.order"), steps[:-1])


def test_rel_minus_cannot_cite_itself():
    p = Presentation(("a",), (Relation(("a", "a"), (), "r"),))
    with pytest.raises(TietzeError):
        rel_minus(p, "r", (RewriteStep("r", 0, FWD),))


def test_semantic_justification_gate():
    p = Presentation(SIGMA_0, (), standard_interpretation(SIGMA_0, injective=True))
    with pytest.raises(TietzeError):
        rel_plus(p, Relation(("X0",), ("CX01",), "false"), SEMANTIC)
    ok = rel_plus(p, Relation(("X0", "X0"), (), "true"), SEMANTIC)
    assert "true" in ok.relation_map
    not_injective = Presentation(SIGMA_0, (), standard_interpretation(SIGMA_0))
    with pytest.raises(TietzeError):
        rel_plus(not_injective, Relation(("X0", "X0"), (), "true"), SEMANTIC)


def test_induced_hom_check_examples():
    i = standard_interpretation()
    assert induced_hom_check(i, tables.r0())
    assert not induced_hom_check(i, tables.r0() + [Relation(("X0",), ("X1",), "bad")])
    assert induced_hom_check(i, [])


def test_extend_restrict():
    i = standard_interpretation(("CZ01", "CX01"))
    j = extend_interp(i, "Z0", Z0_DEF)
    assert j.mapping["Z0"] == gate_matrix("Z0")
    k = extend_interp(restrict_interp(j, "Z0"), "Z0", Z0_DEF)
    assert all(k.mapping[s] == j.mapping[s] for s in j.alphabet)
    with pytest.raises(TietzeError):
        extend_interp(j, "Z0", ())


def test_fig4_defining_family_acyclic():
    D = DefiningFamily.from_relations(tables.defining_relations())
    g = dgen_graph(D)
    order = dgen_intro_order(D)
    assert len(order) == len(D.defs)
    pos = {x: k for k, x in enumerate(order)}
    for u, v in g.edges:
        assert pos[v] < pos[u]
    assert D.primitives() == frozenset(SIGMA_0)


def test_cycle_detected():
    D = DefiningFamily({"x": ("y",), "y": ("x",)})
    with pytest.raises(DerivedCycleError) as exc:
        dgen_intro_order(D)
    assert {u for u, _ in exc.value.cycle} == {"x", "y"}


def test_eliminate_example():
    p = Presentation(("a", "b"), (Relation(("b",), ("a", "a"), "def.b"), Relation(("b", "b"), (), "bb")))
    D = DefiningFamily({"b": ("a", "a")})
    j = Journal(p)
    q = dgen_eliminate(p, D, j)
    assert q.alphabet == ("a",)
    assert [(r.lhs, r.rhs) for r in q.relations] == [(("a",) * 4, ())]
    assert j.undo_all() == p
    back = dgen_introduce(q, D)
    assert substitution_normal_form(back, D) == substitution_normal_form(p, D)


def test_eliminate_r0():
    rels = tables.r0()
    alphabet = tuple(dict.fromkeys(s for r in rels for s in r.lhs + r.rhs))
    p = Presentation(alphabet, tuple(rels), standard_interpretation())
    D = DefiningFamily.from_relations(tables.defining_relations())
    j = Journal(p)
    q = dgen_eliminate(p, D, j)
    assert set(q.alphabet) == set(SIGMA_0)
    assert all(r.symbols() <= set(SIGMA_0) for r in q.relations)
    assert induced_hom_check(standard_interpretation(), q)
    assert j.undo_all() == p
    back = dgen_introduce(q, D)
    assert substitution_normal_form(back, D) == substitution_normal_form(p, D)


def test_move_inverse_and_str():
    m = TietzeMove(MoveKind.RelPlus, Relation(("a",), (), "r"), SEMANTIC)
    assert m.inverse().kind is MoveKind.RelMinus
    assert "via semantic" in str(m)
    with pytest.raises(AttributeError):
        _ = m.symbol


_SYMS = ("a", "b", "c")


@st.composite
def presentations(draw):
    n = draw(st.integers(1, 3))
    alphabet = _SYMS[:n]
    w = st.lists(st.sampled_from(alphabet), max_size=4).map(tuple)
    rels = draw(st.lists(st.tuples(w, w), max_size=4))
    return Presentation(alphabet, tuple(Relation(l, r, f"r{k}") for k, (l, r) in enumerate(rels)))


@given(presentations(), st.data())
def test_gen_plus_minus_roundtrip(p, data):
    w = data.draw(st.lists(st.sampled_from(p.alphabet), max_size=5).map(tuple))
    q = gen_plus(p, "z", w)
    assert gen_minus(q, "z") == p
    j = replay_moves(p, [TietzeMove(MoveKind.GenPlus, Relation(("z",), w, "def.z"))])
    j.gen_minus("z")
    assert j.current == p and j.undo_all() == p


@given(st.lists(st.sampled_from(SIGMA_0), max_size=6).map(tuple))
def test_moves_preserve_soundness(w):
    i = standard_interpretation(SIGMA_0)
    p = Presentation(SIGMA_0, tuple(Relation((s, s), (), f"ord.{s}") for s in SIGMA_0), i)
    q = gen_plus(p, "g", w)
    assert induced_hom_check(q.interpretation, q)
    r = gen_minus(q, "g")
    assert induced_hom_check(r.interpretation, r)
