import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from herbrand_lab.fuzz import FuzzConfig, Generator, _preds
from herbrand_lab.herbrand import model_satisfies
from herbrand_lab.sld import (
    Budget,
    RouteDisagreement,
    SLDSearch,
    Status,
    Verdict,
    canonical_answer,
    entails,
    entails_direct,
    entails_via_grounding,
    ground_with_fresh_constants,
    sld_answers,
)
from herbrand_lab.syntax import Signature, occurring_symbols, parse_clauses, parse_program, parse_query, render_query
from herbrand_lab.terms import Struct, Substitution, Var, match, render_term, variant_of
from oracles import naive_answers
from strategies import APPEND, APPEND3

PXXY = parse_program("#alphabet a/0.\np(X,X,Y).")[0]


def prog(text):
    return parse_program(text)[0]


def answers_text(p, q, **kw):
    res = sld_answers(p, parse_query(q), **kw)
    return [", ".join(f"{v} = {render_term(t)}" for v, t in s.items()) for s in res], res.exhausted


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        Budget(max_depth=0)
    with pytest.raises(ValueError):
        Budget(max_nodes=-1)


def test_verdict_is_not_a_boolean():
    with pytest.raises(TypeError):
        bool(Verdict.holds())
    assert Verdict.unknown(holds_up_to=3).label == "holds-up-to(3)"
    assert Verdict.fails().label == "fails"


def test_answers_examples():
    assert answers_text(parse_clauses("p(X).\np(a)."), "p(Y)", keep_duplicates=True) == (["", "Y = a"], True)
    assert answers_text(prog("p(a)."), "p(X)") == (["X = a"], True)
    assert answers_text(prog(APPEND), "app([a],[b],Z)") == (["Z = [a,b]"], True)


def test_answers_for_open_append_are_unbounded():
    ans, exhausted = answers_text(prog(APPEND), "app(X,Y,[a,b])")
    assert ans == ["X = [], Y = [a,b]", "X = [a], Y = [b]", "X = [a,b], Y = []"]
    assert exhausted
    res = sld_answers(prog(APPEND), parse_query("app(X,Y,Z)"), Budget(max_depth=5))
    assert not res.exhausted and len(res) == 5


def test_s_semantics_regression():
    p1, p2 = parse_clauses("p(X)."), parse_clauses("p(X).\np(a).")
    q = parse_query("p(Y)")
    a1, a2 = sld_answers(p1, q), sld_answers(p2, q)
    assert a1.answers == a2.answers == [{}]
    assert len(sld_answers(p2, q, keep_duplicates=True)) == 2
    assert len(sld_answers(p1, q, keep_duplicates=True)) == 1


def test_canonical_answer_names():
    q = parse_query("p(X,Y)")
    shared = Substitution({Var("X"): Var("W#1"), Var("Y"): Var("W#1")})
    assert canonical_answer(q, shared) == {Var("Y"): Var("X")}
    fresh = Substitution({Var("X"): Struct("f", (Var("A#3"), Var("B#4")))})
    assert str(canonical_answer(q, fresh)[Var("X")]) == "f(_1,_2)"


def test_budget_cut_is_unknown():
    loop = prog("#alphabet a/0.\np(X) :- p(X).")
    v = entails(loop, parse_query("p(a)"), Budget(max_depth=30, max_nodes=500))
    assert v.status is Status.UNKNOWN
    search = SLDSearch(loop, parse_query("p(a)"), Budget(max_depth=10))
    assert list(search.answers()) == [] and search.budget_hit and not search.exhausted


@pytest.mark.parametrize(
    "query, expected",
    [
        ("p(f(a),f(a),b)", Status.HOLDS),
        ("p(f(V1),V2,b)", Status.FAILS),
        ("p(V1,V2,b)", Status.FAILS),
        ("p(f(V),f(V),Z)", Status.HOLDS),
        ("p(V,V,b)", Status.HOLDS),
        ("p(V,V,Z)", Status.HOLDS),
    ],
)
def test_entailment_table(query, expected):
    q = parse_query(query)
    assert entails_direct(PXXY, q).status is expected
    assert entails_via_grounding(PXXY, q).status is expected
    assert entails(PXXY, q).status is expected


def test_entailment_examples():
    intro = prog("p(a).")
    assert entails_direct(intro, parse_query("p(X)")).status is Status.FAILS
    assert entails_via_grounding(intro, parse_query("p(X)")).status is Status.FAILS
    assert entails(intro, parse_query("p(a)")).status is Status.HOLDS
    q = parse_query("app([X],[Y],[X,Y])")
    assert entails_via_grounding(prog(APPEND3), q).status is Status.FAILS
    assert entails_via_grounding(prog(APPEND), q).status is Status.HOLDS
    assert entails(prog(APPEND), q).status is Status.HOLDS


def test_grounding_uses_reserved_constants():
    g, rho = ground_with_fresh_constants(prog(APPEND), parse_query("app([X],[Y],[X,Y])"))
    assert render_query(g) == "app([$c1],[$c2],[$c1,$c2])"
    assert not occurring_symbols(g) & occurring_symbols(prog(APPEND)) - {("[]", 0), (".", 2)}
    assert len(rho) == 2


def test_route_disagreement_carries_bundle():
    exc = RouteDisagreement(prog("p(a)."), parse_query("p(X)"), Verdict.holds(), Verdict.fails())
    assert exc.bundle["query"] == "p(X)"
    assert exc.bundle["direct"]["status"] == "holds"


# --- against the naive interpreter ------------------------------------------------


def _hierarchical_case(seed):
    g = Generator(random.Random(seed), FuzzConfig())
    syms = g.signature()
    preds = _preds(g.rng)
    p = g.program(syms, preds, hierarchical=True)
    q = g.query(syms, preds)
    return p, q, syms


@settings(max_examples=150)
@given(st.integers(0, 10**9))
def test_answers_match_naive_interpreter(seed):
    p, q, _ = _hierarchical_case(seed)
    ref = naive_answers(p, q)
    res = sld_answers(p, q, Budget(max_depth=20, max_nodes=100_000), keep_duplicates=True)
    assert res.exhausted
    mine = [tuple(s(a) for a in q.atoms) for s in res]
    # same answers up to renaming, each variant class reported once
    for inst in ref:
        assert sum(variant_of(inst, m) for m in mine) == 1
    for m in mine:
        assert any(variant_of(m, inst) for inst in ref)


@settings(max_examples=150)
@given(st.integers(0, 10**9))
def test_default_answers_are_the_most_general(seed):
    p, q, _ = _hierarchical_case(seed)
    ref = naive_answers(p, q)
    res = sld_answers(p, q, Budget(max_depth=20, max_nodes=100_000))
    mine = [tuple(s(a) for a in q.atoms) for s in res]
    for inst in ref:
        assert any(match(m, inst) is not None for m in mine)
    for i, m in enumerate(mine):
        assert not any(j != i and match(o, m) is not None for j, o in enumerate(mine))


@settings(max_examples=100)
@given(st.integers(0, 10**9))
def test_routes_agree_and_direct_matches_naive(seed):
    p, q, _ = _hierarchical_case(seed)
    direct = entails_direct(p, q, Budget(20, 100_000))
    ground = entails_via_grounding(p, q, Budget(20, 100_000))
    assert direct.definite and ground.definite
    assert direct.status is ground.status
    expected = any(variant_of(inst, q.atoms) for inst in naive_answers(p, q))
    assert (direct.status is Status.HOLDS) == expected


@settings(max_examples=60)
@given(st.integers(0, 10**9))
def test_computed_answers_are_true_in_the_model(seed):
    g = Generator(random.Random(seed), FuzzConfig())
    syms = g.signature()
    preds = _preds(g.rng)
    p = g.program(syms, preds)
    q = g.query(syms, preds)
    sig = Signature(frozenset(syms) | occurring_symbols(p) | occurring_symbols(q))
    res = sld_answers(p, q, Budget(8, 5000))
    for s in res.answers[:3]:
        v = model_satisfies(p, sig, q.substitute(s), Budget(10, 5000), depth_cap=1, max_instances=500)
        assert v.status is not Status.FAILS
