import itertools

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from herbrand_lab.syntax import parse_term
from herbrand_lab.terms import (
    Struct,
    Substitution,
    Var,
    VarSupply,
    apply,
    ground_terms_upto_depth,
    iter_ground_terms,
    match,
    render_term,
    single_binding_unifiers,
    term_key,
    term_size,
    unify,
    variables,
    variant_of,
)
from oracles import robinson, sub
from strategies import SIG, VARS, ground_terms, terms

X, Y, Z = Var("X"), Var("Y"), Var("Z")
a, b = Struct("a"), Struct("b")
T = parse_term


def f(*args):
    return Struct("f", args)


# --- oracles -----------------------------------------------------------------


def variant_oracle(s, t):
    return match(s, t) is not None and match(t, s) is not None


# --- unify -------------------------------------------------------------------


def test_unify_examples():
    assert unify(X, X) == Substitution()
    assert unify(T("p(X,X,Y)"), T("p(f(a),f(a),b)")) == {X: T("f(a)"), Y: b}
    assert unify(X, f(X)) is None
    assert unify(T("g(X)"), T("f(X,Y)")) is None
    assert unify(T("f(X,Y)"), T("f(Y,a)")) == {X: a, Y: a}


def test_unify_tuples():
    assert unify((X, Y), (a, X)) == {X: a, Y: a}


@given(terms(), terms())
def test_unify_agrees_with_robinson(t1, t2):
    mine, ref = unify(t1, t2), robinson(t1, t2)
    assert (mine is None) == (ref is None)
    if mine is not None:
        assert mine(t1) == mine(t2)
        assert mine.is_idempotent()
        # both are most general, so they agree up to renaming
        assert variant_of(mine(t1), sub(t1, ref))


@given(terms(), st.data())
def test_unify_instance_with_itself(t, data):
    theta = Substitution({v: data.draw(terms(max_leaves=3)) for v in variables(t) if data.draw(st.booleans())})
    mgu = unify(t, theta(t))
    if mgu is not None:
        assert mgu(t) == mgu(theta(t))


@given(terms(vars_=[X, Y], max_leaves=4), terms(vars_=[X, Y], max_leaves=4))
def test_every_ground_unifier_is_an_instance_of_the_mgu(t1, t2):
    mgu = unify(t1, t2)
    vs = variables([t1, t2])
    universe = ground_terms_upto_depth([("a", 0), ("g", 1)], 2)
    for combo in itertools.product(universe, repeat=len(vs)):
        gamma = Substitution(dict(zip(vs, combo)))
        if gamma(t1) != gamma(t2):
            continue
        assert mgu is not None
        assert match(tuple(mgu(v) for v in vs), tuple(gamma(v) for v in vs)) is not None


# --- substitutions -----------------------------------------------------------


def test_identity_bindings_dropped():
    s = Substitution({X: X, Y: a})
    assert s.domain == frozenset({Y})
    assert len(s) == 1


def test_apply_examples():
    V1 = Var("V1")
    assert apply(Substitution({V1: a}), T("p(V1,V1)")) == T("p(a,a)")
    assert apply(Substitution(), T("f(X,g(Y))")) == T("f(X,g(Y))")
    q1 = T("app([V1],[[]|V2],[V3,Z,[V1]])")
    rho = Substitution({V1: a, Var("V2"): T("g(a,X)"), Var("V3"): T("g(a,Y)")})
    assert apply(rho, q1) == T("app([a],[[]|g(a,X)],[g(a,Y),Z,[a]])")


def test_apply_is_simultaneous():
    assert apply(Substitution({X: Y, Y: X}), f(X, Y)) == f(Y, X)


@given(terms(), st.data())
def test_compose_law(t, data):
    th = Substitution({v: data.draw(terms(max_leaves=3)) for v in VARS if data.draw(st.booleans())})
    et = Substitution({v: data.draw(terms(max_leaves=3)) for v in VARS if data.draw(st.booleans())})
    assert th.compose(et)(t) == et(th(t))


@given(terms(), st.permutations(VARS))
def test_renaming_detection(t, perm):
    ren = Substitution(dict(zip(VARS, perm)))
    assert ren.is_renaming()
    assert variant_of(t, ren(t))


def test_varsupply_avoids_names():
    vs = VarSupply("V", avoid=["V1", Var("V3")]).take(3)
    assert [v.name for v in vs] == ["V2", "V4", "V5"]


# --- variants ----------------------------------------------------------------


def test_variant_examples():
    assert variant_of(T("p(X,Y)"), T("p(U,V)"))
    assert not variant_of(T("p(X,X)"), T("p(U,V)"))
    assert variant_of(T("app([V1],[V2],[V1,V2])"), T("app([X],[Y],[X,Y])"))
    assert not variant_of(T("p(X,Y)"), T("p(a,Y)"))


@given(terms(), terms())
def test_variant_matches_two_way_matching(s, t):
    assert variant_of(s, t) == variant_oracle(s, t)


# --- Lemma 2 oracle ----------------------------------------------------------


def test_single_binding_examples():
    universe = ground_terms_upto_depth([("f", 1), ("a", 0)], 2)
    assert single_binding_unifiers(X, T("f(a)"), universe) == [{X: T("f(a)")}]
    assert single_binding_unifiers(T("f(X)"), T("g(Y)"), universe) == []
    u2 = ground_terms_upto_depth([("a", 0), ("b", 0), ("f", 1)], 2)
    assert single_binding_unifiers(T("p(X,b)"), T("p(a,X)"), u2) == []


def test_single_binding_rejects_equal_terms():
    with pytest.raises(ValueError):
        single_binding_unifiers(X, X, [a])


_SMALL = [("a", 0), ("g", 1), ("f", 2)]
_UNIVERSE = ground_terms_upto_depth(_SMALL, 2) + [Struct("g", (v,)) for v in (X, Y)] + [
    Struct("f", p) for p in itertools.product([X, Y], repeat=2)
]


@given(terms(_SMALL, [X, Y], 5), terms(_SMALL, [X, Y], 5))
def test_at_most_one_single_binding_unifier(s1, s2):
    assume(s1 != s2)
    assert len(single_binding_unifiers(s1, s2, _UNIVERSE)) <= 1


# --- measures and enumeration --------------------------------------------------


@given(terms())
def test_proper_subterms_are_smaller(t):
    if isinstance(t, Struct):
        for arg in t.args:
            assert term_size(arg) < term_size(t)


def test_canonical_order():
    first = list(itertools.islice(iter_ground_terms([("a", 0), ("f", 1), ("b", 0)]), 5))
    assert [render_term(t) for t in first] == ["a", "b", "f(a)", "f(b)", "f(f(a))"]
    keys = [term_key(t) for t in first]
    assert keys == sorted(keys)


def test_ground_terms_upto_depth_counts():
    sig = [("a", 0), ("f", 2)]
    assert len(ground_terms_upto_depth(sig, 0)) == 1
    assert len(ground_terms_upto_depth(sig, 1)) == 2
    assert len(ground_terms_upto_depth(sig, 2)) == 5


@given(ground_terms(SIG, 6))
def test_ground_depth_enumeration_is_complete(t):
    d = t.depth
    if d <= 2:
        assert t in set(ground_terms_upto_depth(SIG, 2))


def test_list_rendering():
    assert render_term(T("[a,b|T]")) == "[a,b|T]"
    assert render_term(T("'.'(a,'[]')")) == "[a]"
    assert render_term(T("[[]|K]")) == "[[]|K]"
