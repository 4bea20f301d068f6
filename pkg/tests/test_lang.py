import random

import pytest
from hypothesis import given, settings, strategies as st

from forcelab.errors import ParseError
from forcelab.lang import (And, BoundedExists, BoundedForall, Const, Eq, Exists, Forall, Iff,
                           Implies, Mem, Not, Or, Sub, Var, depth, desugar, free_vars,
                           is_desugared, parse, random_formula, sentence_corpus, substitute,
                           to_text, validate)


def test_parse_open_formula_with_constants():
    f = parse("forall x . (x in y -> x = z)", constants={"y", "z"}, open=True)
    assert f == Forall("x", Implies(Mem(Var("x"), Const("y")), Eq(Var("x"), Const("z"))))


def test_parse_powerset_axiom():
    f = parse("forall x . exists y . forall z . (z sub x <-> z in y)")
    x, y, z = Var("x"), Var("y"), Var("z")
    assert f == Forall("x", Exists("y", Forall("z", Iff(Sub(z, x), Mem(z, y)))))
    d = desugar(f)
    sub = Forall("w", Or(Not(Mem(Var("w"), z)), Mem(Var("w"), x)))
    assert d == Forall("x", Exists("y", Forall("z", And(Or(Not(sub), Mem(z, y)),
                                                      Or(Not(Mem(z, y)), sub)))))


def test_syntax_error_position():
    with pytest.raises(ParseError) as e:
        parse("x in")
    assert e.value.line == 1 and e.value.column == 5
    with pytest.raises(ParseError) as e:
        parse("x = y &\n  ~ = z")
    assert e.value.line == 2


def test_unbound_variable_rejected_in_sentence_mode():
    with pytest.raises(ParseError):
        parse("x in u", constants={"u"})
    assert parse("x in u", constants={"u"}, open=True) == Mem(Var("x"), Const("u"))


def test_precedence_and_associativity():
    a, b, c = (Mem(Const(n), Const("s")) for n in "abc")
    assert parse("a in s | b in s & c in s") == Or(a, And(b, c))
    assert parse("a in s -> b in s -> c in s") == Implies(a, Implies(b, c))
    assert parse("a in s <-> b in s <-> c in s") == Iff(Iff(a, b), c)
    assert parse("~a in s & b in s") == And(Not(a), b)
    assert parse("a in s -> b in s | c in s") == Implies(a, Or(b, c))


def test_bounded_quantifier():
    f = parse("forall x in u . exists y in x . y = y")
    assert f == BoundedForall("x", Const("u"), BoundedExists("y", Var("x"), Eq(Var("y"), Var("y"))))
    assert parse(to_text(f)) == f


def test_desugar_examples():
    phi, psi = Eq(Const("a"), Const("b")), Mem(Const("a"), Const("b"))
    assert desugar(Implies(phi, psi)) == Or(Not(phi), psi)
    assert desugar(Iff(phi, psi)) == And(Or(Not(phi), psi), Or(Not(psi), phi))
    assert desugar(phi) == phi


def test_sub_desugar_avoids_clash():
    f = desugar(Sub(Const("w"), Var("w'")))
    assert isinstance(f, Forall) and f.var == "w''"


def test_free_vars_and_substitute():
    assert free_vars(Forall("x", Mem(Var("x"), Const("y")))) == set()
    f = substitute(Exists("x", Eq(Var("x"), Var("v"))), "v", Var("x"))
    assert f == Exists("x'", Eq(Var("x'"), Var("x")))
    # only free occurrences are replaced
    g = And(Mem(Var("v"), Const("u")), Forall("v", Eq(Var("v"), Var("v"))))
    assert substitute(g, "v", Const("c")) == And(Mem(Const("c"), Const("u")),
                                                 Forall("v", Eq(Var("v"), Var("v"))))
    # the bound of a bounded quantifier lies outside its scope
    h = BoundedExists("x", Var("v"), Mem(Var("x"), Var("v")))
    assert substitute(h, "v", Var("x")) == BoundedExists("x'", Var("x"), Mem(Var("x'"), Var("x")))


def test_validate():
    validate(parse("forall x . x = x"))
    with pytest.raises(Exception):
        validate(Mem(Var("x"), Const("u")))


# --- generated ASTs ---------------------------------------------------------------

names = st.sampled_from(["x", "y", "z", "u", "w1"])
terms = st.one_of(names.map(Var), names.map(Const))


def formulas(max_leaves=12):
    atoms = st.builds(lambda k, a, b: k(a, b), st.sampled_from([Eq, Mem, Sub]), terms, terms)
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            sub.map(Not),
            st.builds(lambda k, a, b: k(a, b), st.sampled_from([And, Or, Implies, Iff]), sub, sub),
            st.builds(lambda k, v, b: k(v, b), st.sampled_from([Exists, Forall]), names, sub),
            st.builds(lambda k, v, t, b: k(v, t, b),
                      st.sampled_from([BoundedExists, BoundedForall]), names, terms, sub),
        ),
        max_leaves=max_leaves)


def _scoped(f, bound=frozenset()):
    """Whether every Var occurrence is bound and no Const shadows a bound name (parser invariants)."""
    if isinstance(f, (Eq, Mem, Sub)):
        return all((t.name in bound) == isinstance(t, Var) for t in (f.left, f.right))
    if isinstance(f, Not):
        return _scoped(f.body, bound)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _scoped(f.left, bound) and _scoped(f.right, bound)
    if isinstance(f, (BoundedExists, BoundedForall)):
        if (f.bound.name in bound) != isinstance(f.bound, Var):
            return False
    return _scoped(f.body, bound | {f.var})


@settings(max_examples=300)
@given(formulas())
def test_round_trip_generated(f):
    if depth(f) > 6 or not _scoped(f):
        return
    assert parse(to_text(f)) == f


def test_round_trip_corpus_of_100():
    rng = random.Random(7)
    for _ in range(100):
        f = random_formula(rng, 6, ["a", "b", "c"])
        assert parse(to_text(f)) == f


@given(formulas())
def test_desugar_idempotent_and_preserves_free_vars(f):
    d = desugar(f)
    assert is_desugared(d)
    assert desugar(d) == d
    assert free_vars(d) == free_vars(f)


def test_sentence_corpus():
    corpus = sentence_corpus(["a", "b"], 500, max_depth=3, seed=1)
    assert len(set(corpus)) == 500
    assert all(depth(f) <= 3 and not free_vars(f) for f in corpus)
    assert corpus == sentence_corpus(["a", "b"], 500, max_depth=3, seed=1)
