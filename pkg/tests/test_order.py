import itertools

import pytest

from forcelab.algebra import make_algebra
from forcelab.errors import CapExceeded, NotDenseError, ParseError, PosetError
from forcelab.oracle import enumerate_dense, enumerate_regular_opens, poset_catalog
from forcelab.order import (ALL, Poset, all_dense_subsets, antichain, chain, closure, complete,
                            interior, is_dense, is_filter, is_generic, is_regular_open,
                            load_dense_family, load_poset, make_dense, make_filter,
                            poset_to_text, regularize, ro_complement, ro_join, up_filter)


def catalog(max_n):
    return [Poset(range(n), [(a, b) for a, b in pairs if a != b]) for n, pairs in poset_catalog(max_n)]


def test_load_poset(data_dir):
    P = load_poset((data_dir / "cohen1x1.txt").read_text())
    assert P.leq("c0", "e") and not P.leq("e", "c0")
    assert sorted(P.minimal()) == ["c0", "c1"]
    assert load_poset(poset_to_text(P)).le == P.le


def test_load_poset_errors():
    with pytest.raises(PosetError):
        load_poset("elem a\nelem b\nle a b\nle b a\n")
    with pytest.raises(PosetError):
        load_poset("le q p\nle p q\n")
    # ids used only in le lines are declared implicitly
    assert len(load_poset("le q p\n")) == 2
    with pytest.raises(ParseError):
        load_poset("element a\n")


def test_transitive_closure():
    P = chain(4)
    assert P.leq("c0", "c3")
    assert P.down("c2") == {"c0", "c1", "c2"}
    assert P.maximal() == ["c3"]


def test_density_examples(data_dir):
    P = load_poset((data_dir / "cohen1x1.txt").read_text())
    assert is_dense(P, {"c0", "c1"})
    assert not is_dense(P, {"c0"})
    with pytest.raises(NotDenseError):
        make_dense(P, {"c0"})
    (D,) = load_dense_family((data_dir / "cohen1x1_dense.txt").read_text(), P)
    assert D.label == "both" and D.members == {"c0", "c1"}
    A = antichain(2)
    assert enumerate_dense(A) == [frozenset({"p0", "p1"})]


def test_filters():
    P = chain(3)
    assert is_filter(P, {"c2"})
    assert not is_filter(P, set())
    assert not is_filter(P, {"c0"})
    A = antichain(2)
    assert not is_filter(A, {"p0", "p1"})
    with pytest.raises(PosetError):
        make_filter(A, {"p0", "p1"})


def test_genericity_examples():
    P = chain(3)
    assert not is_generic(P, make_filter(P, {"c2"}))
    assert is_generic(P, up_filter(P, "c0"))
    A = antichain(3)
    assert is_generic(A, up_filter(A, "p1"))
    with pytest.raises(CapExceeded):
        all_dense_subsets(antichain(16))


def test_genericity_against_explicit_family():
    P = chain(3)
    D = make_dense(P, {"c0", "c1"})
    assert is_generic(P, up_filter(P, "c1"), [D])
    assert not is_generic(P, up_filter(P, "c1"), ALL)


@pytest.mark.parametrize("P", catalog(5), ids=lambda P: f"n{len(P)}")
def test_closure_operators(P):
    els = list(P.elements)
    subsets = [frozenset(s) for r in range(len(els) + 1) for s in itertools.combinations(els, r)]
    for S in subsets:
        c, i = closure(P, S), interior(P, S)
        assert S <= c and i <= S
        assert closure(P, c) == c and interior(P, i) == i
        assert regularize(P, regularize(P, S)) == regularize(P, S)
    for S, T in itertools.combinations(subsets, 2):
        if S <= T:
            assert closure(P, S) <= closure(P, T)
            assert interior(P, S) <= interior(P, T)


@pytest.mark.parametrize("P", catalog(6)[::7], ids=lambda P: f"n{len(P)}")
def test_regular_opens_match_oracle(P):
    C = complete(P)
    ros = set(enumerate_regular_opens(P))
    assert len(ros) == C.target.size
    assert {C.to_regular_open(b) for b in C.target.elements()} == ros
    for S in ros:
        assert is_regular_open(P, S)
        assert C.to_regular_open(C.from_regular_open(S)) == S
        assert ro_complement(P, ro_complement(P, S)) == S
        assert ro_join(P, [S, ro_complement(P, S)]) == frozenset(P.elements)


def test_completion_examples(data_dir):
    C = complete(Poset(["only"]))
    assert C.target.atom_count == 1 and C.embed["only"] == C.target.one
    C = complete(antichain(2))
    assert C.target.atom_count == 2
    assert C.embed["p0"] & C.embed["p1"] == C.target.zero
    C = complete(load_poset((data_dir / "cohen1x1.txt").read_text()))
    assert C.target.atom_count == 2
    assert C.embed["e"] == C.target.one
    assert C.target.atom_labels == ("c0", "c1")
    assert str(C.embed["c0"]) == "{a0}"
    with pytest.raises(PosetError):
        C.from_regular_open({"c0", "e"})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_completion_of_boolean_algebra_minus_zero(n):
    B = make_algebra(n)
    els = [x for x in B.elements() if not x.is_zero()]
    P = Poset.from_order(els, lambda q, p: q <= p)
    C = complete(P)
    assert C.target.atom_count == n
    # the embedding is an order isomorphism onto the nonzero elements
    assert len({C.embed[p] for p in els}) == len(els)
    for p, q in itertools.product(els, repeat=2):
        assert (p <= q) == (C.embed[p] <= C.embed[q])
