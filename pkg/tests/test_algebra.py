import itertools

import pytest
from hypothesis import given, strategies as st

from forcelab.algebra import (big_join, big_meet, complement, format_element, implies, join, leq,
                              make_algebra, meet, parse_element, ultrafilter_from_label,
                              ultrafilters)
from forcelab.errors import AlgebraError, ParseError
from forcelab.oracle import enumerate_ultrafilters_bruteforce


def test_make_algebra_sizes():
    assert len(make_algebra(1).elements()) == 2
    assert len(make_algebra(2).elements()) == 4
    assert make_algebra(20).size == 2 ** 20
    with pytest.raises(AlgebraError):
        make_algebra(21)
    with pytest.raises(AlgebraError):
        make_algebra(0)


def test_trivial_algebra_is_zero_one():
    B = make_algebra(1)
    assert [format_element(x) for x in B.elements()] == ["{}", "1"]
    assert B.zero != B.one


def test_operation_examples():
    B = make_algebra(2)
    a0, a1 = B.atoms()
    assert meet(B.one, a1) == a1
    assert implies(a0, B.zero) == a1
    for x in B.elements():
        assert join(x, complement(x)) == B.one


def test_implies_truth_table():
    # x => y computed atom by atom from the classical truth table of ->
    B = make_algebra(3)
    for x, y in itertools.product(B.elements(), repeat=2):
        expected = {i for i in range(3) if (i not in x.atoms) or (i in y.atoms)}
        assert implies(x, y).atoms == expected


def test_big_operations():
    B = make_algebra(2)
    a0, a1 = B.atoms()
    assert big_join([], B) == B.zero
    assert big_meet([], B) == B.one
    assert big_join([a0, a1]) == B.one
    assert big_meet([a0, a1]) == B.zero
    with pytest.raises(AlgebraError):
        big_join([])


def test_mixed_parents_rejected():
    x = make_algebra(2).one
    y = make_algebra(3).one
    with pytest.raises(AlgebraError):
        meet(x, y)
    with pytest.raises(AlgebraError):
        leq(x, y)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lattice_laws_exhaustive(n):
    B = make_algebra(n)
    els = B.elements()
    for x in els:
        assert complement(complement(x)) == x
        for y in els:
            assert complement(meet(x, y)) == join(complement(x), complement(y))
            assert complement(join(x, y)) == meet(complement(x), complement(y))
            assert meet(x, join(x, y)) == x
            assert join(x, meet(x, y)) == x
            assert leq(x, y) == (meet(x, y) == x)
            for z in els:
                assert meet(x, join(y, z)) == join(meet(x, y), meet(x, z))
                assert join(x, meet(y, z)) == meet(join(x, y), join(x, z))


def test_lattice_laws_six_atoms_distributivity():
    B = make_algebra(6)
    els = B.elements()
    for x, y, z in itertools.product(els[::3], els[::2], els):
        assert meet(x, join(y, z)) == join(meet(x, y), meet(x, z))
        assert join(x, meet(y, z)) == meet(join(x, y), join(x, z))


masks20 = st.integers(min_value=0, max_value=2 ** 20 - 1)


@given(masks20, masks20, masks20)
def test_lattice_laws_random_large(a, b, c):
    B = make_algebra(20)
    x, y, z = B.from_mask(a), B.from_mask(b), B.from_mask(c)
    assert meet(x, join(y, z)) == join(meet(x, y), meet(x, z))
    assert join(x, meet(y, z)) == meet(join(x, y), join(x, z))
    assert complement(meet(x, y)) == join(complement(x), complement(y))
    assert meet(x, join(x, y)) == x
    # glb / lub with respect to leq
    assert leq(meet(x, y), x) and leq(meet(x, y), y)
    assert leq(x, join(x, y)) and leq(y, join(x, y))
    if leq(z, x) and leq(z, y):
        assert leq(z, meet(x, y))


def test_leq_partial_order():
    B = make_algebra(3)
    els = B.elements()
    for x in els:
        assert leq(x, x)
        for y in els:
            if leq(x, y) and leq(y, x):
                assert x == y
            for z in els:
                if leq(x, y) and leq(y, z):
                    assert leq(x, z)


def test_element_syntax():
    B = make_algebra(3)
    assert str(parse_element("a0 & a1", B)) == "{}"
    assert str(parse_element("~a0", B)) == "{a1,a2}"
    assert str(parse_element("a0 | a1 | a2", B)) == "1"
    assert str(parse_element("a0 => a1", B)) == "{a1,a2}"
    # ~ binds tighter than &, & tighter than |, | tighter than =>
    assert parse_element("~a0 & a1 | a2", B) == join(meet(complement(B.atom(0)), B.atom(1)), B.atom(2))
    assert parse_element("a0 => a1 => 0", B) == implies(B.atom(0), implies(B.atom(1), B.zero))
    assert parse_element("{a0,a2}", B) == B.element([0, 2])
    assert parse_element("{}", B) == B.zero
    for x in B.elements():
        assert parse_element(format_element(x), B) == x
    with pytest.raises(ParseError):
        parse_element("a3", B)
    with pytest.raises(ParseError):
        parse_element("a0 &", B)


def test_ultrafilter_examples():
    B1 = make_algebra(1)
    (U,) = ultrafilters(B1)
    assert U.members() == [B1.one]
    assert len(ultrafilters(make_algebra(3))) == 3
    for n in range(1, 5):
        B = make_algebra(n)
        for U in ultrafilters(B):
            for x in B.elements():
                assert (x in U) != (complement(x) in U)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ultrafilters_match_brute_force(n):
    B = make_algebra(n)
    mine = {frozenset(x.atoms for x in U.members()) for U in ultrafilters(B)}
    assert mine == set(enumerate_ultrafilters_bruteforce(n))


def test_ultrafilter_from_label():
    B = make_algebra(3)
    assert ultrafilter_from_label(B, "a2").generator_atom == 2
    with pytest.raises(AlgebraError):
        ultrafilter_from_label(B, "a3")
