import pytest

from forcelab.lang import parse
from forcelab.names import EMPTY, HFSet, hf_sets_up_to_rank
from forcelab.oracle import (FiniteStructure, enumerate_dense, enumerate_filters,
                             enumerate_regular_opens, enumerate_ultrafilters_bruteforce,
                             membership_structure, poset_catalog, projected_value, tarski_eval)
from forcelab.errors import CapExceeded
from forcelab.order import antichain, chain


def test_tarski_on_v2():
    one = HFSet([EMPTY])
    s = membership_structure([EMPTY, one], {"e": EMPTY, "o": one})
    assert tarski_eval(s, parse("forall x . forall y . ((forall z . (z in x <-> z in y)) -> x = y)"))
    assert not tarski_eval(s, parse("exists x . x in x"))
    assert tarski_eval(s, parse("e in o & e sub o"))
    assert tarski_eval(s, parse("exists x in o . x = e"))


def test_structure_rejects_foreign_pairs():
    with pytest.raises(ValueError):
        FiniteStructure([1], {(1, 2)})


def test_projection_on_running_example():
    entries = {"z": {}, "u": {"z": 0b01}}
    assert projected_value(entries, 2, parse("z in u")) == 0b01
    assert projected_value(entries, 2, parse("u = z")) == 0b10


def test_dense_and_filter_counts():
    assert len(enumerate_dense(antichain(2))) == 1
    assert len(enumerate_dense(chain(2))) == 2
    assert len(enumerate_filters(chain(3))) == 3
    assert len(enumerate_filters(antichain(3))) == 3
    assert len(enumerate_regular_opens(antichain(3))) == 8
    assert len(enumerate_regular_opens(chain(3))) == 2


def test_ultrafilter_brute_force():
    assert len(enumerate_ultrafilters_bruteforce(2)) == 2
    assert len(enumerate_ultrafilters_bruteforce(4)) == 4
    with pytest.raises(CapExceeded):
        enumerate_ultrafilters_bruteforce(5)


def test_catalog_counts():
    # non-isomorphic posets on 1..6 points
    counts = [0] * 7
    for n, _ in poset_catalog(6):
        counts[n] += 1
    assert counts[1:] == [1, 2, 5, 16, 63, 318]


def test_hf_enumeration_is_v_levels():
    assert len(hf_sets_up_to_rank(4)) == 2 ** 16
