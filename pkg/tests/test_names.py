import pytest

from forcelab.algebra import make_algebra, ultrafilter_from_label
from forcelab.errors import CapExceeded, ParseError, UniverseError
from forcelab.names import (EMPTY, HFSet, Name, NameUniverse, check_id, check_name,
                            check_universe, hf_sets_up_to_rank, load_names, parse_hf,
                            powerset_name, universe_up_to_rank)
from forcelab.quotient import build_quotient, mostowski_collapse
from forcelab.valuation import ValuationContext


def test_hf_basics():
    one = HFSet([EMPTY])
    two = HFSet([EMPTY, one])
    assert EMPTY.rank == 0 and one.rank == 1 and two.rank == 2
    assert [s.code for s in (EMPTY, one, HFSet([one]), two)] == [0, 1, 2, 3]
    assert all(HFSet.from_code(n).code == n for n in range(64))
    assert parse_hf("{{},{{}}}") == two
    assert parse_hf(str(two)) == two
    assert len(hf_sets_up_to_rank(2)) == 4
    assert len(hf_sets_up_to_rank(3)) == 16


def test_check_name_examples():
    B = make_algebra(1)
    n, u = check_name(EMPTY, B)
    assert n.entries == {} and len(u) == 1
    n, u = check_name(HFSet([EMPTY]), B)
    (child,) = n.entries
    assert u[child].entries == {} and n.entries[child] == B.one


def test_check_names_are_injective_on_classes():
    B = make_algebra(2)
    sets = hf_sets_up_to_rank(3)
    u = check_universe(sets, B)
    ctx = ValuationContext(u)
    ids = [check_id(s) for s in sets]
    assert all(i in u for i in ids)
    for a, x in zip(sets, ids):
        for b, y in zip(sets, ids):
            assert ctx.eq_mask(x, y) == (B.full_mask if a == b else 0)
            assert ctx.mem_mask(x, y) == (B.full_mask if a in b else 0)


def test_check_name_reuses_structural_twins():
    B = make_algebra(1)
    u = load_names("name e { }\n", B)
    n, u2 = check_name(HFSet([EMPTY]), B, u)
    assert list(n.entries) == ["e"] and len(u2) == 2


@pytest.mark.parametrize("atoms,rank,count", [
    (1, 0, 1), (1, 1, 3), (2, 1, 5), (1, 2, 27), (2, 2, 3125),
])
def test_universe_counts(atoms, rank, count):
    assert len(universe_up_to_rank(make_algebra(atoms), rank)) == count


def test_universe_cap():
    with pytest.raises(CapExceeded):
        universe_up_to_rank(make_algebra(2), 3)


def test_universe_contains_check_names_up_to_equality():
    B = make_algebra(1)
    u = universe_up_to_rank(B, 2)
    for s in hf_sets_up_to_rank(2):
        c, _ = check_name(s, B)
        cu = check_universe([s], B)
        merged = NameUniverse(B, u)
        for n in cu:
            if n.id not in merged:
                merged._add(Name(n.id, n.entries))
        ctx = ValuationContext(merged)
        assert any(ctx.eq_mask(c.id, x) == B.full_mask for x in u.ids)


def test_load_names_errors():
    B = make_algebra(2)
    with pytest.raises(UniverseError):
        load_names("name u { z : a0 }\n", B)
    with pytest.raises(UniverseError):
        load_names("name z { }\nname z { }\n", B)
    with pytest.raises(ParseError):
        load_names("name z { }\nname u { z : a7 }\n", B)
    with pytest.raises(ParseError):
        load_names("nmae z { }\n", B)
    with pytest.raises(UniverseError):
        NameUniverse(B)["nope"]


def test_load_running_example(data_dir):
    B = make_algebra(2)
    u = load_names((data_dir / "running_names.txt").read_text(), B)
    assert u.ids == ["z", "u"]
    assert u.rank("u") == 1
    assert load_names(u.to_text(), B).to_text() == u.to_text()


def test_powerset_name_values():
    B = make_algebra(2)
    u = load_names("name z { }\nname u { z : a0 }\n", B)
    y, u2 = powerset_name("u", u)
    values = [str(v) for v in y.entries.values()]
    assert len(values) == 4
    # w(z) ranges over 0, a0, a1, 1; [[w sub u]] = w(z) => a0
    assert values == ["1", "1", "{a0}", "{a0}"]
    assert all(w in u2 for w in y.entries)


def test_powerset_of_check_name_collapses_to_four_subsets():
    B = make_algebra(1)
    two = HFSet([EMPTY, HFSet([EMPTY])])
    x, u = check_name(two, B)
    y, u = powerset_name(x.id, u)
    q = build_quotient(u, ultrafilter_from_label(B, "a0"))
    coll = mostowski_collapse(q)
    members = {coll[d] for d, c in q.membership if c == q.class_of[y.id]}
    expected = {HFSet(s) for s in ([], [EMPTY], [HFSet([EMPTY])], [EMPTY, HFSet([EMPTY])])}
    assert members == expected


def test_powerset_cap():
    B = make_algebra(2)
    u = universe_up_to_rank(B, 1)
    with pytest.raises(CapExceeded):
        powerset_name("n4", u, cap=3)
