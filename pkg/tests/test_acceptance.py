"""Acceptance gate: every criterion at full size, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""
import pytest

from forcelab import checks

pytestmark = pytest.mark.acceptance


def gate(number, title, result, limit=None):
    timing = result.seconds <= limit if limit is not None else True
    ok = result.passed and timing
    extra = f" [limit {limit}s]" if limit is not None else ""
    detail = result.line().split(None, 1)[1]
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}) {detail}{extra}")
    assert result.passed, result.notes
    assert timing, f"took {result.seconds:.1f}s, limit {limit}s"


def test_criterion_1_classical_collapse():
    gate(1, "classical collapse vs Tarski", checks.check_classical_collapse(max_rank=2, corpus_size=5000),
         limit=60)


def test_criterion_2_truth_lemma():
    gate(2, "truth lemma", checks.check_truth_lemma(atom_counts=(1, 2, 3), random_count=20,
                                                    corpus_size=1000))


def test_criterion_3_equality_laws():
    gate(3, "equality laws", checks.check_equality_laws(atom_counts=(1, 2), rank=1))


def test_criterion_4_ultrafilters():
    gate(4, "ultrafilters", checks.check_ultrafilters(max_atoms=4))


def test_criterion_5_completion():
    gate(5, "completion contract", checks.check_completion(max_n=6, antichain_max=4))


def test_criterion_6_forcing_laws():
    gate(6, "forcing laws", checks.check_forcing_laws(random_posets=50))


def test_criterion_7_genericity():
    gate(7, "genericity characterization", checks.check_genericity(max_n=5))


def test_criterion_8_cohen_demo():
    gate(8, "Cohen demo", checks.check_cohen_demo(rows=3, cols=4, seeds=range(100)), limit=10)


def test_criterion_9_collapse_round_trip():
    gate(9, "collapse round trip", checks.check_collapse_roundtrip(max_rank=2))
