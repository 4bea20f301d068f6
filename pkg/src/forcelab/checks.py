"""Law and oracle-agreement suites.

Each ``check_*`` function takes its sizes as arguments and returns a
:class:`CheckResult`; the CLI ``selfcheck`` runs them small, the acceptance
tests run them at full size.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import oracle
from .algebra import complement, leq, make_algebra, meet, ultrafilters
from .forcing import (LazyCohenPoset, NotDense, cohen_poset_finite, dense_distinct, dense_point,
                      distinct_rows, forces, hit_dense_sets, total_on, union_of_filter)
from .lang import And, Not, sentence_corpus
from .names import (check_universe, hf_closure, hf_sets_up_to_rank, load_names,
                    random_universe, universe_up_to_rank)
from .order import Filter, Poset, antichain, complete, is_filter, is_generic
from .quotient import build_quotient, mostowski_collapse, truth
from .valuation import ValuationContext


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg):
        if len(self.failures) < 20:
            self.failures.append(msg)
        else:
            self.failures[-1] = f"... and more ({msg})"

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "; ".join(self.notes)
        out = f"{status}  {self.name}: {self.cases} cases, {len(self.failures)} failures, {self.seconds:.2f}s"
        if extra:
            out += f" ({extra})"
        if self.failures:
            out += f"; first failure: {self.failures[0]}"
        return out


class _timer:
    def __init__(self, result):
        self.result = result

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.seconds = time.perf_counter() - self.t0


def check_classical_collapse(max_rank: int = 2, corpus_size: int = 5000, seed: int = 0) -> CheckResult:
    """Over B = {0,1} and check-names, [[phi]] = 1 iff phi holds in the HF membership digraph."""
    r = CheckResult("classical-collapse oracle equivalence")
    with _timer(r):
        B = make_algebra(1)
        sets = hf_sets_up_to_rank(max_rank)
        u = check_universe(sets, B)
        by_id = {f"hf{s.code}": s for s in sets}
        assert set(by_id) == set(u.ids)
        structure = oracle.membership_structure(sets, by_id)
        ctx = ValuationContext(u)
        corpus = sentence_corpus(u.ids, corpus_size, max_depth=3, seed=seed)
        for phi in corpus:
            r.cases += 1
            boolean = ctx.formula_mask(phi, {}) == B.full_mask
            classical = oracle.tarski_eval(structure, phi)
            if boolean != classical:
                r.fail(f"{phi}: [[.]]=1 is {boolean}, Tarski says {classical}")
        r.notes.append(f"{len(u)} check-names")
    return r


def truth_lemma_universes(atom_counts=(1, 2, 3), random_count: int = 20, seed: int = 0):
    for n in atom_counts:
        B = make_algebra(n)
        yield f"{n}-atom rank<=1", universe_up_to_rank(B, 1)
        rng = random.Random(seed * 1000 + n)
        for k in range(random_count):
            yield f"{n}-atom random#{k}", random_universe(B, rng, per_rank=(1, 3, 3))


def check_truth_lemma(atom_counts=(1, 2, 3), random_count: int = 20, corpus_size: int = 1000,
                      seed: int = 0) -> CheckResult:
    """[[phi]] in U iff phi is true in the quotient by U, for every ultrafilter U."""
    r = CheckResult("truth lemma")
    with _timer(r):
        n_univ = 0
        for label, u in truth_lemma_universes(atom_counts, random_count, seed):
            n_univ += 1
            ctx = ValuationContext(u)
            quotients = [build_quotient(u, U, ctx) for U in ultrafilters(u.algebra)]
            corpus = sentence_corpus(u.ids, corpus_size, max_depth=3, seed=seed + n_univ)
            for phi in corpus:
                mask = ctx.formula_mask(phi, {})
                for q in quotients:
                    r.cases += 1
                    if q.ultrafilter.contains_mask(mask) != truth(q, phi):
                        r.fail(f"{label}, {q.ultrafilter}: {phi}")
        r.notes.append(f"{n_univ} universes")
    return r


def check_equality_laws(atom_counts=(1, 2), rank: int = 1) -> CheckResult:
    r = CheckResult("equality laws")
    with _timer(r):
        for n in atom_counts:
            B = make_algebra(n)
            u = universe_up_to_rank(B, rank)
            ctx = ValuationContext(u)
            eq, mem = ctx.eq_mask, ctx.mem_mask
            ids = u.ids
            for x in ids:
                r.cases += 1
                if eq(x, x) != B.full_mask:
                    r.fail(f"[[{x}={x}]] != 1")
            for x, y in itertools.product(ids, repeat=2):
                r.cases += 1
                if eq(x, y) != eq(y, x):
                    r.fail(f"symmetry fails at {x},{y}")
            for x, y, z in itertools.product(ids, repeat=3):
                r.cases += 3
                e = eq(x, y)
                if e & eq(y, z) & ~eq(x, z):
                    r.fail(f"transitivity fails at {x},{y},{z}")
                if e & mem(x, z) & ~mem(y, z):
                    r.fail(f"left congruence fails at {x},{y},{z}")
                if e & mem(z, x) & ~mem(z, y):
                    r.fail(f"right congruence fails at {x},{y},{z}")
    return r


def check_ultrafilters(max_atoms: int = 4) -> CheckResult:
    r = CheckResult("ultrafilter axioms and count")
    with _timer(r):
        for n in range(1, max_atoms + 1):
            B = make_algebra(n)
            elems = B.elements()
            listed = ultrafilters(B)
            r.cases += 1
            if len(listed) != n:
                r.fail(f"{n} atoms: {len(listed)} ultrafilters listed")
            for U in listed:
                members = [x for x in elems if x in U]
                r.cases += 1
                ok = (B.one in U and B.zero not in U
                      and all(meet(x, y) in U for x in members for y in members)
                      and all(y in U for x in members for y in elems if leq(x, y))
                      and all((x in U) != (complement(x) in U) for x in elems))
                if not ok:
                    r.fail(f"{U} over {n} atoms violates an ultrafilter property")
            brute = set(oracle.enumerate_ultrafilters_bruteforce(n))
            mine = {frozenset(x.atoms for x in elems if x in U) for U in listed}
            r.cases += 1
            if brute != mine:
                r.fail(f"{n} atoms: brute force found {len(brute)}, enumeration gave {len(mine)}")
    return r


def catalog_posets(max_n: int) -> list:
    return [Poset([f"e{i}" for i in range(n)],
                  [(f"e{a}", f"e{b}") for a, b in pairs if a != b])
            for n, pairs in oracle.poset_catalog(max_n)]


def check_completion(max_n: int = 6, antichain_max: int = 4, oracle_max: int = 6) -> CheckResult:
    r = CheckResult("completion contract")
    with _timer(r):
        posets = catalog_posets(max_n)
        r.notes.append(f"{len(posets)} non-isomorphic posets")
        for P in posets:
            C = complete(P)
            r.cases += 1
            emb = C.embed
            els = P.elements
            for p, q in itertools.product(els, repeat=2):
                if P.leq(q, p) and not emb[q] <= emb[p]:
                    r.fail(f"{P.le}: order not preserved at {q} <= {p}")
                incompatible = not oracle.compatible(P, p, q)
                if incompatible != meet(emb[p], emb[q]).is_zero():
                    r.fail(f"{sorted(P.le)}: incompatibility not preserved at {p},{q}")
            for b in C.target.elements():
                if not b.is_zero() and not any(emb[p] <= b for p in els):
                    r.fail(f"{sorted(P.le)}: {b} has no embedded condition below it")
            if any(emb[p].is_zero() for p in els):
                r.fail(f"{sorted(P.le)}: some condition embeds to 0")
            if len(P) <= oracle_max:
                ros = oracle.enumerate_regular_opens(P)
                if len(ros) != C.target.size:
                    r.fail(f"{sorted(P.le)}: {len(ros)} regular opens vs {C.target.size} elements")
                elif {C.to_regular_open(b) for b in C.target.elements()} != set(ros):
                    r.fail(f"{sorted(P.le)}: isomorphism does not hit every regular open")
        for n in range(1, antichain_max + 1):
            C = complete(antichain(n))
            r.cases += 1
            images = {C.embed[p].mask for p in C.source.elements}
            if C.target.atom_count != n or images != {1 << i for i in range(n)}:
                r.fail(f"antichain of {n}: {C.target.atom_count} atoms")
    return r


ANTICHAIN_POSET = "elem p\nelem q\n"
ANTICHAIN_NAMES = "name z { }\nname u { z : a0 }\n"


def antichain_example():
    """The antichain {p, q} with u = {z -> embed(p)}."""
    from .order import load_poset
    P = load_poset(ANTICHAIN_POSET)
    C = complete(P)
    u = load_names(ANTICHAIN_NAMES, C.target)
    return P, C, u


def check_forcing_laws(random_posets: int = 50, corpus_size: int = 60, seed: int = 0) -> CheckResult:
    from .lang import parse
    r = CheckResult("forcing laws")
    with _timer(r):
        P, C, u = antichain_example()
        ctx = ValuationContext(u)
        expected = {("p", "z in u"): True, ("q", "z in u"): False, ("q", "~(z in u)"): True}
        for (p, text), want in expected.items():
            r.cases += 1
            got = forces(p, parse(text), C, ctx)
            if got != want:
                r.fail(f"antichain example: forces({p}, {text}) = {got}, expected {want}")
        cases = [(P, C, u)]
        rng = random.Random(seed)
        for k in range(random_posets):
            n = rng.randint(1, 6)
            pairs = oracle.random_poset_pairs(rng, n)
            Q = Poset([f"p{i}" for i in range(n)], [(f"p{a}", f"p{b}") for a, b in pairs])
            CQ = complete(Q)
            uq = random_universe(CQ.target, rng, per_rank=(1, 2, 1))
            cases.append((Q, CQ, uq))
        for Q, CQ, uq in cases:
            ctxq = ValuationContext(uq)
            corpus = sentence_corpus(uq.ids, corpus_size, max_depth=3, seed=rng.randrange(10**6))
            pairs = list(zip(corpus, corpus[1:] + corpus[:1]))
            for phi, psi in pairs:
                vphi = ctxq.formula_mask(phi, {})
                vnot = ctxq.formula_mask(Not(phi), {})
                vand = ctxq.formula_mask(And(phi, psi), {})
                vpsi = ctxq.formula_mask(psi, {})
                for p in Q.elements:
                    r.cases += 1
                    e = CQ.embed[p].mask
                    f_phi = forces(p, phi, CQ, ctxq)
                    if f_phi != (e & vphi == e):
                        r.fail(f"forces disagrees with embed <= value at {p}, {phi}")
                    f_and = forces(p, And(phi, psi), CQ, ctxq)
                    if f_and != (f_phi and forces(p, psi, CQ, ctxq)):
                        r.fail(f"AND law fails at {p}: {phi} / {psi}")
                    if e and (e & vphi == e) and (e & vnot == e):
                        r.fail(f"{p} forces both {phi} and its negation")
                    if (e & vand == e) != ((e & vphi == e) and (e & vpsi == e)):
                        r.fail(f"AND law (values) fails at {p}")
                    for q in Q.down(p):
                        if f_phi and not forces(q, phi, CQ, ctxq):
                            r.fail(f"monotonicity fails: {p} forces {phi} but {q} <= {p} does not")
        r.notes.append(f"{len(cases)} posets")
    return r


def check_genericity(max_n: int = 5) -> CheckResult:
    r = CheckResult("genericity characterization")
    with _timer(r):
        for P in catalog_posets(max_n):
            dense = oracle.enumerate_dense(P)
            filters = oracle.enumerate_filters(P)
            minimal = [p for p in P.elements if all(not P.leq(q, p) or q == p for q in P.elements)]
            for S in filters:
                r.cases += 1
                generic = all(not S.isdisjoint(D) for D in dense)
                has_min = any(m in S for m in minimal)
                if generic != has_min:
                    r.fail(f"{sorted(P.le)}: filter {sorted(S)} generic={generic}, minimal={has_min}")
                if not is_filter(P, S):
                    r.fail(f"{sorted(P.le)}: is_filter rejects {sorted(S)}")
                if is_generic(P, Filter(P, S)) != generic:
                    r.fail(f"{sorted(P.le)}: is_generic(ALL) disagrees on {sorted(S)}")
            # the filters found by is_filter are exactly the brute-force ones
            r.cases += 1
            mine = {frozenset(c) for k in range(len(P) + 1)
                    for c in itertools.combinations(P.elements, k) if is_filter(P, c)}
            if mine != set(filters):
                r.fail(f"{sorted(P.le)}: is_filter and brute force disagree")
    return r


def check_cohen_demo(rows: int = 3, cols: int = 4, seeds=range(100)) -> CheckResult:
    r = CheckResult("Cohen demo")
    with _timer(r):
        L = LazyCohenPoset(rows)
        fam = [dense_point(L, row, c) for c in range(cols) for row in L.rows]
        fam += [dense_distinct(L, a, b) for a, b in itertools.combinations(L.rows, 2)]
        for seed in seeds:
            r.cases += 1
            F = union_of_filter(hit_dense_sets(L, fam, seed=seed))
            if not total_on(F, rows, cols):
                r.fail(f"seed {seed}: F not total on the grid: {F}")
            witnesses = distinct_rows(F, rows)
            if any(c is None for c in witnesses.values()):
                r.fail(f"seed {seed}: rows not pairwise distinct: {witnesses}")
        P = cohen_poset_finite(2, 1)
        report = dense_distinct(P, "r0", "r1")
        r.cases += 1
        if not isinstance(report, NotDense):
            r.fail("finite (2,1) truncation: distinctness reported dense")
        else:
            p = report.counterexample
            contains = lambda c: any(c.get("r0", k) is not None and c.get("r1", k) is not None
                                     and c.get("r0", k) != c.get("r1", k) for k in range(1))
            if any(contains(q) for q in P.elements if q.extends(p)):
                r.fail(f"counterexample {p} does have an extension in the set")
            r.notes.append(f"(2,1) counterexample {p}")
    return r


def check_collapse_roundtrip(max_rank: int = 2) -> CheckResult:
    r = CheckResult("Mostowski collapse round trip")
    with _timer(r):
        B = make_algebra(1)
        sets = hf_sets_up_to_rank(max_rank)
        families = [list(c) for k in range(1, len(sets) + 1)
                    for c in itertools.combinations(sets, k)]
        for fam in families:
            u = check_universe(fam, B)
            q = build_quotient(u, ultrafilters(B)[0])
            coll = mostowski_collapse(q)
            for s in hf_closure(fam):
                r.cases += 1
                got = coll[q.class_of[f"hf{s.code}"]]
                if got != s:
                    r.fail(f"family {[str(x) for x in fam]}: {s} collapses to {got}")
            if len(q) != len(u):
                r.fail(f"distinct check-names merged in family {[str(x) for x in fam]}")
        r.notes.append(f"{len(families)} universes")
    return r


def run_all(small: bool = True) -> list:
    if small:
        return [
            check_classical_collapse(corpus_size=300),
            check_truth_lemma(atom_counts=(1, 2), random_count=3, corpus_size=100),
            check_equality_laws(),
            check_ultrafilters(max_atoms=3),
            check_completion(max_n=4),
            check_forcing_laws(random_posets=5, corpus_size=20),
            check_genericity(max_n=4),
            check_cohen_demo(seeds=range(10)),
            check_collapse_roundtrip(),
        ]
    return [
        check_classical_collapse(),
        check_truth_lemma(),
        check_equality_laws(),
        check_ultrafilters(),
        check_completion(),
        check_forcing_laws(),
        check_genericity(),
        check_cohen_demo(),
        check_collapse_roundtrip(),
    ]
