"""Brute-force reference implementations.

Nothing here calls into the valuation, quotient, completion or ultrafilter
code it is used to check: agreement between the two is the evidence.
Everything is naive on purpose (no memo, no pruning beyond early exits).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import CapExceeded, ValuationError
from .lang import (And, BoundedExists, BoundedForall, Const, Eq, Exists, Forall, Iff, Implies,
                   Mem, Not, Or, Sub, Var)

ORACLE_POSET_CAP = 15
ORACLE_ATOM_CAP = 4


@dataclass
class FiniteStructure:
    """A carrier with one binary relation R (membership); equality is identity."""
    carrier: list
    relation: set
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = set(self.carrier)
        for a, b in self.relation:
            if a not in pts or b not in pts:
                raise ValueError(f"relation pair ({a}, {b}) leaves the carrier")


def tarski_eval(s: FiniteStructure, f, env=None) -> bool:
    env = env or {}

    def val(t):
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            raise ValuationError(f"unbound variable {t.name!r}")
        if t.name in env:
            return env[t.name]
        if t.name in s.constants:
            return s.constants[t.name]
        raise ValuationError(f"unresolved constant {t.name!r}")

    R = s.relation
    if isinstance(f, Eq):
        return val(f.left) == val(f.right)
    if isinstance(f, Mem):
        return (val(f.left), val(f.right)) in R
    if isinstance(f, Sub):
        a, b = val(f.left), val(f.right)
        return all((z, b) in R for z in s.carrier if (z, a) in R)
    if isinstance(f, Not):
        return not tarski_eval(s, f.body, env)
    if isinstance(f, And):
        return tarski_eval(s, f.left, env) and tarski_eval(s, f.right, env)
    if isinstance(f, Or):
        return tarski_eval(s, f.left, env) or tarski_eval(s, f.right, env)
    if isinstance(f, Implies):
        return (not tarski_eval(s, f.left, env)) or tarski_eval(s, f.right, env)
    if isinstance(f, Iff):
        return tarski_eval(s, f.left, env) == tarski_eval(s, f.right, env)
    if isinstance(f, Exists):
        return any(tarski_eval(s, f.body, {**env, f.var: a}) for a in s.carrier)
    if isinstance(f, Forall):
        return all(tarski_eval(s, f.body, {**env, f.var: a}) for a in s.carrier)
    if isinstance(f, BoundedExists):
        b = val(f.bound)
        return any(tarski_eval(s, f.body, {**env, f.var: a}) for a in s.carrier if (a, b) in R)
    if isinstance(f, BoundedForall):
        b = val(f.bound)
        return all(tarski_eval(s, f.body, {**env, f.var: a}) for a in s.carrier if (a, b) in R)
    raise TypeError(f"not a formula: {f!r}")


def membership_structure(sets, constants=None) -> FiniteStructure:
    """The membership digraph restricted to a family of (frozen)sets."""
    carrier = list(dict.fromkeys(sets))
    rel = {(a, b) for a in carrier for b in carrier if a in b}
    return FiniteStructure(carrier, rel, dict(constants or {}))


# --- Boolean values via atomwise projection ----------------------------------

def projected_value(entries: dict, atom_count: int, formula, env=None) -> int:
    """[[formula]] as a bitmask, computed one atom at a time.

    Over the powerset algebra of n atoms every operation is bitwise, so bit i of
    a Boolean value is the classical truth value in the 2-valued model obtained
    by keeping only bit i of every entry.  That model is computed outright:
    each name denotes the genuine hereditarily finite set
    ``{den(w) : w in dom(x) with bit i of x(w) set}``.  ``entries`` maps name id to
    a dict child id -> mask.
    """
    out = 0
    for i in range(atom_count):
        den = {}

        def denote(x):
            if x not in den:
                den[x] = frozenset(denote(w) for w, m in entries[x].items() if m >> i & 1)
            return den[x]

        for x in entries:
            denote(x)
        carrier = list(dict.fromkeys(den.values()))
        rel = {(a, b) for a in carrier for b in carrier if a in b}
        # quantifiers range over the denotations of the names, as in the valuation
        s = FiniteStructure(carrier, rel, dict(den))
        e = {k: den[v] for k, v in (env or {}).items()}
        if tarski_eval(s, formula, e):
            out |= 1 << i
    return out


# --- ultrafilters ----------------------------------------------------------------

def enumerate_ultrafilters_bruteforce(atom_count: int) -> list:
    """Every subset of the 2**n-element powerset algebra satisfying the five ultrafilter properties.

    Elements are frozensets of atom indices; each ultrafilter is a frozenset of them.
    """
    if atom_count > ORACLE_ATOM_CAP:
        raise CapExceeded(f"brute-force ultrafilter search needs <= {ORACLE_ATOM_CAP} atoms")
    atoms = frozenset(range(atom_count))
    elems = [frozenset(c) for r in range(atom_count + 1)
             for c in itertools.combinations(sorted(atoms), r)]
    found = []
    for bits in range(1 << len(elems)):
        U = {e for k, e in enumerate(elems) if bits >> k & 1}
        if satisfies_ultrafilter_axioms(U, elems, atoms):
            found.append(frozenset(U))
    return found


def satisfies_ultrafilter_axioms(U, elems, one) -> bool:
    zero = frozenset()
    if one not in U:                                   # 1
        return False
    if zero in U:                                      # 2
        return False
    for x in elems:                                    # 5
        if x not in U and (one - x) not in U:
            return False
    for x in U:
        for y in U:
            if (x & y) not in U:                       # 3
                return False
        for y in elems:
            if x & y == x and y not in U:              # 4
                return False
    return True


# --- posets ---------------------------------------------------------------------

def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _check_size(P):
    if len(P.elements) > ORACLE_POSET_CAP:
        raise CapExceeded(f"oracle enumeration needs |P| <= {ORACLE_POSET_CAP}")


def enumerate_dense(P) -> list:
    _check_size(P)
    els = list(P.elements)
    return [frozenset(S) for S in _subsets(els)
            if all(any(P.leq(q, p) for q in S) for p in els)]


def enumerate_filters(P) -> list:
    _check_size(P)
    els = list(P.elements)
    out = []
    for S in _subsets(els):
        S = set(S)
        if not S:
            continue
        if any(P.leq(p, q) and q not in S for p in S for q in els):
            continue
        if all(any(P.leq(r, p) and P.leq(r, q) for r in S) for p in S for q in S):
            out.append(frozenset(S))
    return out


def enumerate_regular_opens(P) -> list:
    """Subsets S with S = {p : every q <= p has some r <= q in S}."""
    _check_size(P)
    els = list(P.elements)
    out = []
    for S in _subsets(els):
        S = set(S)
        reg = {p for p in els
               if all(any(P.leq(r, q) and r in S for r in els) for q in els if P.leq(q, p))}
        if reg == S:
            out.append(frozenset(S))
    return out


def compatible(P, p, q) -> bool:
    return any(P.leq(r, p) and P.leq(r, q) for r in P.elements)


# --- poset catalogs --------------------------------------------------------------

def _canonical(n, rel):
    """Lexicographically least relation matrix over all relabelings (rel: set of (i, j), i <= j)."""
    below = [sum(1 for a in range(n) if (a, i) in rel) for i in range(n)]
    above = [sum(1 for b in range(n) if (i, b) in rel) for i in range(n)]
    inv = [(below[i], above[i]) for i in range(n)]
    groups = {}
    for i in range(n):
        groups.setdefault(inv[i], []).append(i)
    keys = sorted(groups)
    best = None
    for perms in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [i for p in perms for i in p]
        pos = {v: k for k, v in enumerate(order)}
        code = tuple(sorted((pos[a], pos[b]) for a, b in rel))
        if best is None or code < best:
            best = code
    return (n, best)


def poset_catalog(max_n: int) -> list:
    """One representative of every isomorphism class of posets on 1..max_n points.

    Each poset is ``(n, pairs)`` with pairs (a, b) meaning a <= b, reflexive pairs
    included.  Built by adding a new maximal point above an order ideal.
    """
    seen = set()
    level = [(1, frozenset({(0, 0)}))]
    out = list(level)
    seen.add(_canonical(1, {(0, 0)}))
    for n in range(1, max_n):
        nxt = []
        for _, rel in level:
            for ideal in _subsets(range(n)):
                ideal = set(ideal)
                if any((a, b) in rel and b in ideal and a not in ideal
                       for a in range(n) for b in range(n)):
                    continue
                new = set(rel) | {(a, n) for a in ideal} | {(n, n)}
                key = _canonical(n + 1, new)
                if key not in seen:
                    seen.add(key)
                    nxt.append((n + 1, frozenset(new)))
        out += nxt
        level = nxt
    return out


def random_poset_pairs(rng: random.Random, n: int, density: float = 0.35) -> list:
    """Random strict pairs (a, b), a < b as integers, for a poset on range(n)."""
    return [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < density]
