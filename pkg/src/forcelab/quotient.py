"""Quotients of a name universe by an ultrafilter, and their Mostowski collapse."""
from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .algebra import Ultrafilter
from .errors import QuotientError, ValuationError
from .lang import (And, BoundedExists, BoundedForall, Const, Eq, Exists, Forall, Formula, Iff,
                   Implies, Mem, Not, Or, Sub, Var, free_vars)
from .names import HFSet, NameUniverse
from .valuation import ValuationContext


@dataclass(frozen=True)
class QuotientModel:
    """Classes of names under [[x = y]] in U, with membership [[x in y]] in U.

    ``classes[i]`` lists name ids in universe order; its first entry is the
    representative.  ``membership`` holds class-index pairs (member, set).
    """
    universe: NameUniverse = field(repr=False)
    ultrafilter: Ultrafilter
    classes: tuple
    class_of: dict = field(repr=False)
    membership: frozenset

    def representative(self, i: int) -> str:
        return self.classes[i][0]

    def members_of(self, i: int) -> list:
        return sorted(d for d, c in self.membership if c == i)

    def __len__(self):
        return len(self.classes)


def build_quotient(universe: NameUniverse, U: Ultrafilter,
                   ctx: Optional[ValuationContext] = None) -> QuotientModel:
    if U.algebra != universe.algebra:
        raise QuotientError("ultrafilter is over a different algebra than the universe")
    ctx = ctx or ValuationContext(universe)
    inU = U.contains_mask
    ids = universe.ids
    reps, classes, class_of = [], [], {}
    for x in ids:
        for i, r in enumerate(reps):
            if inU(ctx.eq_mask(r, x)):
                classes[i].append(x)
                class_of[x] = i
                break
        else:
            class_of[x] = len(reps)
            reps.append(x)
            classes.append([x])
    # ~_U must be an equivalence relation agreeing with the partition
    for x in ids:
        for y in ids:
            if inU(ctx.eq_mask(x, y)) != (class_of[x] == class_of[y]):
                raise QuotientError(f"internal consistency failure: ~_U is not transitive at ({x}, {y})")
    membership = set()
    for j, rj in enumerate(reps):
        for i, ri in enumerate(reps):
            edge = inU(ctx.mem_mask(ri, rj))
            for x in classes[i]:
                for y in classes[j]:
                    if inU(ctx.mem_mask(x, y)) != edge:
                        raise QuotientError(
                            f"internal consistency failure: membership depends on representatives "
                            f"({x} in {y} vs {ri} in {rj})")
            if edge:
                membership.add((i, j))
    return QuotientModel(universe, U, tuple(tuple(c) for c in classes), class_of,
                         frozenset(membership))


def truth(q: QuotientModel, f: Formula, env: Optional[Mapping[str, int]] = None) -> bool:
    """Classical truth in the quotient; quantifiers range over its classes.

    ``env`` maps free variables to class indices.
    """
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise ValuationError(f"not a sentence: free variables {', '.join(sorted(missing))}")
    n = len(q.classes)
    mem = q.membership

    def term(t, env):
        if isinstance(t, Var):
            return env[t.name]
        if t.name not in q.class_of:
            raise ValuationError(f"constant {t.name!r} does not name anything in the universe")
        return q.class_of[t.name]

    def ev(f, env):
        if isinstance(f, Eq):
            return term(f.left, env) == term(f.right, env)
        if isinstance(f, Mem):
            return (term(f.left, env), term(f.right, env)) in mem
        if isinstance(f, Sub):
            a, b = term(f.left, env), term(f.right, env)
            return all((c, b) in mem for c in range(n) if (c, a) in mem)
        if isinstance(f, Not):
            return not ev(f.body, env)
        if isinstance(f, And):
            return ev(f.left, env) and ev(f.right, env)
        if isinstance(f, Or):
            return ev(f.left, env) or ev(f.right, env)
        if isinstance(f, Implies):
            return not ev(f.left, env) or ev(f.right, env)
        if isinstance(f, Iff):
            return ev(f.left, env) == ev(f.right, env)
        if isinstance(f, (Exists, Forall)):
            test = any if isinstance(f, Exists) else all
            return test(ev(f.body, {**env, f.var: c}) for c in range(n))
        if isinstance(f, (BoundedExists, BoundedForall)):
            b = term(f.bound, env)
            test = any if isinstance(f, BoundedExists) else all
            return test(ev(f.body, {**env, f.var: c}) for c in range(n) if (c, b) in mem)
        raise TypeError(f"not a formula: {f!r}")

    return ev(f, env)


def mostowski_collapse(q: QuotientModel) -> dict:
    """Map each class index to the HF set it denotes: collapse(c) = {collapse(d) : d in_U c}."""
    graph = {i: set() for i in range(len(q.classes))}
    for d, c in q.membership:
        graph[c].add(d)
    try:
        order = list(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as e:
        raise QuotientError(f"membership relation is not well-founded: cycle {e.args[1]}") from None
    seen = {}
    for c in range(len(q.classes)):
        key = frozenset(graph[c])
        if key in seen:
            raise QuotientError(f"membership relation is not extensional: classes {seen[key]} "
                                f"and {c} have the same members")
        seen[key] = c
    out = {}
    for c in order:
        out[c] = HFSet(out[d] for d in graph[c])
    return out
