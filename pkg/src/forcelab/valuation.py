"""Boolean values [[phi]] of formulas over a finite name universe.

Connectives go to the lattice operations, unbounded quantifiers to joins and
meets over the *supplied universe* (not all of M^B), bounded quantifiers to
joins/meets over the domain of the bounding name, and the atoms ``x = y`` /
``x in y`` to the joint recursion

    [[x in y]] = join over w in dom(y) of  y(w) & [[x = w]]
    [[x = y]]  = meet over w in dom(x) of (x(w) => [[w in y]])
               & meet over w in dom(y) of (y(w) => [[w in x]])

which terminates because each call strictly lowers rank(x) + rank(y).
"""
from __future__ import annotations

from typing import Mapping, Optional

from .algebra import Element
from .errors import ValuationError
from .lang import (And, BoundedExists, BoundedForall, Const, Eq, Exists, Forall, Formula,
                   Iff, Implies, Mem, Not, Or, Sub, Var, desugar)
from .names import Name, NameUniverse

RELATIVIZATION_NOTE = ("quantifiers range over the supplied finite name universe, "
                       "not over all of M^B")


class ValuationContext:
    """Universe, variable environment and the Eq/Mem memo for one evaluation thread."""

    def __init__(self, universe: NameUniverse, env: Optional[Mapping[str, str]] = None,
                 memo: bool = True, trace: bool = False):
        self.universe = universe
        self.algebra = universe.algebra
        self.env = dict(env or {})
        for var, nid in self.env.items():
            if nid not in universe:
                raise ValuationError(f"variable {var!r} bound to unknown name {nid!r}")
        self.use_memo = memo
        self.memo = {}
        self.trace = [] if trace else None
        self._full = universe.algebra.full_mask
        self._entries = {n.id: [(c, v.mask) for c, v in n.entries.items()] for n in universe}

    def _id(self, x) -> str:
        nid = x.id if isinstance(x, Name) else x
        if nid not in self._entries:
            raise ValuationError(f"name {nid!r} is not in the universe")
        return nid

    # mask-level recursion -------------------------------------------------

    def eq_mask(self, x: str, y: str) -> int:
        key = ("eq", x, y)
        if self.use_memo:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        full = self._full
        acc = full
        for w, v in self._entries[x]:
            acc &= (full & ~v) | self.mem_mask(w, y)
            if not acc:
                break
        if acc:
            for w, v in self._entries[y]:
                acc &= (full & ~v) | self.mem_mask(w, x)
                if not acc:
                    break
        if self.use_memo:
            self.memo[key] = acc
        if self.trace is not None:
            self.trace.append(("eq", x, y, acc))
        return acc

    def mem_mask(self, x: str, y: str) -> int:
        key = ("mem", x, y)
        if self.use_memo:
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        full = self._full
        acc = 0
        for w, v in self._entries[y]:
            if v:
                acc |= v & self.eq_mask(x, w)
                if acc == full:
                    break
        if self.use_memo:
            self.memo[key] = acc
        if self.trace is not None:
            self.trace.append(("mem", x, y, acc))
        return acc

    def subset_mask(self, x: str, y: str) -> int:
        full = self._full
        acc = full
        for w, v in self._entries[x]:
            acc &= (full & ~v) | self.mem_mask(w, y)
        return acc

    # formulas ---------------------------------------------------------------

    def _term(self, t, env) -> str:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise ValuationError(f"free variable {t.name!r} has no binding") from None
        if isinstance(t, Const):
            if t.name not in self._entries:
                raise ValuationError(f"constant {t.name!r} does not name anything in the universe")
            return t.name
        raise TypeError(f"not a term: {t!r}")

    def formula_mask(self, f: Formula, env: dict) -> int:
        full = self._full
        if isinstance(f, Mem):
            return self.mem_mask(self._term(f.left, env), self._term(f.right, env))
        if isinstance(f, Eq):
            return self.eq_mask(self._term(f.left, env), self._term(f.right, env))
        if isinstance(f, Not):
            return full & ~self.formula_mask(f.body, env)
        if isinstance(f, And):
            a = self.formula_mask(f.left, env)
            return a & self.formula_mask(f.right, env) if a else 0
        if isinstance(f, Or):
            a = self.formula_mask(f.left, env)
            return a | self.formula_mask(f.right, env) if a != full else full
        if isinstance(f, (Exists, Forall)):
            exists = isinstance(f, Exists)
            acc = 0 if exists else full
            inner = dict(env)
            for a in self._entries:
                inner[f.var] = a
                v = self.formula_mask(f.body, inner)
                if exists:
                    acc |= v
                    if acc == full:
                        break
                else:
                    acc &= v
                    if not acc:
                        break
            return acc
        if isinstance(f, (BoundedExists, BoundedForall)):
            exists = isinstance(f, BoundedExists)
            y = self._term(f.bound, env)
            acc = 0 if exists else full
            inner = dict(env)
            for w, v in self._entries[y]:
                inner[f.var] = w
                body = self.formula_mask(f.body, inner)
                if exists:
                    acc |= v & body
                else:
                    acc &= (full & ~v) | body
            return acc
        if isinstance(f, (Implies, Iff, Sub)):
            return self.formula_mask(desugar(f), env)
        raise TypeError(f"not a formula: {f!r}")

    def element(self, mask: int) -> Element:
        return Element(self.algebra, mask)


def val_eq(x, y, ctx: ValuationContext) -> Element:
    return ctx.element(ctx.eq_mask(ctx._id(x), ctx._id(y)))


def val_mem(x, y, ctx: ValuationContext) -> Element:
    return ctx.element(ctx.mem_mask(ctx._id(x), ctx._id(y)))


def val_subset(x, y, ctx: ValuationContext) -> Element:
    """[[x sub y]] as the meet over w in dom(x) of (x(w) => [[w in y]])."""
    return ctx.element(ctx.subset_mask(ctx._id(x), ctx._id(y)))


def val_formula(f: Formula, ctx: ValuationContext, env: Optional[Mapping[str, str]] = None) -> Element:
    scope = dict(ctx.env)
    if env:
        for var, nid in env.items():
            scope[var] = ctx._id(nid)
    return ctx.element(ctx.formula_mask(f, scope))


def format_trace(ctx: ValuationContext) -> list:
    """One ``op x y -> element`` line per recursion step computed (cache hits excluded)."""
    if ctx.trace is None:
        return []
    return [f"{op} {x} {y} -> {ctx.element(m)}" for op, x, y, m in ctx.trace]
