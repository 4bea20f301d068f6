"""Cohen conditions, dense sets over them, generic filters, and p ||- phi.

A Cohen condition is a finite partial function from (row, column) cells to
{0, 1}; stronger conditions are supersets.  Two realizations of the Cohen
poset are offered: a finite truncation (an ordinary :class:`Poset`) and a lazy
one with unboundedly many columns, where dense sets are given constructively
by an "extend any condition into me" procedure.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import CapExceeded, ForcingError, NotDenseError, ParseError
from .order import (Completion, DenseSet, Filter, Poset, hit_dense_sets_finite, is_dense,
                    make_dense)
from .valuation import ValuationContext, val_formula

COHEN_CELL_CAP = 12


class Condition:
    """Finite partial function from (row, col) cells to bits.  Immutable and hashable."""
    __slots__ = ("_cells", "_hash")

    def __init__(self, cells=()):
        items = cells.items() if isinstance(cells, dict) else cells
        out = {}
        for (cell, bit) in items:
            row, col = cell
            if bit not in (0, 1):
                raise ForcingError(f"bit for {cell} must be 0 or 1, got {bit!r}")
            if cell in out and out[cell] != bit:
                raise ForcingError(f"not a function: cell ({row},{col}) gets both 0 and 1")
            out[(str(row), int(col))] = bit
        self._cells = dict(sorted(out.items(), key=_cell_key))
        self._hash = hash(frozenset(self._cells.items()))

    @property
    def cells(self) -> dict:
        return dict(self._cells)

    def get(self, row, col):
        return self._cells.get((row, col))

    def defined(self, row, col) -> bool:
        return (row, col) in self._cells

    def extends(self, other: "Condition") -> bool:
        """self <= other in the Cohen order, i.e. self contains other."""
        mine = self._cells
        return all(mine.get(c) == b for c, b in other._cells.items())

    def compatible(self, other: "Condition") -> bool:
        mine = self._cells
        return all(mine.get(c, b) == b for c, b in other._cells.items())

    def union(self, other: "Condition") -> "Condition":
        if not self.compatible(other):
            raise ForcingError(f"incompatible conditions {self} and {other}")
        return Condition({**self._cells, **other._cells})

    def with_cell(self, row, col, bit) -> "Condition":
        return self.union(Condition({(row, col): bit}))

    def columns(self) -> set:
        return {c for (_, c) in self._cells}

    def __len__(self):
        return len(self._cells)

    def __eq__(self, other):
        return isinstance(other, Condition) and self._cells == other._cells

    def __hash__(self):
        return self._hash

    def __str__(self):
        return "{" + ",".join(f"({r},{c})->{b}" for (r, c), b in self._cells.items()) + "}"

    def __repr__(self):
        return f"Condition({self})"


def _cell_key(item):
    (row, col), _ = item
    m = re.fullmatch(r"r(\d+)", row)
    return (int(m.group(1)) if m else float("inf"), row, col)


_COND_CELL = re.compile(r"\(\s*([A-Za-z0-9_]+)\s*,\s*(\d+)\s*\)\s*->\s*([01])")


def parse_condition(text: str) -> Condition:
    """Parse ``{(r0,0)->1,(r1,2)->0}``."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError(f"condition must be wrapped in braces: {text!r}", 1, 1)
    body = s[1:-1].strip()
    cells = []
    if body:
        for part in re.split(r",\s*(?=\()", body):
            m = _COND_CELL.fullmatch(part.strip())
            if not m:
                raise ParseError(f"bad cell {part.strip()!r} in condition", 1, s.find(part) + 1)
            cells.append(((m.group(1), int(m.group(2))), int(m.group(3))))
    return Condition(cells)


def row_labels(rows) -> list:
    if isinstance(rows, int):
        return [f"r{i}" for i in range(rows)]
    return [str(r) for r in rows]


# --- the two Cohen posets -----------------------------------------------------

def cohen_poset_finite(rows, cols: int, cap: int = COHEN_CELL_CAP) -> Poset:
    """All partial functions from a rows x cols grid into {0,1}, ordered by reverse inclusion."""
    rl = row_labels(rows)
    cells = [(r, c) for r in rl for c in range(cols)]
    if len(cells) > cap:
        raise CapExceeded(f"finite Cohen poset with {len(cells)} cells has 3**{len(cells)} "
                          f"conditions (cap {cap} cells)")
    conds = [Condition([(cell, b) for cell, b in zip(cells, vals) if b is not None])
             for vals in itertools.product((None, 0, 1), repeat=len(cells))]
    P = Poset.from_order(conds, lambda q, p: q.extends(p))
    P.rows = rl
    P.cols = cols
    return P


@dataclass(frozen=True)
class LazyCohenPoset:
    """Finite partial functions from rows x N into {0,1}; columns are unbounded."""
    rows: tuple

    def __init__(self, rows):
        object.__setattr__(self, "rows", tuple(row_labels(rows)))

    def __contains__(self, p) -> bool:
        return isinstance(p, Condition) and all(r in self.rows for (r, _) in p.cells)

    def leq(self, q: Condition, p: Condition) -> bool:
        return q.extends(p)

    @property
    def top(self) -> Condition:
        return Condition()


@dataclass(frozen=True)
class LazyDenseSet:
    """A dense subset of the lazy Cohen poset, given by membership plus an extension procedure.

    ``extend(p, rng)`` returns a condition q <= p inside the set; ``certificate``
    says in words why every condition can be so extended.
    """
    label: str
    contains: Callable = field(repr=False, compare=False)
    extend: Callable = field(repr=False, compare=False)
    certificate: str = ""


@dataclass(frozen=True)
class NotDense:
    """Report that a candidate set fails density, with a condition nothing in the set extends."""
    label: str
    counterexample: Condition

    def __str__(self):
        return f"{self.label}: NOT-DENSE (no extension of {self.counterexample} lies in the set)"


def _check_coords(P, row, col=None):
    rows = P.rows
    if row not in rows:
        raise ForcingError(f"row {row!r} not among {list(rows)}")
    if col is not None:
        if not isinstance(col, int) or col < 0:
            raise ForcingError(f"column must be a natural number, got {col!r}")
        if isinstance(P, Poset) and col >= P.cols:
            raise ForcingError(f"column {col} outside the 0..{P.cols - 1} grid")


def _point_contains(row, col):
    return lambda p: p.defined(row, col)


def _distinct_contains(r1, r2):
    def contains(p):
        cells = p._cells
        return any(r == r1 and cells.get((r2, c), b) != b for (r, c), b in cells.items())
    return contains


def dense_point(P, row, col):
    """Conditions defined at (row, col).  Always dense."""
    _check_coords(P, row, col)
    label = f"point({row},{col})"
    contains = _point_contains(row, col)
    if isinstance(P, Poset):
        return make_dense(P, [p for p in P.elements if contains(p)], label)

    def extend(p, rng):
        if contains(p):
            return p
        return p.with_cell(row, col, rng.randrange(2))

    return LazyDenseSet(label, contains, extend,
                        f"any condition not yet defined at ({row},{col}) can be defined there")


def dense_distinct(P, row1, row2):
    """Conditions on which rows ``row1`` and ``row2`` visibly differ at some column.

    Dense in the lazy poset; in a finite truncation this returns :class:`NotDense`
    with a counterexample when some condition leaves no column free to differ.
    """
    _check_coords(P, row1)
    _check_coords(P, row2)
    if row1 == row2:
        raise ForcingError("dense_distinct needs two different rows")
    label = f"distinct({row1},{row2})"
    contains = _distinct_contains(row1, row2)
    if isinstance(P, Poset):
        members = frozenset(p for p in P.elements if contains(p))
        for p in P.elements:
            if members.isdisjoint(P.down(p)):
                return NotDense(label, p)
        return DenseSet(P, members, label)

    def extend(p, rng):
        if contains(p):
            return p
        for c in itertools.count():
            a, b = p.get(row1, c), p.get(row2, c)
            if a is None or b is None:
                break
        if a is None and b is None:
            a = rng.randrange(2)
            return p.with_cell(row1, c, a).with_cell(row2, c, 1 - a)
        if a is None:
            return p.with_cell(row1, c, 1 - b)
        return p.with_cell(row2, c, 1 - a)

    return LazyDenseSet(label, contains, extend,
                        f"any condition can be extended at the first column where {row1} or "
                        f"{row2} is undefined, giving the two rows different bits there")


def hit_dense_sets(P, family: Sequence, seed: int = 0, start: Optional[Condition] = None) -> Filter:
    """Descend through the family one dense set at a time and return the generated filter.

    The result is the up-set of the final condition; ``Filter.chain`` holds the
    whole descending sequence, one entry per family member after the start.
    """
    for D in family:
        if isinstance(D, NotDense):
            raise NotDenseError(str(D))
    if isinstance(P, Poset):
        return hit_dense_sets_finite(P, family, seed, start)
    rng = random.Random(seed)
    current = start if start is not None else P.top
    chain = [current]
    for D in family:
        nxt = D.extend(current, rng)
        if not (nxt.extends(current) and D.contains(nxt)):
            raise ForcingError(f"extension procedure of {D.label} misbehaved at {current}")
        current = nxt
        chain.append(current)
    return Filter(P, None, current, tuple(chain))


def union_of_filter(F) -> Condition:
    """The union of a filter of Cohen conditions (or of any iterable of them).

    Fails if two members disagree somewhere, which a genuine filter never does.
    """
    if isinstance(F, Filter):
        members = F.members if F.members is not None else [F.generator]
    else:
        members = list(F)
    cells = {}
    for p in members:
        for cell, bit in p.cells.items():
            if cells.get(cell, bit) != bit:
                raise ForcingError(f"members disagree at {cell}: not a filter")
            cells[cell] = bit
    return Condition(cells)


def total_on(F: Condition, rows, cols: int) -> bool:
    return all(F.defined(r, c) for r in row_labels(rows) for c in range(cols))


def distinct_rows(F: Condition, rows) -> dict:
    """For each row pair, the first column where both are defined and differ (or None)."""
    rl = row_labels(rows)
    out = {}
    for r1, r2 in itertools.combinations(rl, 2):
        cols = sorted(c for (r, c) in F.cells if r == r1 and F.defined(r2, c)
                      and F.get(r1, c) != F.get(r2, c))
        out[(r1, r2)] = cols[0] if cols else None
    return out


def grid_table(F: Condition, rows, cols: Optional[int] = None) -> list:
    """Rows of bits, ``.`` where undefined; extends to the widest column mentioned."""
    rl = row_labels(rows)
    width = max([cols or 0] + [c + 1 for c in F.columns()])
    return [f"{r}: " + "".join(str(F.get(r, c)) if F.defined(r, c) else "." for c in range(width))
            for r in rl]


def parse_family(spec: str, P) -> list:
    """Dense family from text, items joined by ``+``.

    ``points:N`` (every row, columns < N), ``point:ROW:COL``, ``distinct`` (every
    row pair) and ``distinct:ROW:ROW``.
    """
    rows = list(P.rows)
    out = []
    for item in (s.strip() for s in spec.split("+") if s.strip()):
        parts = item.split(":")
        kind = parts[0]
        if kind == "points" and len(parts) == 2 and parts[1].isdigit():
            out += [dense_point(P, r, c) for c in range(int(parts[1])) for r in rows]
        elif kind == "point" and len(parts) == 3 and parts[2].isdigit():
            out.append(dense_point(P, parts[1], int(parts[2])))
        elif kind == "distinct" and len(parts) == 1:
            out += [dense_distinct(P, a, b) for a, b in itertools.combinations(rows, 2)]
        elif kind == "distinct" and len(parts) == 3:
            out.append(dense_distinct(P, parts[1], parts[2]))
        else:
            raise ParseError(f"bad dense family item {item!r}", 1, spec.find(item) + 1)
    return out


# --- the forcing relation -------------------------------------------------------

def forces(p, f, completion: Completion, ctx: ValuationContext) -> bool:
    """p ||- f  iff  embed(p) <= [[f]] in the completion of p's poset."""
    if ctx.algebra != completion.target:
        raise ForcingError("valuation context is not over the completion's algebra")
    if p not in completion.embed:
        raise ForcingError(f"{p} is not a condition of the completed poset")
    return completion.embed[p] <= val_formula(f, ctx)
