"""B-valued sets ("names"), finite name universes and hereditarily finite sets."""
from __future__ import annotations

import itertools
import re
from typing import Iterable, Mapping, Optional

from .algebra import BooleanAlgebra, Element, parse_element
from .errors import CapExceeded, ParseError, UniverseError

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
POWERSET_CAP = 4096
UNIVERSE_CAP = 100_000


class HFSet(frozenset):
    """A hereditarily finite set; extensional equality is frozenset equality."""

    def __new__(cls, members: Iterable = ()):
        members = [m if isinstance(m, HFSet) else HFSet(m) for m in members]
        return super().__new__(cls, members)

    @property
    def rank(self) -> int:
        return max((m.rank + 1 for m in self), default=0)

    @property
    def code(self) -> int:
        """Ackermann code: sum of 2**code(m) over members. A bijection HF -> N."""
        return sum(1 << m.code for m in self)

    @classmethod
    def from_code(cls, n: int) -> "HFSet":
        return cls(cls.from_code(i) for i in range(n.bit_length()) if n >> i & 1)

    def __str__(self):
        return "{" + ",".join(str(m) for m in sorted(self, key=lambda m: m.code)) + "}"

    def __repr__(self):
        return f"HFSet({self})"


EMPTY = HFSet()


def parse_hf(text: str) -> HFSet:
    """Parse the ``{}``-nest syntax, e.g. ``{{},{{}}}``."""
    s = re.sub(r"\s+", "", text)
    pos = 0

    def one():
        nonlocal pos
        if pos >= len(s) or s[pos] != "{":
            raise ParseError(f"expected '{{' in HF set {text!r}", 1, pos + 1)
        pos += 1
        members = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return HFSet()
        while True:
            members.append(one())
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == "}":
                pos += 1
                return HFSet(members)
            raise ParseError(f"expected ',' or '}}' in HF set {text!r}", 1, pos + 1)

    out = one()
    if pos != len(s):
        raise ParseError(f"trailing input in HF set {text!r}", 1, pos + 1)
    return out


def hf_sets_up_to_rank(k: int) -> list:
    """All HF sets of rank <= k (that is, V_{k+1}), ordered by Ackermann code."""
    level = [EMPTY]
    for _ in range(k):
        level = [HFSet(c) for r in range(len(level) + 1)
                 for c in itertools.combinations(level, r)]
    return sorted(level, key=lambda s: s.code)


def hf_closure(sets: Iterable[HFSet]) -> list:
    """Transitive closure of a family of HF sets, members before the sets containing them."""
    seen = {}

    def visit(s):
        if s in seen:
            return
        for m in sorted(s, key=lambda m: m.code):
            visit(m)
        seen[s] = None

    for s in sets:
        visit(s if isinstance(s, HFSet) else HFSet(s))
    return list(seen)


class Name:
    """A B-valued set: a finite map from child name ids to algebra elements.

    Names are identified by ``id``; the set a name denotes is a matter for the
    valuation, not for ``==``.
    """
    __slots__ = ("id", "entries")

    def __init__(self, id: str, entries: Mapping[str, Element]):
        self.id = id
        self.entries = dict(entries)

    def __getitem__(self, child):
        return self.entries[child]

    @property
    def domain(self):
        return list(self.entries)

    def __repr__(self):
        inner = ", ".join(f"{c} : {v}" for c, v in self.entries.items())
        return f"name {self.id} {{ {inner} }}"

    __str__ = __repr__


class NameUniverse:
    """An ordered, child-closed collection of names over one algebra.

    Immutable in use: ``extend`` returns a new universe.
    """

    def __init__(self, algebra: BooleanAlgebra, names: Iterable[Name] = ()):
        self.algebra = algebra
        self._names = {}
        self._rank = {}
        self._shape = {}
        self._by_shape = {}
        for n in names:
            self._add(n)

    def _add(self, n: Name):
        if not IDENT.fullmatch(n.id) or n.id in ("forall", "exists", "in", "sub"):
            raise UniverseError(f"bad name id {n.id!r}")
        if n.id in self._names:
            raise UniverseError(f"duplicate name id {n.id!r}")
        for child, value in n.entries.items():
            if child not in self._names:
                raise UniverseError(f"name {n.id!r}: unknown child id {child!r}"
                                    " (children must be declared earlier)")
            if not isinstance(value, Element) or value.algebra != self.algebra:
                raise UniverseError(f"name {n.id!r}: value for {child!r} is not in {self.algebra}")
        self._names[n.id] = n
        self._rank[n.id] = max((self._rank[c] + 1 for c in n.entries), default=0)
        shape = frozenset((self._shape[c], v.mask) for c, v in n.entries.items())
        self._shape[n.id] = shape
        self._by_shape.setdefault(shape, n.id)

    def extend(self, names: Iterable[Name]) -> "NameUniverse":
        new = NameUniverse(self.algebra, self._names.values())
        for n in names:
            new._add(n)
        return new

    def __contains__(self, id) -> bool:
        return id in self._names

    def __getitem__(self, id) -> Name:
        try:
            return self._names[id]
        except KeyError:
            raise UniverseError(f"no name {id!r} in universe") from None

    def __iter__(self):
        return iter(self._names.values())

    def __len__(self):
        return len(self._names)

    @property
    def ids(self) -> list:
        return list(self._names)

    def rank(self, id) -> int:
        return self._rank[id]

    def find_structure(self, entries: Mapping[str, Element]) -> Optional[str]:
        """Id of the first name whose entries match structurally (up to child structure)."""
        shape = frozenset((self._shape[c], v.mask) for c, v in entries.items())
        return self._by_shape.get(shape)

    def same_structure(self, a: str, b: str) -> bool:
        return self._shape[a] == self._shape[b]

    def fresh_id(self, base: str) -> str:
        if base not in self._names:
            return base
        for i in itertools.count(1):
            if f"{base}_{i}" not in self._names:
                return f"{base}_{i}"

    def to_text(self) -> str:
        return "\n".join(
            f"name {n.id} {{ " + ", ".join(f"{c} : {v}" for c, v in n.entries.items()) + " }"
            for n in self) + "\n"

    def __repr__(self):
        return f"NameUniverse({self.algebra}, {len(self)} names)"


def check_id(s: HFSet) -> str:
    return f"hf{s.code}"


def check_name(s: HFSet, algebra: BooleanAlgebra,
               universe: Optional[NameUniverse] = None):
    """The canonical name of an ordinary set: every entry has value 1.

    Returns ``(name, universe)`` where the universe has been extended with any
    missing check-names of members; existing structurally equal names are reused.
    """
    if not isinstance(s, HFSet):
        s = HFSet(s)
    universe = universe if universe is not None else NameUniverse(algebra)
    if universe.algebra != algebra:
        raise UniverseError("universe is over a different algebra")
    ids = {}
    work = NameUniverse(algebra, universe)
    for t in hf_closure([s]):
        entries = {ids[m]: algebra.one for m in t}
        found = work.find_structure(entries)
        if found is None:
            n = Name(work.fresh_id(check_id(t)), entries)
            work._add(n)
            found = n.id
        ids[t] = found
    return work[ids[s]], work


def check_universe(sets: Iterable[HFSet], algebra: BooleanAlgebra) -> NameUniverse:
    """Universe of check-names of the given sets and everything hereditarily in them."""
    u = NameUniverse(algebra)
    for s in hf_closure(sets):
        _, u = check_name(s, algebra, u)
    return u


def universe_up_to_rank(algebra: BooleanAlgebra, k: int, cap: int = UNIVERSE_CAP) -> NameUniverse:
    """Every name of rank <= k: partial functions from lower-rank names into B.

    Names of rank exactly j+1 are the partial functions from the rank <= j names
    whose domain meets rank j.  The size is (|B|+1)**|U_{k-1}|.
    """
    u = NameUniverse(algebra, [Name("n0", {})])
    values = algebra.elements()
    counter = itertools.count(1)
    for j in range(k):
        prev = u.ids
        if (len(values) + 1) ** len(prev) > cap:
            raise CapExceeded(f"rank {j + 1} universe over {algebra} would have "
                              f"{(len(values) + 1) ** len(prev)} names (cap {cap})")
        new = []
        for choice in itertools.product([None] + values, repeat=len(prev)):
            if not any(v is not None for i, v in zip(prev, choice) if u.rank(i) == j):
                continue
            entries = {i: v for i, v in zip(prev, choice) if v is not None}
            new.append(Name(f"n{next(counter)}", entries))
        u = u.extend(new)
    return u


_NAME_LINE = re.compile(r"name\s+(\S+)\s*\{(.*)\}\s*$")


def load_names(text: str, algebra: BooleanAlgebra) -> NameUniverse:
    """Parse ``name <id> { <child> : <element-expr>, ... }`` lines (``#`` comments)."""
    u = NameUniverse(algebra)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _NAME_LINE.fullmatch(line)
        if not m:
            raise ParseError(f"expected 'name <id> {{ ... }}', got {line!r}", lineno, 1)
        nid, body = m.group(1), m.group(2).strip()
        entries = {}
        if body:
            for item in body.split(","):
                if ":" not in item:
                    raise ParseError(f"expected '<child> : <element>' in {item.strip()!r}", lineno, 1)
                child, expr = (p.strip() for p in item.split(":", 1))
                if child in entries:
                    raise ParseError(f"duplicate child {child!r} in name {nid!r}", lineno, 1)
                try:
                    entries[child] = parse_element(expr, algebra)
                except ParseError as e:
                    raise ParseError(f"name {nid!r}: {e}", lineno, 1) from None
        try:
            u._add(Name(nid, entries))
        except UniverseError as e:
            raise UniverseError(f"line {lineno}: {e}") from None
    return u


def powerset_name(x: str, universe: NameUniverse, id: Optional[str] = None,
                  cap: int = POWERSET_CAP):
    """The powerset name of ``x``.

    Its potential members are all maps w: dom(x) -> B, each materialized as a
    fresh name, with value [[w sub x]].  Returns ``(name, universe)``.
    """
    from .valuation import ValuationContext, val_subset

    xn = universe[x]
    algebra = universe.algebra
    dom = xn.domain
    count = algebra.size ** len(dom)
    if count > cap:
        raise CapExceeded(f"powerset of {x!r} needs {count} potential members (cap {cap})")
    base = id or f"P_{x}"
    ws = [Name(universe.fresh_id(f"{base}_w{k}"), dict(zip(dom, values)))
          for k, values in enumerate(itertools.product(algebra.elements(), repeat=len(dom)))]
    work = universe.extend(ws)
    members = [w.id for w in ws]
    ctx = ValuationContext(work)
    entries = {w: val_subset(w, x, ctx) for w in members}
    y = Name(work.fresh_id(base), entries)
    work = work.extend([y])
    return y, work


def random_universe(algebra: BooleanAlgebra, rng, per_rank=(1, 3, 3), zero_bias: float = 0.2,
                    prefix: str = "m") -> NameUniverse:
    """A random child-closed universe with ``per_rank[j]`` names of rank j.

    Each name of rank j+1 picks a random domain among the earlier names that
    includes at least one name of rank j; values are random elements (0 included).
    """
    values = algebra.elements()
    u = NameUniverse(algebra)
    counter = itertools.count()
    layers = []
    for j, k in enumerate(per_rank):
        layer = []
        earlier = u.ids
        for _ in range(k):
            if j == 0:
                entries = {}
            else:
                top = rng.choice(layers[j - 1])
                dom = {top} | {w for w in earlier if rng.random() < 0.4}
                entries = {w: (algebra.zero if rng.random() < zero_bias else rng.choice(values))
                           for w in sorted(dom, key=earlier.index)}
            nid = f"{prefix}{next(counter)}"
            u._add(Name(nid, entries))
            layer.append(nid)
            if j == 0:
                break
        layers.append(layer)
    return u
