"""Finite posets of forcing conditions.

``q <= p`` means q is the stronger condition.  The completion uses the
down-set topology: open sets are the downward-closed sets, and the complete
Boolean algebra is the algebra of regular open sets ``int(cl(S)) == S``.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .algebra import BooleanAlgebra, Element
from .errors import CapExceeded, NotDenseError, ParseError, PosetError

ALL = "ALL"
GENERIC_ALL_CAP = 15
COMPLETION_CAP = 16

_ID = re.compile(r"[A-Za-z0-9_()>,-]+")


class Poset:
    """A finite partial order.

    Build from explicit pairs (closed under reflexivity and transitivity, then
    checked for antisymmetry) or with :meth:`from_order` from a trusted
    comparison function.
    """

    def __init__(self, elements: Sequence[Hashable], pairs: Iterable = ()):
        self.elements = tuple(dict.fromkeys(elements))
        index = set(self.elements)
        below = {p: {p} for p in self.elements}
        for q, p in pairs:
            if q not in index or p not in index:
                raise PosetError(f"pair ({q}, {p}) mentions an undeclared element")
            below[p].add(q)
        # transitive closure, Warshall style over the middle element
        for m in self.elements:
            bm = below[m]
            for p in self.elements:
                if m in below[p]:
                    below[p] |= bm
        for p in self.elements:
            for q in below[p]:
                if q != p and p in below[q]:
                    raise PosetError(f"antisymmetry violated: {q} <= {p} and {p} <= {q} (cycle)")
        self._below = {p: frozenset(s) for p, s in below.items()}
        self._leq = None
        self._above = None

    @classmethod
    def from_order(cls, elements: Sequence[Hashable], leq: Callable) -> "Poset":
        """Poset whose order is the given function ``leq(q, p)``; not re-validated."""
        self = cls.__new__(cls)
        self.elements = tuple(dict.fromkeys(elements))
        self._leq = leq
        self._below = None
        self._above = None
        return self

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        if self._below is not None:
            return p in self._below
        return p in set(self.elements)

    def leq(self, q, p) -> bool:
        if self._below is not None:
            return q in self._below[p]
        return self._leq(q, p)

    def down(self, p) -> frozenset:
        if self._below is None:
            self._below = {x: frozenset(q for q in self.elements if self._leq(q, x))
                           for x in self.elements}
        return self._below[p]

    def up(self, p) -> frozenset:
        if self._above is None:
            above = {x: set() for x in self.elements}
            for x in self.elements:
                for q in self.down(x):
                    above[q].add(x)
            self._above = {x: frozenset(s) for x, s in above.items()}
        return self._above[p]

    @property
    def le(self) -> frozenset:
        """The order as a set of pairs (q, p) meaning q <= p."""
        return frozenset((q, p) for p in self.elements for q in self.down(p))

    def minimal(self) -> list:
        return [p for p in self.elements if self.down(p) == {p}]

    def maximal(self) -> list:
        return [p for p in self.elements if self.up(p) == {p}]

    def compatible(self, p, q) -> bool:
        return not self.down(p).isdisjoint(self.down(q))

    def __repr__(self):
        return f"Poset({len(self)} elements)"


def load_poset(text: str) -> Poset:
    """Parse ``elem <id>`` and ``le <id> <id>`` lines (first <= second; ``#`` comments)."""
    elements, pairs = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        for tok in parts[1:]:
            if not _ID.fullmatch(tok):
                raise ParseError(f"bad condition id {tok!r}", lineno, raw.find(tok) + 1)
        if parts[0] == "elem" and len(parts) == 2:
            elements.append(parts[1])
        elif parts[0] == "le" and len(parts) == 3:
            pairs.append((parts[1], parts[2]))
        else:
            raise ParseError(f"expected 'elem <id>' or 'le <id> <id>', got {line!r}", lineno, 1)
    for q, p in pairs:
        for x in (q, p):
            if x not in elements:
                elements.append(x)
    return Poset(elements, pairs)


def poset_to_text(P: Poset) -> str:
    lines = [f"elem {p}" for p in P.elements]
    lines += [f"le {q} {p}" for p in P.elements for q in sorted(P.down(p), key=str) if q != p]
    return "\n".join(lines) + "\n"


def chain(n: int) -> Poset:
    """``c0 < c1 < ... < c(n-1)``."""
    ids = [f"c{i}" for i in range(n)]
    return Poset(ids, zip(ids, ids[1:]))


def antichain(n: int, prefix="p") -> Poset:
    return Poset([f"{prefix}{i}" for i in range(n)])


# --- density, filters, genericity -------------------------------------------

def is_dense(P: Poset, S: Iterable) -> bool:
    S = set(S)
    return all(not S.isdisjoint(P.down(p)) for p in P.elements)


@dataclass(frozen=True)
class DenseSet:
    poset: Poset = field(repr=False, compare=False)
    members: frozenset
    label: str = ""

    def __contains__(self, p):
        return p in self.members

    def contains(self, p) -> bool:
        return p in self.members


def make_dense(P: Poset, members: Iterable, label: str = "") -> DenseSet:
    members = frozenset(members)
    missing = [m for m in members if m not in P]
    if missing:
        raise PosetError(f"dense set {label!r} mentions unknown conditions {missing}")
    for p in P.elements:
        if members.isdisjoint(P.down(p)):
            raise NotDenseError(f"{label or 'set'} is not dense: nothing in it lies below {p}")
    return DenseSet(P, members, label)


def load_dense_family(text: str, P: Poset) -> list:
    """Parse ``dense <name> = <id> <id> ...`` lines into validated dense sets."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"dense\s+(\S+)\s*=\s*(.*)", line)
        if not m:
            raise ParseError(f"expected 'dense <name> = <id> ...', got {line!r}", lineno, 1)
        out.append(make_dense(P, m.group(2).split(), m.group(1)))
    return out


def is_filter(P: Poset, S: Iterable) -> bool:
    """Nonempty, upward closed, and any two members have a common lower bound in S."""
    S = frozenset(S)
    if not S:
        return False
    for p in S:
        if not P.up(p) <= S:
            return False
    for p, q in itertools.combinations(S, 2):
        if S.isdisjoint(P.down(p) & P.down(q)):
            return False
    return True


@dataclass(frozen=True)
class Filter:
    """A filter given by its members or, in infinite posets, by a generating condition.

    ``chain`` records the descending sequence of conditions that produced it.
    """
    poset: object = field(repr=False, compare=False)
    members: Optional[frozenset] = None
    generator: object = None
    chain: tuple = ()

    def __contains__(self, p):
        if self.members is not None:
            return p in self.members
        return self.poset.leq(self.generator, p)


def make_filter(P: Poset, members: Iterable) -> Filter:
    members = frozenset(members)
    if not is_filter(P, members):
        raise PosetError("not a filter (must be nonempty, upward closed and directed)")
    return Filter(P, members)


def up_filter(P: Poset, p, chain=()) -> Filter:
    return Filter(P, P.up(p), p, tuple(chain))


def all_dense_subsets(P: Poset, cap: int = GENERIC_ALL_CAP) -> list:
    if len(P) > cap:
        raise CapExceeded(f"enumerating every dense subset needs |P| <= {cap}, got {len(P)}")
    els = P.elements
    downs = [frozenset(els.index(q) for q in P.down(p)) for p in els]
    out = []
    for mask in range(1 << len(els)):
        if all(any(mask >> i & 1 for i in d) for d in downs):
            out.append(DenseSet(P, frozenset(els[i] for i in range(len(els)) if mask >> i & 1)))
    return out


def meets(F: Filter, D) -> bool:
    if F.members is not None:
        return any(D.contains(p) for p in F.members)
    # a generator-defined filter: D is open, so it meets F iff it holds the generator
    return D.contains(F.generator)


def is_generic(P: Poset, F: Filter, dense_family=ALL, cap: int = GENERIC_ALL_CAP) -> bool:
    family = all_dense_subsets(P, cap) if dense_family == ALL else dense_family
    return all(meets(F, D) for D in family)


def hit_dense_sets_finite(P: Poset, family: Sequence[DenseSet], seed: int = 0,
                          start=None) -> Filter:
    """Meet each dense set in turn, moving down to one of its weakest members below the current condition."""
    rng = random.Random(seed)
    for D in family:
        if not isinstance(D, DenseSet):
            raise NotDenseError(f"family member {getattr(D, 'label', D)!r} is not a dense set")
        if not is_dense(P, D.members):
            raise NotDenseError(f"family member {D.label!r} is not dense")
    if start is None:
        tops = sorted(P.maximal(), key=str)
        start = tops[0] if len(tops) == 1 else rng.choice(tops)
    current = start
    chain_ = [current]
    for D in family:
        if current in D.members:
            chain_.append(current)
            continue
        cands = [q for q in P.down(current) if q in D.members]
        weakest = [q for q in cands if not any(r != q and P.leq(q, r) for r in cands)]
        current = rng.choice(sorted(weakest, key=str))
        chain_.append(current)
    return up_filter(P, current, chain_)


# --- regular open completion ------------------------------------------------

def down_closure(P: Poset, S: Iterable) -> frozenset:
    out = set()
    for p in S:
        out |= P.down(p)
    return frozenset(out)


def closure(P: Poset, S: Iterable) -> frozenset:
    """cl(S) = {p : down(p) meets S}."""
    S = frozenset(S)
    return frozenset(p for p in P.elements if not P.down(p).isdisjoint(S))


def interior(P: Poset, S: Iterable) -> frozenset:
    """int(S) = {p : down(p) is inside S}."""
    S = frozenset(S)
    return frozenset(p for p in P.elements if P.down(p) <= S)


def regularize(P: Poset, S: Iterable) -> frozenset:
    return interior(P, closure(P, S))


def is_regular_open(P: Poset, S: Iterable) -> bool:
    S = frozenset(S)
    return regularize(P, S) == S


def ro_join(P: Poset, sets: Iterable) -> frozenset:
    out = set()
    for s in sets:
        out |= s
    return regularize(P, out)


def ro_complement(P: Poset, S: Iterable) -> frozenset:
    return interior(P, frozenset(P.elements) - closure(P, S))


@dataclass(frozen=True)
class Completion:
    """Embedding of a poset into its regular-open algebra, canonicalized to atom sets.

    ``regions[i]`` is the regular open set of atom i; together they give the
    isomorphism between the target algebra and the regular opens.
    """
    source: Poset = field(repr=False)
    target: BooleanAlgebra
    embed: dict
    regions: tuple

    def to_regular_open(self, b: Element) -> frozenset:
        return ro_join(self.source, [self.regions[i] for i in b.atoms])

    def from_regular_open(self, S: Iterable) -> Element:
        S = frozenset(S)
        if not is_regular_open(self.source, S):
            raise PosetError("not a regular open set")
        mask = 0
        for i, r in enumerate(self.regions):
            if r <= S:
                mask |= 1 << i
        return Element(self.target, mask)


def complete(P: Poset, cap: int = COMPLETION_CAP) -> Completion:
    if not len(P):
        raise PosetError("cannot complete an empty poset")
    if len(P) > cap:
        raise CapExceeded(f"completion needs |P| <= {cap}, got {len(P)}")
    images = {p: regularize(P, P.down(p)) for p in P.elements}
    # atoms: the minimal nonempty sets among the images (images of minimal conditions)
    candidates = list(dict.fromkeys(images[p] for p in P.elements))
    regions = [r for r in candidates if r and not any(o and o < r for o in candidates)]
    whole = frozenset(P.elements)
    for a, b in itertools.combinations(regions, 2):
        if a & b:
            raise PosetError("internal: atoms of the regular-open algebra overlap")
    if ro_join(P, regions) != whole:
        raise PosetError("internal: atoms of the regular-open algebra do not cover P")
    labels = []
    for r in regions:
        mins = sorted((p for p in r if P.down(p) == {p}), key=P.elements.index)
        labels.append(str(mins[0]) if mins else f"r{len(labels)}")
    target = BooleanAlgebra(len(regions), tuple(labels))
    embed = {}
    for p, img in images.items():
        mask = 0
        for i, r in enumerate(regions):
            if r <= img:
                mask |= 1 << i
        if ro_join(P, [regions[i] for i in range(len(regions)) if mask >> i & 1]) != img:
            raise PosetError(f"internal: image of {p} is not a join of atoms")
        embed[p] = Element(target, mask)
    return Completion(P, target, embed, tuple(regions))
