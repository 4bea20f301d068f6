"""Finite complete Boolean algebras in canonical atom-set form.

Every finite Boolean algebra is isomorphic to the powerset of its atoms, so an
algebra here is just an atom count and an element is a subset of atom indices,
stored as an ``int`` bitmask.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional, Sequence

from .errors import AlgebraError, ParseError

MAX_ATOMS = 20


@dataclass(frozen=True)
class BooleanAlgebra:
    atom_count: int
    atom_labels: tuple = ()

    def __post_init__(self):
        if not isinstance(self.atom_count, int) or self.atom_count < 1:
            raise AlgebraError(
                f"atom_count must be a positive integer, got {self.atom_count!r}"
                " (the one-element algebra with 0 = 1 is not allowed)")
        if not self.atom_labels:
            object.__setattr__(self, "atom_labels",
                               tuple(f"a{i}" for i in range(self.atom_count)))
        elif len(self.atom_labels) != self.atom_count:
            raise AlgebraError("atom_labels must have one label per atom")
        else:
            object.__setattr__(self, "atom_labels", tuple(self.atom_labels))

    @property
    def full_mask(self) -> int:
        return (1 << self.atom_count) - 1

    @property
    def size(self) -> int:
        return 1 << self.atom_count

    @property
    def zero(self) -> "Element":
        return Element(self, 0)

    @property
    def one(self) -> "Element":
        return Element(self, self.full_mask)

    def atom(self, i: int) -> "Element":
        if not 0 <= i < self.atom_count:
            raise AlgebraError(f"atom index {i} out of range for {self.atom_count} atoms")
        return Element(self, 1 << i)

    def atoms(self) -> list:
        return [Element(self, 1 << i) for i in range(self.atom_count)]

    def element(self, atoms: Iterable[int]) -> "Element":
        mask = 0
        for i in atoms:
            mask |= self.atom(i).mask
        return Element(self, mask)

    def from_mask(self, mask: int) -> "Element":
        if mask < 0 or mask > self.full_mask:
            raise AlgebraError(f"mask {mask} is not an element of this algebra")
        return Element(self, mask)

    def elements(self) -> list:
        """All 2**atom_count elements in mask order (0 first, 1 last)."""
        return [Element(self, m) for m in range(self.size)]

    def parse(self, text: str) -> "Element":
        return parse_element(text, self)

    def __str__(self):
        return f"B({self.atom_count} atoms)"


def make_algebra(atom_count: int, atom_labels: Optional[Sequence[str]] = None,
                 cap: int = MAX_ATOMS) -> BooleanAlgebra:
    if not isinstance(atom_count, int) or not 1 <= atom_count <= cap:
        raise AlgebraError(f"atom count must be between 1 and {cap}, got {atom_count}")
    return BooleanAlgebra(atom_count, tuple(atom_labels or ()))


def _check_same(x: "Element", y: "Element"):
    if x.algebra is not y.algebra and x.algebra != y.algebra:
        raise AlgebraError(f"elements from different algebras: {x.algebra} vs {y.algebra}")


@dataclass(frozen=True)
class Element:
    algebra: BooleanAlgebra = field(repr=False)
    mask: int

    @property
    def atoms(self) -> frozenset:
        return frozenset(i for i in range(self.algebra.atom_count) if self.mask >> i & 1)

    def is_zero(self) -> bool:
        return self.mask == 0

    def is_one(self) -> bool:
        return self.mask == self.algebra.full_mask

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __invert__(self):
        return complement(self)

    def __le__(self, other):
        return leq(self, other)

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"Element({format_element(self)})"


def meet(x: Element, y: Element) -> Element:
    _check_same(x, y)
    return Element(x.algebra, x.mask & y.mask)


def join(x: Element, y: Element) -> Element:
    _check_same(x, y)
    return Element(x.algebra, x.mask | y.mask)


def complement(x: Element) -> Element:
    return Element(x.algebra, x.algebra.full_mask & ~x.mask)


def implies(x: Element, y: Element) -> Element:
    """x => y, i.e. complement(x) joined with y."""
    _check_same(x, y)
    return Element(x.algebra, (x.algebra.full_mask & ~x.mask) | y.mask)


def leq(x: Element, y: Element) -> bool:
    _check_same(x, y)
    return x.mask & y.mask == x.mask


def big_join(xs: Iterable[Element], algebra: Optional[BooleanAlgebra] = None) -> Element:
    """Join of a finite collection; the empty join is 0.

    ``algebra`` is only needed to type the result of an empty collection.
    """
    xs = list(xs)
    if not xs:
        if algebra is None:
            raise AlgebraError("big_join of an empty collection needs an algebra")
        return algebra.zero
    return reduce(join, xs)


def big_meet(xs: Iterable[Element], algebra: Optional[BooleanAlgebra] = None) -> Element:
    xs = list(xs)
    if not xs:
        if algebra is None:
            raise AlgebraError("big_meet of an empty collection needs an algebra")
        return algebra.one
    return reduce(meet, xs)


@dataclass(frozen=True)
class Ultrafilter:
    """Principal ultrafilter: all elements whose atom set contains the generator."""
    algebra: BooleanAlgebra
    generator_atom: int

    def __contains__(self, x: Element) -> bool:
        _check_same(x, self.algebra.one)
        return bool(x.mask >> self.generator_atom & 1)

    def contains_mask(self, mask: int) -> bool:
        return bool(mask >> self.generator_atom & 1)

    def members(self) -> list:
        return [x for x in self.algebra.elements() if x in self]

    @property
    def label(self) -> str:
        return self.algebra.atom_labels[self.generator_atom]

    def __str__(self):
        return f"U[{self.label}]"


def ultrafilters(algebra: BooleanAlgebra) -> list:
    return [Ultrafilter(algebra, i) for i in range(algebra.atom_count)]


def ultrafilter_from_label(algebra: BooleanAlgebra, text: str) -> Ultrafilter:
    """Accepts ``aK`` or an atom label."""
    text = text.strip()
    if text in algebra.atom_labels:
        return Ultrafilter(algebra, algebra.atom_labels.index(text))
    m = re.fullmatch(r"a(\d+)", text)
    if not m or int(m.group(1)) >= algebra.atom_count:
        raise AlgebraError(f"no atom named {text!r} in {algebra}")
    return Ultrafilter(algebra, int(m.group(1)))


def format_element(x: Element) -> str:
    if x.mask == x.algebra.full_mask:
        return "1"
    return "{" + ",".join(f"a{i}" for i in sorted(x.atoms)) + "}"


# --- element expressions: 0 1 aK & | ~ => ( ) -------------------------------

_TOKEN = re.compile(r"\s*(=>|[&|~(){},]|0|1|a\d+)")


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad element expression {text!r}", 1, pos + 1)
        out.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return out


def parse_element(text: str, algebra: BooleanAlgebra) -> Element:
    """Parse an element expression; precedence is ~ > & > | > => (=> is right associative).

    The canonical brace form ``{a0,a2}`` is accepted as well.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of element expression {text!r}", 1, len(text) + 1)
        tok, col = toks[pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", 1, col)
        pos += 1
        return tok

    def atom_of(tok):
        i = int(tok[1:])
        if i >= algebra.atom_count:
            raise ParseError(f"atom {tok} out of range for {algebra}", 1, toks[pos - 1][1])
        return Element(algebra, 1 << i)

    def primary():
        tok = take()
        if tok == "0":
            return algebra.zero
        if tok == "1":
            return algebra.one
        if tok.startswith("a"):
            return atom_of(tok)
        if tok == "(":
            e = implication()
            take(")")
            return e
        if tok == "{":
            mask = 0
            if peek() != "}":
                while True:
                    t = take()
                    if not t.startswith("a"):
                        raise ParseError(f"expected atom in braces, found {t!r}", 1, toks[pos - 1][1])
                    mask |= atom_of(t).mask
                    if peek() == ",":
                        take()
                        continue
                    break
            take("}")
            return Element(algebra, mask)
        raise ParseError(f"unexpected token {tok!r}", 1, toks[pos - 1][1])

    def unary():
        if peek() == "~":
            take()
            return complement(unary())
        return primary()

    def conj():
        e = unary()
        while peek() == "&":
            take()
            e = meet(e, unary())
        return e

    def disj():
        e = conj()
        while peek() == "|":
            take()
            e = join(e, conj())
        return e

    def implication():
        e = disj()
        if peek() == "=>":
            take()
            return implies(e, implication())
        return e

    result = implication()
    if pos != len(toks):
        raise ParseError(f"trailing input {toks[pos][0]!r}", 1, toks[pos][1])
    return result
