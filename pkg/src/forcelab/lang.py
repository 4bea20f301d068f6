"""The first-order language of set theory: AST, parser, printer, desugaring.

Concrete syntax::

    formula := iff | quant
    quant   := ("forall" | "exists") var ["in" term] "." formula
    iff     := imp {"<->" imp}
    imp     := or ["->" imp]
    or      := and {"|" and}
    and     := unary {"&" unary}
    unary   := "~" unary | atom | "(" formula ")"
    atom    := term ("=" | "in" | "sub") term

Identifiers bound by a quantifier parse as :class:`Var`.  Unbound identifiers
become :class:`Const` (resolved against a name universe at evaluation time),
unless a ``constants`` set is supplied, in which case anything outside it is a
free variable (open mode) or an error (sentence mode).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import ParseError, ValuationError

KEYWORDS = frozenset({"forall", "exists", "in", "sub"})


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


class Formula:
    """Base class of formula nodes."""

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mem(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Formula):
    """``left sub right``: sugar for forall w . (w in left -> w in right)."""
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BoundedExists(Formula):
    var: str
    bound: Term
    body: Formula


@dataclass(frozen=True)
class BoundedForall(Formula):
    var: str
    bound: Term
    body: Formula


ATOMS = (Eq, Mem, Sub)
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Exists, Forall)
BOUNDED = (BoundedExists, BoundedForall)

_ATOM_OPS = {Eq: "=", Mem: "in", Sub: "sub"}
_BIN_OPS = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
_QUANT_WORD = {Exists: "exists", Forall: "forall", BoundedExists: "exists", BoundedForall: "forall"}


# --- printing ---------------------------------------------------------------

def to_text(f: Formula) -> str:
    """Canonical fully parenthesized form; reparses to an equal AST."""
    return _show(f, top=True)


def _show(f, top=False):
    if isinstance(f, ATOMS):
        return f"{f.left} {_ATOM_OPS[type(f)]} {f.right}"
    if isinstance(f, Not):
        return "~" + _show(f.body)
    if isinstance(f, BINARY):
        s = f"{_show(f.left)} {_BIN_OPS[type(f)]} {_show(f.right)}"
    elif isinstance(f, QUANTIFIERS):
        s = f"{_QUANT_WORD[type(f)]} {f.var} . {_show(f.body, top=True)}"
    elif isinstance(f, BOUNDED):
        s = f"{_QUANT_WORD[type(f)]} {f.var} in {f.bound} . {_show(f.body, top=True)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return s if top and not isinstance(f, BINARY) else f"({s})"


# --- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|[~&|().=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def _tokenize(text):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line += 1
                    line_start = i + 1
        else:
            toks.append((m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(("<eof>", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text, constants, open_mode):
        self.toks = _tokenize(text)
        self.i = 0
        self.constants = None if constants is None else frozenset(constants)
        self.open_mode = open_mode
        self.bound = []

    def peek(self):
        return self.toks[self.i][0]

    def error(self, msg):
        _, line, col = self.toks[self.i]
        raise ParseError(msg, line, col)

    def take(self, expected=None):
        tok = self.toks[self.i]
        if expected is not None and tok[0] != expected:
            self.error(f"expected {expected!r}, found {tok[0]!r}")
        if tok[0] == "<eof>":
            self.error("unexpected end of input")
        self.i += 1
        return tok[0]

    def ident(self, what):
        tok = self.peek()
        if tok in KEYWORDS or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            self.error(f"expected {what}, found {tok!r}")
        return self.take()

    def formula(self):
        if self.peek() in ("forall", "exists"):
            return self.quant()
        return self.iff()

    def quant(self):
        word = self.take()
        var = self.ident("variable")
        bound = None
        if self.peek() == "in":
            self.take()
            bound = self.term()
        self.take(".")
        self.bound.append(var)
        try:
            body = self.formula()
        finally:
            self.bound.pop()
        if bound is None:
            return (Forall if word == "forall" else Exists)(var, body)
        return (BoundedForall if word == "forall" else BoundedExists)(var, bound, body)

    def iff(self):
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        return self.atom()

    def atom(self):
        left = self.term()
        op = self.peek()
        if op == "=":
            node = Eq
        elif op == "in":
            node = Mem
        elif op == "sub":
            node = Sub
        else:
            self.error(f"expected '=', 'in' or 'sub', found {op!r}")
        self.take()
        return node(left, self.term())

    def term(self):
        name = self.ident("term")
        if name in self.bound:
            return Var(name)
        if self.constants is None or name in self.constants:
            return Const(name)
        if self.open_mode:
            return Var(name)
        self.i -= 1
        self.error(f"unbound variable {name!r}")


def parse(text: str, constants: Optional[Iterable[str]] = None, open: bool = False) -> Formula:
    p = _Parser(text, constants, open)
    f = p.formula()
    if p.peek() != "<eof>":
        p.error(f"unexpected {p.peek()!r} after formula")
    return f


# --- structural utilities ---------------------------------------------------

def term_names(f: Formula) -> set:
    """Every identifier occurring in f, bound or not."""
    out = set()
    for node in walk(f):
        if isinstance(node, ATOMS):
            out.update((node.left.name, node.right.name))
        elif isinstance(node, QUANTIFIERS):
            out.add(node.var)
        elif isinstance(node, BOUNDED):
            out.update((node.var, node.bound.name))
    return out


def walk(f: Formula):
    yield f
    if isinstance(f, Not):
        yield from walk(f.body)
    elif isinstance(f, BINARY):
        yield from walk(f.left)
        yield from walk(f.right)
    elif isinstance(f, (QUANTIFIERS, BOUNDED)):
        yield from walk(f.body)


def constants(f: Formula) -> set:
    out = set()
    for node in walk(f):
        if isinstance(node, ATOMS):
            out.update(t.name for t in (node.left, node.right) if isinstance(t, Const))
        elif isinstance(node, BOUNDED) and isinstance(node.bound, Const):
            out.add(node.bound.name)
    return out


def free_vars(f: Formula) -> set:
    if isinstance(f, ATOMS):
        return {t.name for t in (f.left, f.right) if isinstance(t, Var)}
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    if isinstance(f, BOUNDED):
        extra = {f.bound.name} if isinstance(f.bound, Var) else set()
        return (free_vars(f.body) - {f.var}) | extra
    raise TypeError(f"not a formula: {f!r}")


def validate(f: Formula, open: bool = False) -> Formula:
    """Raise unless f is a sentence (or any formula, when ``open``)."""
    if not open:
        fv = free_vars(f)
        if fv:
            raise ValuationError(f"formula has free variables: {', '.join(sorted(fv))}")
    return f


def depth(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, BINARY):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + depth(f.body)


def fresh_name(base: str, avoid: set) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def _sub_term(t, var, term):
    return term if isinstance(t, Var) and t.name == var else t


def substitute(f: Formula, var: str, term: Term) -> Formula:
    """Replace free occurrences of ``var`` by ``term``, renaming bound variables on capture."""
    if isinstance(f, ATOMS):
        return type(f)(_sub_term(f.left, var, term), _sub_term(f.right, var, term))
    if isinstance(f, Not):
        return Not(substitute(f.body, var, term))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, var, term), substitute(f.right, var, term))
    if isinstance(f, (QUANTIFIERS, BOUNDED)):
        bounded = isinstance(f, BOUNDED)
        bound = _sub_term(f.bound, var, term) if bounded else None
        rest = (bound,) if bounded else ()
        if f.var == var or var not in free_vars(f.body):
            return type(f)(f.var, *rest, f.body)
        body, bvar = f.body, f.var
        if isinstance(term, Var) and term.name == bvar:
            bvar = fresh_name(bvar, term_names(f.body) | {var, term.name})
            body = substitute(body, f.var, Var(bvar))
        return type(f)(bvar, *rest, substitute(body, var, term))
    raise TypeError(f"not a formula: {f!r}")


def desugar(f: Formula) -> Formula:
    """Rewrite ->, <-> and sub into ~, &, | and quantifiers."""
    if isinstance(f, Sub):
        w = fresh_name("w", {f.left.name, f.right.name})
        return Forall(w, Or(Not(Mem(Var(w), f.left)), Mem(Var(w), f.right)))
    if isinstance(f, (Eq, Mem)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, Implies):
        return Or(Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, Iff):
        a, b = desugar(f.left), desugar(f.right)
        return And(Or(Not(a), b), Or(Not(b), a))
    if isinstance(f, (And, Or)):
        return type(f)(desugar(f.left), desugar(f.right))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, desugar(f.body))
    if isinstance(f, BOUNDED):
        return type(f)(f.var, f.bound, desugar(f.body))
    raise TypeError(f"not a formula: {f!r}")


def is_desugared(f: Formula) -> bool:
    return not any(isinstance(n, (Sub, Implies, Iff)) for n in walk(f))


# --- random corpora ---------------------------------------------------------

def random_formula(rng: random.Random, max_depth: int, constants: list,
                   variables=("x", "y", "v"), bound=(), sentence=True) -> Formula:
    """A random formula of depth <= max_depth.

    With ``sentence`` set, atoms only use constants and variables in scope.
    """
    terms = [Const(c) for c in constants] + [Var(v) for v in bound]
    if not sentence:
        terms += [Var(v) for v in variables if v not in bound]
    choices = ["atom"]
    if max_depth > 1:
        choices += ["not", "bin", "bin", "quant", "quant"]
        if terms:
            choices.append("bounded")
    kind = rng.choice(choices)
    if kind == "atom" and not terms:
        kind = "quant" if max_depth > 1 else None
    if kind is None:
        raise ValueError("cannot build an atom: no constants and no variables in scope")
    if kind == "atom":
        node = rng.choice((Eq, Mem, Mem, Sub))
        return node(rng.choice(terms), rng.choice(terms))
    if kind == "not":
        return Not(random_formula(rng, max_depth - 1, constants, variables, bound, sentence))
    if kind == "bin":
        node = rng.choice((And, Or, Implies, Iff))
        return node(random_formula(rng, max_depth - 1, constants, variables, bound, sentence),
                    random_formula(rng, max_depth - 1, constants, variables, bound, sentence))
    var = rng.choice(variables)
    inner = tuple(b for b in bound if b != var) + (var,)
    if kind == "quant":
        body = random_formula(rng, max_depth - 1, constants, variables, inner, sentence)
        return rng.choice((Exists, Forall))(var, body)
    rng_term = rng.choice(terms)
    body = random_formula(rng, max_depth - 1, constants, variables, inner, sentence)
    return rng.choice((BoundedExists, BoundedForall))(var, rng_term, body)


def sentence_corpus(constants: Iterable[str], count: int, max_depth: int = 3,
                    seed: int = 0, variables=("x", "y", "v")) -> list:
    """``count`` distinct sentences of depth <= max_depth, reproducible from ``seed``."""
    constants = sorted(constants)
    variables = tuple(v for v in variables if v not in constants)
    rng = random.Random(seed)
    seen, out = set(), []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count + 1000:
            raise ValueError(f"could not generate {count} distinct sentences")
        try:
            f = random_formula(rng, max_depth, constants, variables)
        except ValueError:
            continue
        if f not in seen and not free_vars(f):
            seen.add(f)
            out.append(f)
    return out
