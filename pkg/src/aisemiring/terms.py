"""Terms of the free ai-semiring: finite nonempty sets of nonempty words.

Every ai-semiring term can be rewritten, using distributivity and the
semilattice laws for ``+``, as a sum of words.  A :class:`Term` stores that
normal form directly, so two terms are equal in every ai-semiring whenever
their canonical forms coincide.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence, Union

from .errors import ParseError

Word = tuple  # tuple[str, ...], nonempty

__all__ = [
    "Var", "Sum", "Prod", "Term", "Identity", "SimpleIdentity", "WordStats",
    "TermStats", "parse_term", "parse_word", "parse_identity", "normalize",
    "term", "word_stats", "term_stats", "reduce_identity", "word_key",
    "format_word",
]


# -- variables and words ------------------------------------------------------

_VAR_RE = re.compile(r"[a-z][0-9]*")


def var_key(name: str) -> tuple:
    # x2 < x10; bare letters sort before their indexed variants
    return (name[0], int(name[1:]) if len(name) > 1 else -1)


def word_key(w: Word) -> tuple:
    """Length-then-lexicographic sort key for words."""
    return (len(w), tuple(var_key(v) for v in w))


def format_word(w: Sequence[str]) -> str:
    return "".join(w)


def parse_word(text: str) -> Word:
    """Parse a plain word such as ``x1x2x3``; the empty string gives ``()``."""
    text = text.replace(" ", "").replace("*", "")
    if not text:
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _VAR_RE.match(text, pos)
        if m is None:
            raise ParseError(f"expected a variable in word {text!r}", pos)
        letters.append(m.group())
        pos = m.end()
    return tuple(letters)


# -- AST -------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Sum:
    items: tuple


@dataclass(frozen=True)
class Prod:
    items: tuple


Ast = Union[Var, Sum, Prod]


class _Parser:
    # sum := product ('+' product)* ; product := factor+ ; factor := var ['^' int] | '(' sum ')' ['^' int]

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ParseError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Ast:
        node = self.sum()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return node

    def sum(self) -> Ast:
        items = [self.product()]
        while self.peek() == "+":
            self.pos += 1
            items.append(self.product())
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def product(self) -> Ast:
        items = [self.factor()]
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                items.append(self.factor())
            elif c == "(" or ("a" <= c <= "z"):
                items.append(self.factor())
            else:
                break
        return items[0] if len(items) == 1 else Prod(tuple(items))

    def factor(self) -> Ast:
        c = self.peek()
        if c == "(":
            self.pos += 1
            node = self.sum()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c and "a" <= c <= "z":
            m = _VAR_RE.match(self.text, self.pos)
            self.pos = m.end()
            node = Var(m.group())
        else:
            self.error("expected a variable or '('" if c else "unexpected end of input")
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            m = re.compile(r"[0-9]+").match(self.text, self.pos)
            if m is None:
                self.error("expected an exponent")
            k = int(m.group())
            if k < 1:
                self.error("exponent must be at least 1")
            self.pos = m.end()
            if k > 1:
                node = Prod((node,) * k)
        return node


def parse_term(text: str) -> Ast:
    """Parse a term such as ``"x(y+z)^2 + x1x2"`` into an AST."""
    return _Parser(text).parse()


# -- normal form -----------------------------------------------------------------

class Term:
    """Canonical sum of words: sorted (length, then lexicographic), no repeats."""

    __slots__ = ("words", "_hash")

    def __init__(self, words: Iterable[Sequence[str]]):
        ws = {tuple(w) for w in words}
        if not ws:
            raise ValueError("a term needs at least one word")
        if () in ws:
            raise ValueError("words must be nonempty")
        self.words = tuple(sorted(ws, key=word_key))
        self._hash = hash(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words

    def __eq__(self, other) -> bool:
        return isinstance(other, Term) and self.words == other.words

    def __hash__(self) -> int:
        return self._hash

    def __or__(self, other: "Term") -> "Term":
        return Term(self.words + other.words)

    def __mul__(self, other: "Term") -> "Term":
        return Term(a + b for a in self.words for b in other.words)

    def issubset(self, other: "Term") -> bool:
        return set(self.words) <= set(other.words)

    def variables(self) -> list[str]:
        """Variables in order of first occurrence in the printed term."""
        seen = {}
        for w in self.words:
            for v in w:
                seen.setdefault(v, None)
        return list(seen)

    def reversed(self) -> "Term":
        return Term(w[::-1] for w in self.words)

    def __str__(self) -> str:
        return "+".join(format_word(w) for w in self.words)

    def __repr__(self) -> str:
        return f"Term({str(self)!r})"


def normalize(ast: Ast) -> Term:
    if isinstance(ast, Var):
        return Term([(ast.name,)])
    if isinstance(ast, Sum):
        return Term(w for item in ast.items for w in normalize(item))
    if isinstance(ast, Prod):
        parts = [normalize(item).words for item in ast.items]
        return Term(sum(combo, ()) for combo in _cartesian(*parts))
    if isinstance(ast, Term):
        return ast
    raise TypeError(f"not a term AST: {ast!r}")


def term(text_or_words) -> Term:
    """Convenience constructor from a string, a Term, or an iterable of words."""
    if isinstance(text_or_words, Term):
        return text_or_words
    if isinstance(text_or_words, str):
        return normalize(parse_term(text_or_words))
    return Term(parse_word(w) if isinstance(w, str) else w for w in text_or_words)


# -- identities ------------------------------------------------------------------

_EQ_RE = re.compile("≈|=")


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    @property
    def trivial(self) -> bool:
        return self.lhs == self.rhs

    def variables(self) -> list[str]:
        seen = dict.fromkeys(self.lhs.variables())
        seen.update(dict.fromkeys(self.rhs.variables()))
        return list(seen)

    def reversed(self) -> "Identity":
        return Identity(self.lhs.reversed(), self.rhs.reversed())

    def swapped(self) -> "Identity":
        return Identity(self.rhs, self.lhs)

    def __str__(self) -> str:
        return f"{self.lhs} ≈ {self.rhs}"


def parse_identity(text: str) -> Identity:
    parts = _EQ_RE.split(text)
    if len(parts) != 2:
        raise ParseError("an identity needs exactly one '≈' or '='", 0)
    lhs_text, rhs_text = parts
    lhs = normalize(parse_term(lhs_text))
    try:
        rhs = normalize(parse_term(rhs_text))
    except ParseError as exc:
        raise ParseError(exc.msg, exc.pos + len(lhs_text) + 1) from None
    return Identity(lhs, rhs)


@dataclass(frozen=True)
class SimpleIdentity:
    """The identity ``u ≈ u + q`` for a single word ``q``."""

    u: Term
    q: Word

    @property
    def trivial(self) -> bool:
        return self.q in self.u

    def as_identity(self) -> Identity:
        return Identity(self.u, self.u | Term([self.q]))

    def reversed(self) -> "SimpleIdentity":
        return SimpleIdentity(self.u.reversed(), self.q[::-1])

    def __str__(self) -> str:
        return str(self.as_identity())


def reduce_identity(identity: Identity) -> list[SimpleIdentity]:
    """Split ``u ≈ v`` into the simple identities ``u ≈ u+v_j`` and ``v ≈ v+u_i``.

    Trivial members are dropped, so the list is empty exactly when the
    identity itself is trivial.
    """
    u, v = identity.lhs, identity.rhs
    out = [SimpleIdentity(u, w) for w in v if w not in u]
    out += [SimpleIdentity(v, w) for w in u if w not in v]
    return out


# -- statistics ------------------------------------------------------------------

@dataclass(frozen=True)
class WordStats:
    head: str
    tail: str
    content: frozenset
    length: int
    prefix: Word  # word with its tail deleted
    suffix: Word  # word with its head deleted


def word_stats(w: Sequence[str]) -> WordStats:
    w = tuple(w)
    if not w:
        raise ValueError("empty word")
    return WordStats(w[0], w[-1], frozenset(w), len(w), w[:-1], w[1:])


@dataclass(frozen=True)
class TermStats:
    heads: frozenset
    tails: frozenset
    content: frozenset
    long_words: tuple  # summands of length >= 2

    @property
    def prefix_content(self) -> frozenset:
        return frozenset(v for w in self.long_words for v in w[:-1])

    @property
    def suffix_content(self) -> frozenset:
        return frozenset(v for w in self.long_words for v in w[1:])

    @property
    def long_content(self) -> frozenset:
        return frozenset(v for w in self.long_words for v in w)


def term_stats(u: Term) -> TermStats:
    return TermStats(
        heads=frozenset(w[0] for w in u),
        tails=frozenset(w[-1] for w in u),
        content=frozenset(v for w in u for v in w),
        long_words=tuple(w for w in u if len(w) >= 2),
    )
