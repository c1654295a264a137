"""Expression DSL: tokenizer, recursive-descent parser and evaluator.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '.') factor)*
    factor := atom ('^' uint)?
    atom   := name | uint | '(' expr ')'

``.`` is a product just like ``*``; it exists so that the canonical text
written by :func:`ncabel.freealg.serialize` (``2*c*X.x1``) parses back.
Juxtaposition is not multiplication and products are never reordered.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError
from .freealg import Polynomial, RingSpec

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*.^()]))")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Sum:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Difference:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Product:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, Sum, Difference, Product, Power]


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split ``text`` into ``(kind, value, position)`` triples ending with an ``end`` token."""
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingSpec | None):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected {op!r}, found {found}", tok)

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}")
        return node

    def expr(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            node: Expr = Neg(self.term())
        else:
            node = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                right = self.term()
                node = Sum(node, right) if tok[1] == "+" else Difference(node, right)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*.":
                self.take()
                node = Product(node, self.factor())
            elif tok[0] in ("name", "num") or (tok[0] == "op" and tok[1] == "("):
                raise self.error("juxtaposition is not multiplication; use '*'")
            else:
                return node

    def factor(self) -> Expr:
        node = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.peek()
            if exp[0] == "op" and exp[1] == "-":
                raise self.error("negative exponent", exp)
            if exp[0] != "num":
                raise self.error("exponent must be a nonnegative integer literal", exp)
            self.take()
            node = Power(node, int(exp[1]))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                raise self.error("chained '^' is ambiguous; use parentheses", nxt)
        return node

    def atom(self) -> Expr:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Num(int(value))
        if kind == "name":
            if self.ring is not None and not self.ring.has(value):
                raise self.error(f"unknown name {value!r}", tok)
            return Var(value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise self.error(f"unexpected {found}", tok)


def parse_expr(text: str, ring: RingSpec | None = None) -> Expr:
    """Parse ``text``; with ``ring`` given, every name must be declared in it."""
    return _Parser(text, ring).parse()


def evaluate(node: Expr, ring: RingSpec) -> Polynomial:
    if isinstance(node, Num):
        return ring.const(node.value)
    if isinstance(node, Var):
        return ring.var(node.name)
    if isinstance(node, Neg):
        return -evaluate(node.operand, ring)
    if isinstance(node, Sum):
        return evaluate(node.left, ring) + evaluate(node.right, ring)
    if isinstance(node, Difference):
        return evaluate(node.left, ring) - evaluate(node.right, ring)
    if isinstance(node, Product):
        return evaluate(node.left, ring) * evaluate(node.right, ring)
    if isinstance(node, Power):
        return evaluate(node.base, ring) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    return evaluate(parse_expr(text, ring), ring)
