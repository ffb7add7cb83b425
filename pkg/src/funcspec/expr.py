"""Polynomial expressions: tokenizer, recursive-descent parser, printer.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' uint)*        # right-binding
    atom   := uint | ident | '(' expr ')'

There is no unary minus and no implicit multiplication (``2x`` is rejected).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from .errors import ExpressionSyntaxError, UnknownIdentifier


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - *
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            where = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExpressionSyntaxError(f"expected {kind!r}, found {where}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "ident", "("):
                raise ExpressionSyntaxError("implicit multiplication is not allowed", tok[2])
            raise ExpressionSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.atom()
        exps = []
        while self.peek()[0] == "^":
            self.take("^")
            exps.append(self.take("int")[1])
        if not exps:
            return base
        e = exps[-1]
        for x in reversed(exps[:-1]):
            e = x**e
        return Pow(base, e)

    def atom(self) -> Node:
        kind, value, pos = self.peek()
        if kind == "int":
            self.i += 1
            return Num(value)
        if kind == "ident":
            self.i += 1
            return Var(value)
        if kind == "(":
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        where = "end of input" if kind == "end" else repr(value)
        raise ExpressionSyntaxError(f"expected a number, name or '(', found {where}", pos)


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Pow):
        return 3
    return 4


def to_text(node: Node) -> str:
    """Canonical text; ``parse_expression(to_text(n)) == n``."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) < 4:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = _PREC[node.op]
    left = to_text(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = to_text(node.right)
    if _prec(node.right) <= p:
        right = f"({right})"
    sep = "*" if node.op == "*" else f" {node.op} "
    return f"{left}{sep}{right}"


def variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Pow):
        return variables(node.base)
    return variables(node.left) | variables(node.right)


def evaluate(node: Node, env: Mapping[str, object], const: Callable[[int], object]):
    """Evaluate with ``env`` for names and ``const`` for integer literals."""
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Var):
        if node.name not in env:
            raise UnknownIdentifier(f"unknown identifier {node.name!r}")
        return env[node.name]
    if isinstance(node, Pow):
        base = evaluate(node.base, env, const)
        result, e = const(1), node.exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result
    a = evaluate(node.left, env, const)
    b = evaluate(node.right, env, const)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b
