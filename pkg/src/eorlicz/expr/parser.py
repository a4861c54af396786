"""Recursive-descent parser and printer for the closed-form expression language.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' factor)?
    atom   := number | 'inf' | var | func '(' args ')' | '(' expr ')' | '-' atom
    func   := abs | exp | ln | sqrt | cosh | min | max | if
    if(cmp, then, else) with cmp := expr ('<' | '<=' | '>' | '>=' | '==') expr

A minus sign directly in front of a numeric literal (or ``inf``) folds into a
negative constant, which keeps ``parse(to_text(e)) == e`` for every tree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .nodes import (
    VARIABLES,
    Binary,
    Conditional,
    Constant,
    Expr,
    Unary,
    Variable,
)

UNARY_FUNCS = ("abs", "exp", "ln", "sqrt", "cosh")
BINARY_FUNCS = ("min", "max")


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "id", "op", "end"
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|==|[-+*/^(),<>])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allowed_vars):
        self.text = text
        self.allowed = frozenset(allowed_vars)
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        return ExprSyntaxError(message, tok.pos, self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            left = Binary(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return Binary("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Constant(float(tok.text))
        if tok.kind == "op" and tok.text == "-":
            self.i += 1
            nxt = self.tok
            if nxt.kind == "num":
                self.i += 1
                return Constant(-float(nxt.text))
            if nxt.kind == "id" and nxt.text == "inf":
                self.i += 1
                return Constant(-math.inf)
            return Unary("neg", self.atom())
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "id":
            return self.identifier()
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def identifier(self) -> Expr:
        tok = self.tok
        name = tok.text
        self.i += 1
        if name == "inf":
            return Constant(math.inf)
        if name in UNARY_FUNCS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Unary(name, arg)
        if name in BINARY_FUNCS:
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return Binary(name, a, b)
        if name == "if":
            self.expect("(")
            left = self.expr()
            cmp_tok = self.tok
            if not (cmp_tok.kind == "op" and cmp_tok.text in ("<", "<=", ">", ">=", "==")):
                raise self.error("expected comparison operator")
            self.i += 1
            right = self.expr()
            self.expect(",")
            then = self.expr()
            self.expect(",")
            otherwise = self.expr()
            self.expect(")")
            return Conditional(cmp_tok.text, left, right, then, otherwise)
        if name in VARIABLES:
            if name not in self.allowed:
                raise self.error(f"variable {name!r} not allowed here", tok)
            return Variable(name)
        raise self.error(f"unknown identifier {name!r}", tok)


def parse_expr(text: str, allowed_vars=("t", "u")) -> Expr:
    """Parse ``text`` into an expression tree over ``allowed_vars``.

    Raises :class:`ExprSyntaxError` with the offending character offset.
    """
    return _Parser(text, allowed_vars).parse()


# ---------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
_ATOM = 4


def _prec(e: Expr) -> int:
    if isinstance(e, Binary) and e.op in _PREC:
        return _PREC[e.op]
    return _ATOM


def _number(v: float) -> str:
    if math.isnan(v):
        raise ValueError("an Undefined constant has no textual form")
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v)) if v != 0 or math.copysign(1, v) > 0 else "-0"
    return repr(v)


def to_text(e: Expr) -> str:
    """Render ``e`` so that ``parse_expr(to_text(e)) == e``."""
    if isinstance(e, Constant):
        return _number(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = to_text(e.arg)
            # "-2" would read back as a negative literal.
            if _prec(e.arg) < _ATOM or isinstance(e.arg, Constant):
                inner = f"({inner})"
            return "-" + inner
        return f"{e.op}({to_text(e.arg)})"
    if isinstance(e, Conditional):
        return (
            f"if({to_text(e.left)} {e.comparison} {to_text(e.right)}, "
            f"{to_text(e.then)}, {to_text(e.otherwise)})"
        )
    if e.op in ("min", "max"):
        return f"{e.op}({to_text(e.left)}, {to_text(e.right)})"
    p = _PREC[e.op]
    left, right = to_text(e.left), to_text(e.right)
    if e.op == "^":
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < p:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"

