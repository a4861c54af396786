"""Immutable expression trees."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

VARIABLES = frozenset({"t", "u", "r", "s", "n"})
UNARY_OPS = ("neg", "abs", "exp", "ln", "sqrt", "cosh")
BINARY_OPS = ("+", "-", "*", "/", "^", "min", "max")
COMPARISONS = ("<", "<=", ">", ">=", "==")


@dataclass(frozen=True)
class Constant:
    value: float

    def __eq__(self, other):
        if not isinstance(other, Constant):
            return NotImplemented
        a, b = self.value, other.value
        return a == b or (math.isnan(a) and math.isnan(b))

    def __hash__(self):
        return hash(("const", 0.0 if self.value == 0 else self.value))


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Conditional:
    comparison: str
    left: "Expr"
    right: "Expr"
    then: "Expr"
    otherwise: "Expr"


Expr = Union[Constant, Variable, Unary, Binary, Conditional]


_FREE_VARS: dict = {}


def free_vars(e: Expr) -> frozenset:
    """Names of every variable occurring in ``e``."""
    # memoised by identity; the stored node keeps its id from being reused
    hit = _FREE_VARS.get(id(e))
    if hit is not None and hit[0] is e:
        return hit[1]
    names = _free_vars(e)
    if len(_FREE_VARS) > 4096:
        _FREE_VARS.clear()
    _FREE_VARS[id(e)] = (e, names)
    return names


def _free_vars(e: Expr) -> frozenset:
    found = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Variable):
            found.add(node.name)
        elif isinstance(node, Unary):
            stack.append(node.arg)
        elif isinstance(node, Binary):
            stack.extend((node.left, node.right))
        elif isinstance(node, Conditional):
            stack.extend((node.left, node.right, node.then, node.otherwise))
    return frozenset(found)


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace variables by expressions, simultaneously."""
    if isinstance(e, Variable):
        return mapping.get(e.name, e)
    if isinstance(e, Constant):
        return e
    if isinstance(e, Unary):
        return Unary(e.op, substitute(e.arg, mapping))
    if isinstance(e, Binary):
        return Binary(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    return Conditional(
        e.comparison,
        substitute(e.left, mapping),
        substitute(e.right, mapping),
        substitute(e.then, mapping),
        substitute(e.otherwise, mapping),
    )


def size(e: Expr) -> int:
    if isinstance(e, (Constant, Variable)):
        return 1
    if isinstance(e, Unary):
        return 1 + size(e.arg)
    if isinstance(e, Binary):
        return 1 + size(e.left) + size(e.right)
    return 1 + size(e.left) + size(e.right) + size(e.then) + size(e.otherwise)


# Small constructors used when building expressions programmatically.

def const(x: float) -> Constant:
    return Constant(float(x))


def var(name: str) -> Variable:
    return Variable(name)


def add(a: Expr, b: Expr) -> Binary:
    return Binary("+", a, b)


def mul(a: Expr, b: Expr) -> Binary:
    return Binary("*", a, b)
