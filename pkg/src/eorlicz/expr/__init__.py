"""Closed-form expressions in t, u (and r, s, n) over the extended reals."""

from .evaluate import UnboundVariableError, branch_signature, eval_array, eval_expr
from .nodes import (
    VARIABLES,
    Binary,
    Conditional,
    Constant,
    Expr,
    Unary,
    Variable,
    free_vars,
    substitute,
)
from .parser import ExprSyntaxError, parse_expr, to_text
from .maps import IDENTITY_MAP, ComposedPhi, PhiSpec, PlaneMap

__all__ = [
    "VARIABLES",
    "Binary",
    "branch_signature",
    "Conditional",
    "Constant",
    "Expr",
    "ExprSyntaxError",
    "ComposedPhi",
    "IDENTITY_MAP",
    "PhiSpec",
    "PlaneMap",
    "UnboundVariableError",
    "Unary",
    "Variable",
    "eval_array",
    "eval_expr",
    "free_vars",
    "parse_expr",
    "substitute",
    "to_text",
]
