"""The two objects the theory is about: a plane map E and a function Phi."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .evaluate import branch_signature, eval_array
from .nodes import Expr, Variable, free_vars, substitute
from .parser import parse_expr, to_text

PLANE_VARS = ("t", "u")


def _check_vars(e: Expr, what: str):
    extra = free_vars(e) - set(PLANE_VARS)
    if extra:
        raise ValueError(f"{what} may only use t and u, found {sorted(extra)}")


@dataclass(frozen=True)
class PhiSpec:
    """Phi(t, u) as an expression over t and u."""

    body: Expr

    def __post_init__(self):
        _check_vars(self.body, "Phi")

    @classmethod
    def parse(cls, text: str) -> "PhiSpec":
        return cls(parse_expr(text, PLANE_VARS))

    def __call__(self, t, u):
        return eval_array(self.body, {"t": t, "u": u})

    def __str__(self):
        return to_text(self.body)


@dataclass(frozen=True)
class PlaneMap:
    """E(t, u) = (e_t(t, u), e_u(t, u)); the second coordinate must stay >= 0."""

    e_t: Expr
    e_u: Expr

    def __post_init__(self):
        _check_vars(self.e_t, "E_t")
        _check_vars(self.e_u, "E_u")

    @classmethod
    def parse(cls, map_t: str, map_u: str) -> "PlaneMap":
        return cls(parse_expr(map_t, PLANE_VARS), parse_expr(map_u, PLANE_VARS))

    def __call__(self, t, u):
        b = {"t": t, "u": u}
        return eval_array(self.e_t, b), eval_array(self.e_u, b)

    def then(self, inner: "PlaneMap") -> "PlaneMap":
        """The composition ``self o inner``: (t, u) -> self(inner(t, u))."""
        m = {"t": inner.e_t, "u": inner.e_u}
        return PlaneMap(substitute(self.e_t, m), substitute(self.e_u, m))

    def range_violations(self, t, u) -> list:
        """Sampled (t, u) with u >= 0 where the second coordinate is negative."""
        t = np.asarray(t, dtype=float)
        u = np.asarray(u, dtype=float)
        tt, uu = np.meshgrid(t, u, indexing="ij")
        vals = eval_array(self.e_u, {"t": tt, "u": uu})
        bad = (vals < 0) & (uu >= 0)
        return [(float(a), float(b)) for a, b in zip(tt[bad], uu[bad])]

    def __str__(self):
        return f"({to_text(self.e_t)}, {to_text(self.e_u)})"


IDENTITY_MAP = PlaneMap(Variable("t"), Variable("u"))


@dataclass(frozen=True)
class ComposedPhi:
    """Phi o E, evaluated as one substituted tree so that overflow tracking
    (see ``eval_array``) sees through the map."""

    phi: PhiSpec
    map: PlaneMap = IDENTITY_MAP

    @cached_property
    def expr(self) -> Expr:
        return substitute(self.phi.body, {"t": self.map.e_t, "u": self.map.e_u})

    def __call__(self, t, u, saturate: bool = False):
        return eval_array(self.expr, {"t": t, "u": u}, saturate)

    def branches(self, t, u):
        return branch_signature(self.expr, {"t": t, "u": u})

    def __str__(self):
        return to_text(self.expr)
