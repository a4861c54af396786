"""Evaluation of expression trees in the extended reals.

``eval_array`` is the workhorse: it evaluates a tree over numpy arrays of
bindings, computing the branches of a conditional only on the points that
take them.  Double precision overflows (a finite intermediate that does not
fit in a float) are tracked; when such a value later passes through an
operation that could bring it back into range (``ln``, ``sqrt``, a division,
``inf - inf`` ...) the affected points are recomputed with mpmath, whose
exponent range is unbounded.  Points where a comparison ties exactly in
double precision are recomputed the same way at higher precision.  Overflowed values whose final result is still
out of range are reported as +-inf.
"""

from __future__ import annotations

import math
import sys

import mpmath
import numpy as np

from .. import extreal as xr
from .nodes import Binary, Conditional, Constant, Expr, Unary, Variable, free_vars


class UnboundVariableError(KeyError):
    pass


_CONTRACTING_UNARY = {"ln", "sqrt"}


def _evaluate(e: Expr, env: dict, n: int):
    """Return (values, overflowed, tainted) arrays of length ``n``."""
    if isinstance(e, Constant):
        return np.full(n, e.value), np.zeros(n, bool), np.zeros(n, bool)
    if isinstance(e, Variable):
        try:
            v = env[e.name]
        except KeyError:
            raise UnboundVariableError(e.name) from None
        return v, np.zeros(n, bool), np.zeros(n, bool)
    if isinstance(e, Unary):
        a, ovf, taint = _evaluate(e.arg, env, n)
        out = xr.UNARY[e.op](a)
        if e.op in _CONTRACTING_UNARY:
            taint = taint | ovf
        new_ovf = np.isinf(out) & np.isfinite(a)
        return out, ovf | new_ovf, taint
    if isinstance(e, Binary):
        special = _minus_one(e, env, n)
        if special is not None:
            return special
        a, ovf_a, taint_a = _evaluate(e.left, env, n)
        b, ovf_b, taint_b = _evaluate(e.right, env, n)
        out = xr.BINARY[e.op](a, b)
        ovf = ovf_a | ovf_b
        taint = taint_a | taint_b
        if e.op == "/":
            taint = taint | ovf_b
        elif e.op == "^":
            taint = taint | (ovf_a & (np.abs(b) < 1)) | ovf_b
        if e.op in ("+", "-"):
            # total cancellation of nonzero operands loses every digit
            with np.errstate(all="ignore"):
                taint = taint | ((out == 0) & (a != 0) & np.isfinite(a) & np.isfinite(b))
        if ovf.any():
            # inf - inf and similar from two overflows
            taint = taint | (ovf & np.isnan(out))
        new_ovf = np.isinf(out) & np.isfinite(a) & np.isfinite(b)
        return out, ovf | new_ovf, taint
    if isinstance(e, Conditional):
        left, ovf_l, taint_l = _evaluate(e.left, env, n)
        right, ovf_r, taint_r = _evaluate(e.right, env, n)
        cond = xr.compare(e.comparison, left, right)
        out = np.full(n, np.nan)
        ovf = np.zeros(n, bool)
        taint = taint_l | taint_r | (ovf_l & ovf_r)
        # an exact tie may be a rounding artifact (exp(1e-18) == 1)
        taint = taint | ((left == right) & np.isfinite(left))
        for branch, mask in ((e.then, cond == 1.0), (e.otherwise, cond == 0.0)):
            idx = np.nonzero(mask)[0]
            if idx.size == 0:
                continue
            sub_env = {k: v[idx] for k, v in env.items()}
            val, o, tt = _evaluate(branch, sub_env, idx.size)
            out[idx] = val
            ovf[idx] = o
            taint[idx] |= tt
        return out, ovf, taint
    raise TypeError(f"not an expression node: {e!r}")


def _minus_one(e: Binary, env: dict, n: int):
    """exp(x) - 1 and cosh(x) - 1 without cancellation near x = 0."""
    if not (
        e.op == "-"
        and isinstance(e.right, Constant)
        and e.right.value == 1.0
        and isinstance(e.left, Unary)
        and e.left.op in ("exp", "cosh")
    ):
        return None
    x, ovf, taint = _evaluate(e.left.arg, env, n)
    with np.errstate(all="ignore"):
        if e.left.op == "exp":
            out = np.where(np.isnan(x), np.nan, np.expm1(x))
        else:
            out = np.where(np.isnan(x), np.nan, 2.0 * np.sinh(x / 2) ** 2)
    new_ovf = np.isinf(out) & np.isfinite(x)
    return out, ovf | new_ovf, taint


def eval_array(e: Expr, bindings: dict, saturate: bool = False) -> np.ndarray:
    """Evaluate ``e`` elementwise over broadcast numpy bindings.

    With ``saturate`` a result that is infinite only because a finite
    intermediate overflowed is returned as +-DBL_MAX instead of +-inf, so
    callers can tell it apart from a genuine infinity.
    """
    names = free_vars(e)
    missing = names - set(bindings)
    if missing:
        raise UnboundVariableError(sorted(missing)[0])
    arrays = [np.asarray(bindings[k], dtype=float) for k in sorted(names)]
    shape = np.broadcast_shapes(*(a.shape for a in arrays)) if arrays else ()
    env = {
        k: np.ascontiguousarray(np.broadcast_to(a, shape)).ravel()
        for k, a in zip(sorted(names), arrays)
    }
    n = int(np.prod(shape)) if shape else 1
    out, ovf, taint = _evaluate(e, env, n)
    out = np.array(out, dtype=float, copy=True)
    if taint.any():
        for i in np.nonzero(taint)[0]:
            out[i] = _eval_mp(e, {k: float(v[i]) for k, v in env.items()}, saturate)
    if saturate:
        hit = ovf & ~taint & np.isinf(out)
        out[hit] = np.copysign(_FLOAT_MAX, out[hit])
    return out.reshape(shape)


def eval_expr(e: Expr, bindings: dict) -> float:
    """Evaluate ``e`` at one point; Undefined is returned as NaN, not raised."""
    return float(eval_array(e, {k: float(v) for k, v in bindings.items()}))


# ------------------------------------------------------- arbitrary exponent

_HUGE_ARG = mpmath.mpf(2) ** 200
_FLOAT_MAX = sys.float_info.max


def _mp_nan(x) -> bool:
    return mpmath.isnan(x)


def _mp_mul(a, b):
    if (a == 0 and mpmath.isinf(b)) or (b == 0 and mpmath.isinf(a)):
        if _mp_nan(a) or _mp_nan(b):
            return mpmath.nan
        return mpmath.mpf(0)
    return a * b


def _mp_div(a, b):
    if b == 0 or _mp_nan(a) or _mp_nan(b):
        return mpmath.nan
    return a / b


def _mp_pow(a, b):
    if _mp_nan(a) or _mp_nan(b):
        return mpmath.nan
    if a == 0:
        if b > 0:
            return mpmath.mpf(0)
        if b == 0:
            return mpmath.mpf(1)
        return mpmath.inf
    if a < 0 and not (mpmath.isinf(b) or b == int(b)):
        return mpmath.nan
    if not mpmath.isinf(a) and not mpmath.isinf(b):
        # |a^b| = exp(b ln|a|); refuse to materialize absurd exponents
        scale = b * mpmath.log(abs(a))
        if scale > _HUGE_ARG:
            odd = a < 0 and int(b) % 2 == 1
            return -mpmath.inf if odd else mpmath.inf
        if scale < -_HUGE_ARG:
            return mpmath.mpf(0)
    r = mpmath.power(a, b)
    return mpmath.re(r) if isinstance(r, mpmath.mpc) else r


def _mp_exp(a):
    if _mp_nan(a):
        return mpmath.nan
    if a > _HUGE_ARG:
        return mpmath.inf
    if a < -_HUGE_ARG:
        return mpmath.mpf(0)
    return mpmath.exp(a)


def _mp_cosh(a):
    if _mp_nan(a):
        return mpmath.nan
    if abs(a) > _HUGE_ARG:
        return mpmath.inf
    return mpmath.cosh(a)


def _mp_ln(a):
    if _mp_nan(a) or a < 0:
        return mpmath.nan
    if a == 0:
        return -mpmath.inf
    return mpmath.log(a)


def _mp_sqrt(a):
    if _mp_nan(a) or a < 0:
        return mpmath.nan
    return mpmath.sqrt(a)


def _mp_add(a, b):
    return a + b


def _mp_sub(a, b):
    return a - b


def _mp_min(a, b):
    if _mp_nan(a) or _mp_nan(b):
        return mpmath.nan
    return min(a, b)


def _mp_max(a, b):
    if _mp_nan(a) or _mp_nan(b):
        return mpmath.nan
    return max(a, b)


_MP_UNARY = {
    "neg": lambda a: -a,
    "abs": abs,
    "exp": _mp_exp,
    "ln": _mp_ln,
    "sqrt": _mp_sqrt,
    "cosh": _mp_cosh,
}
_MP_BINARY = {
    "+": _mp_add,
    "-": _mp_sub,
    "*": _mp_mul,
    "/": _mp_div,
    "^": _mp_pow,
    "min": _mp_min,
    "max": _mp_max,
}


def _mp_eval(e: Expr, env: dict):
    if isinstance(e, Constant):
        return mpmath.mpf(e.value)
    if isinstance(e, Variable):
        return env[e.name]
    if isinstance(e, Unary):
        return _MP_UNARY[e.op](_mp_eval(e.arg, env))
    if isinstance(e, Binary):
        return _MP_BINARY[e.op](_mp_eval(e.left, env), _mp_eval(e.right, env))
    left = _mp_eval(e.left, env)
    right = _mp_eval(e.right, env)
    if _mp_nan(left) or _mp_nan(right):
        return mpmath.nan
    holds = {
        "<": left < right,
        "<=": left <= right,
        ">": left > right,
        ">=": left >= right,
        "==": left == right,
    }[e.comparison]
    return _mp_eval(e.then if holds else e.otherwise, env)


def _eval_mp(e: Expr, bindings: dict, saturate: bool = False) -> float:
    with mpmath.workprec(256):
        env = {k: mpmath.mpf(v) for k, v in bindings.items()}
        r = _mp_eval(e, env)
        if _mp_nan(r):
            return math.nan
        if mpmath.isinf(r):
            return math.inf if r > 0 else -math.inf
        if abs(r) > _FLOAT_MAX:
            big = _FLOAT_MAX if saturate else math.inf
            return big if r > 0 else -big
        return float(r)


# ------------------------------------------------------------ branch choices

def branch_signature(e: Expr, bindings: dict) -> np.ndarray:
    """Integer code of the conditional branches taken at each point.

    Two points share a code iff every ``if`` reached on the way took the same
    branch, so a change of code between neighbouring points brackets a seam
    of a piecewise definition.
    """
    names = free_vars(e)
    arrays = [np.asarray(bindings[k], dtype=float) for k in sorted(names)]
    shape = np.broadcast_shapes(*(a.shape for a in arrays)) if arrays else ()
    env = {
        k: np.ascontiguousarray(np.broadcast_to(a, shape)).ravel()
        for k, a in zip(sorted(names), arrays)
    }
    n = int(np.prod(shape)) if shape else 1
    sig = np.zeros(n, dtype=np.int64)
    counter = [0]

    def walk(node, idx, sub_env):
        if isinstance(node, (Constant, Variable)):
            return
        if isinstance(node, Unary):
            walk(node.arg, idx, sub_env)
            return
        if isinstance(node, Binary):
            walk(node.left, idx, sub_env)
            walk(node.right, idx, sub_env)
            return
        k = counter[0] % 31
        counter[0] += 1
        walk(node.left, idx, sub_env)
        walk(node.right, idx, sub_env)
        if idx.size == 0:
            return
        left, _, _ = _evaluate(node.left, sub_env, idx.size)
        right, _, _ = _evaluate(node.right, sub_env, idx.size)
        cond = xr.compare(node.comparison, left, right)
        code = np.where(cond == 1.0, 1, np.where(cond == 0.0, 2, 3)).astype(np.int64)
        sig[idx] += code << (2 * k)
        for branch, mask in ((node.then, cond == 1.0), (node.otherwise, cond == 0.0)):
            sel = np.nonzero(mask)[0]
            walk(branch, idx[sel], {kk: v[sel] for kk, v in sub_env.items()})

    walk(e, np.arange(n), env)
    return sig.reshape(shape)
