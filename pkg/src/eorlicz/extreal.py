"""Extended-real arithmetic on floats and numpy arrays.

Values live in R ∪ {+inf, -inf} with NaN standing for *Undefined*.  The
rules differ from IEEE-754 in two places:

* ``0 * (+-inf) = 0`` (measure-theory convention), where IEEE gives NaN;
* ``x / 0`` is Undefined for every ``x``, where IEEE gives +-inf.

Everything else (``inf - inf`` Undefined, ``ln 0 = -inf``, ``exp(-inf) = 0``)
already agrees with IEEE and is inherited from numpy.
"""

from __future__ import annotations

import math

import numpy as np

UNDEFINED = math.nan
INF = math.inf

ExtReal = float


def is_undefined(x) -> bool:
    return isinstance(x, float) and math.isnan(x)


def to_json(x: float):
    """Encode an extended real for strict JSON (no bare Infinity/NaN)."""
    x = float(x)
    if math.isnan(x):
        return "undefined"
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def from_json(x) -> float:
    if isinstance(x, str):
        key = x.strip().lower()
        if key in ("+inf", "inf", "infinity"):
            return INF
        if key in ("-inf", "-infinity"):
            return -INF
        if key == "undefined":
            return UNDEFINED
        raise ValueError(f"not an extended real: {x!r}")
    return float(x)


def _quiet():
    return np.errstate(all="ignore")


def add(a, b):
    with _quiet():
        return np.add(a, b)


def sub(a, b):
    with _quiet():
        return np.subtract(a, b)


def mul(a, b):
    with _quiet():
        out = np.multiply(a, b)
    zero_inf = ((a == 0) & np.isinf(b)) | (np.isinf(a) & (b == 0))
    if np.any(zero_inf):
        out = np.where(zero_inf, 0.0, out)
    return out


def div(a, b):
    with _quiet():
        out = np.divide(a, b)
    by_zero = b == 0
    if np.any(by_zero):
        out = np.where(by_zero, np.nan, out)
    return out


def power(a, b):
    # numpy already gives 0**neg = inf, inf**neg = 0, x**0 = 1 (even nan**0),
    # and NaN for a negative base with a non-integer exponent.
    with _quiet():
        out = np.power(a, b)
    # nan**0 must stay Undefined.
    undefined_in = np.isnan(a) | np.isnan(b)
    if np.any(undefined_in):
        out = np.where(undefined_in, np.nan, out)
    return out


def neg(a):
    return np.negative(a)


def absolute(a):
    return np.abs(a)


def exp(a):
    with _quiet():
        return np.exp(a)


def ln(a):
    with _quiet():
        return np.log(a)


def sqrt(a):
    with _quiet():
        return np.sqrt(a)


def cosh(a):
    with _quiet():
        return np.cosh(a)


def minimum(a, b):
    return np.minimum(a, b)


def maximum(a, b):
    return np.maximum(a, b)


UNARY = {
    "neg": neg,
    "abs": absolute,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "cosh": cosh,
}

BINARY = {
    "+": add,
    "-": sub,
    "*": mul,
    "/": div,
    "^": power,
    "min": minimum,
    "max": maximum,
}


def compare(op: str, a, b):
    """Elementwise comparison returning a float array: 1.0, 0.0 or NaN."""
    with _quiet():
        if op == "<":
            r = np.less(a, b)
        elif op == "<=":
            r = np.less_equal(a, b)
        elif op == ">":
            r = np.greater(a, b)
        elif op == ">=":
            r = np.greater_equal(a, b)
        elif op == "==":
            r = np.equal(a, b)
        else:
            raise ValueError(f"unknown comparison {op!r}")
    out = r.astype(float)
    undefined = np.isnan(a) | np.isnan(b)
    if np.any(undefined):
        out = np.where(undefined, np.nan, out)
    return out


def ext_sum(values, weights) -> float:
    """Weighted sum with extended-real rules, fixed left-to-right order.

    Zero weights annihilate infinite values.  Undefined at a positive weight
    yields Undefined; +inf together with -inf is Undefined.
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    live = weights > 0
    v = values[live]
    if np.any(np.isnan(v)):
        return UNDEFINED
    pos = bool(np.any(v == np.inf))
    negv = bool(np.any(v == -np.inf))
    if pos and negv:
        return UNDEFINED
    if pos:
        return INF
    if negv:
        return -INF
    return float(np.dot(weights[live], v))
