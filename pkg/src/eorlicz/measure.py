"""Finite surrogates of a measure space and functions sampled on them.

Two kinds of space are supported: a uniform grid on an interval [a, b]
carrying Lebesgue measure, and a finite set of weighted points.  Both reduce
to the same thing, nodes with a cell measure each.  For a grid the cell
measures are the composite trapezoid weights (half cells at the endpoints),
so quadrature, the distribution function and the decreasing rearrangement
all use one attribution of measure to nodes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import extreal as xr
from .expr import Expr, eval_array, parse_expr


class UndefinedIntegrandError(ValueError):
    pass


@dataclass(frozen=True)
class IntervalSpace:
    a: float
    b: float
    n_nodes: int = 257

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")
        if self.n_nodes < 3:
            raise ValueError("an interval grid needs at least 3 nodes")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n_nodes - 1)

    @property
    def nodes(self) -> np.ndarray:
        i = np.arange(self.n_nodes)
        return self.a + i * (self.b - self.a) / (self.n_nodes - 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n_nodes, self.h)
        w[0] = w[-1] = self.h / 2
        return w

    @property
    def total_measure(self) -> float:
        return self.b - self.a

    @property
    def max_cell(self) -> float:
        return self.h


@dataclass(frozen=True)
class DiscreteSpace:
    points: tuple
    weights_: tuple

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights_, dtype=float)
        if p.ndim != 1 or p.size == 0 or p.shape != w.shape:
            raise ValueError("points and weights must be equal-length nonempty lists")
        if np.any(np.diff(p) <= 0):
            raise ValueError("points must be strictly increasing")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")

    @classmethod
    def of(cls, points, weights) -> "DiscreteSpace":
        return cls(tuple(float(x) for x in points), tuple(float(x) for x in weights))

    @property
    def nodes(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.weights_, dtype=float)

    @property
    def total_measure(self) -> float:
        return float(np.sum(self.weights))

    @property
    def max_cell(self) -> float:
        return float(np.max(self.weights))


Space = Union[IntervalSpace, DiscreteSpace]


@dataclass(eq=False)
class SampledFn:
    """|f| sampled at the nodes of ``space``.

    ``signed`` optionally keeps the signed samples; derivative-based norms
    use them when present.
    """

    space: Space
    values: np.ndarray
    signed: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        n = self.space.nodes.size
        if self.values.shape != (n,):
            raise ValueError(f"expected {n} values, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("sampled values must be finite and nonnegative")
        if self.signed is not None:
            self.signed = np.asarray(self.signed, dtype=float)

    @classmethod
    def from_values(cls, space: Space, values) -> "SampledFn":
        v = np.asarray(values, dtype=float)
        return cls(space, np.abs(v), v)

    def scaled(self, alpha: float) -> "SampledFn":
        signed = None if self.signed is None else alpha * self.signed
        return SampledFn(self.space, abs(alpha) * self.values, signed)

    @property
    def derivative_source(self) -> np.ndarray:
        return self.values if self.signed is None else self.signed


def sample(f: Expr | str, space: Space) -> SampledFn:
    """Sample an expression in t on the nodes of ``space``."""
    if isinstance(f, str):
        f = parse_expr(f, ("t",))
    vals = np.broadcast_to(eval_array(f, {"t": space.nodes}), space.nodes.shape)
    if not np.all(np.isfinite(vals)):
        bad = int(np.nonzero(~np.isfinite(vals))[0][0])
        raise ValueError(f"f is not finite at t = {space.nodes[bad]!r}")
    return SampledFn.from_values(space, vals)


def integrate(space: Space, integrand) -> float:
    """Quadrature of node values: trapezoid on a grid, weighted sum otherwise.

    Any +inf at a node of positive weight makes the result +inf; an
    Undefined value there raises ``UndefinedIntegrandError``.
    """
    v = np.asarray(integrand, dtype=float)
    w = space.weights
    if v.shape != w.shape:
        raise ValueError(f"expected {w.size} integrand values, got {v.size}")
    if np.any(np.isnan(v) & (w > 0)):
        i = int(np.nonzero(np.isnan(v) & (w > 0))[0][0])
        raise UndefinedIntegrandError(f"integrand Undefined at t = {space.nodes[i]!r}")
    r = xr.ext_sum(v, w)
    if math.isnan(r):
        raise UndefinedIntegrandError("integrand takes both +inf and -inf")
    return r


def distribution(f: SampledFn, u: float) -> float:
    """m(f, u): total cell measure of the nodes where |f| > u."""
    w = f.space.weights
    return float(np.sum(w[f.values > u]))


def distribution_left(f: SampledFn, u: float) -> float:
    """Measure of {|f| >= u}, the left limit of ``distribution`` at u."""
    w = f.space.weights
    return float(np.sum(w[f.values >= u]))


@dataclass(frozen=True, eq=False)
class RearrangedFn:
    """Nonincreasing step function f* on [0, mu(Omega)].

    ``levels[j]`` is the value on (breakpoints[j-1], breakpoints[j]], with an
    implicit breakpoint 0 in front; f* vanishes beyond the last breakpoint.
    """

    breakpoints: np.ndarray
    levels: np.ndarray

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate(([0.0], self.breakpoints))

    @property
    def total_measure(self) -> float:
        return float(self.breakpoints[-1]) if self.breakpoints.size else 0.0

    @property
    def cell_measures(self) -> np.ndarray:
        return np.diff(self.edges)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        j = np.searchsorted(self.breakpoints, s, side="left")
        padded = np.concatenate((self.levels, [0.0]))
        return padded[np.minimum(j, self.levels.size)]

    def measure_above(self, u: float) -> float:
        """Lebesgue measure of {s : f*(s) > u}."""
        above = self.levels > u
        if not np.any(above):
            return 0.0
        return float(self.breakpoints[np.nonzero(above)[0][-1]])


def rearrange(f: SampledFn) -> RearrangedFn:
    """Sort node values in decreasing order, each carrying its cell measure."""
    w = f.space.weights
    keep = w > 0
    vals = f.values[keep]
    ws = w[keep]
    order = np.argsort(-vals, kind="stable")
    vals, ws = vals[order], ws[order]
    # merge equal levels into one step
    if vals.size:
        starts = np.concatenate(([True], vals[1:] != vals[:-1]))
        group = np.cumsum(starts) - 1
        levels = vals[starts]
        measures = np.bincount(group, weights=ws)
    else:
        levels = np.zeros(0)
        measures = np.zeros(0)
    return RearrangedFn(np.cumsum(measures), levels)


def cumulative_weight_curve(omega: Expr | str, grid) -> np.ndarray:
    """W(s) = integral of omega over [0, s] at each point of an increasing
    grid starting at 0, by cumulative trapezoid."""
    if isinstance(omega, str):
        omega = parse_expr(omega, ("s",))
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or grid[0] != 0 or np.any(np.diff(grid) < 0):
        raise ValueError("grid must start at 0 and be nondecreasing")
    w = np.broadcast_to(eval_array(omega, {"s": grid}), grid.shape)
    if np.any(np.isnan(w)) or np.any(w < 0):
        bad = int(np.nonzero(np.isnan(w) | (w < 0))[0][0])
        raise ValueError(f"weight is negative or Undefined at s = {grid[bad]!r}")
    if np.any(np.isinf(w)):
        raise ValueError("weight must be finite")
    increments = np.diff(grid) * (w[1:] + w[:-1]) / 2
    return np.concatenate(([0.0], np.cumsum(increments)))


def cumulative_weight(omega: Expr | str, upper: float, resolution: int = 4097) -> float:
    """W(upper) for a weight expression in s."""
    if upper < 0:
        raise ValueError("upper limit must be nonnegative")
    if upper == 0:
        return 0.0
    grid = np.linspace(0.0, upper, resolution)
    return float(cumulative_weight_curve(omega, grid)[-1])


# ---------------------------------------------------------------- CSV input

def load_csv(path) -> SampledFn:
    """Read ``t,value`` rows (header optional, t strictly increasing).

    A uniform t column becomes an interval grid, anything else a discrete
    space whose weights are the trapezoid (midpoint-to-midpoint) cells.
    """
    ts, vs = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns t,value")
            try:
                t, v = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1 and not ts:
                    continue  # header
                raise ValueError(f"{path}:{lineno}: not a number") from None
            ts.append(t)
            vs.append(v)
    t = np.asarray(ts)
    v = np.asarray(vs)
    if t.size < 2:
        raise ValueError(f"{path}: need at least two rows")
    gaps = np.diff(t)
    if np.any(gaps <= 0):
        raise ValueError(f"{path}: t must be strictly increasing")
    span = t[-1] - t[0]
    uniform = np.allclose(gaps, span / (t.size - 1), rtol=1e-9, atol=0)
    if uniform and t.size >= 3:
        space: Space = IntervalSpace(float(t[0]), float(t[-1]), int(t.size))
    else:
        w = np.empty_like(t)
        w[0] = gaps[0] / 2
        w[-1] = gaps[-1] / 2
        w[1:-1] = (gaps[1:] + gaps[:-1]) / 2
        space = DiscreteSpace.of(t, w)
    return SampledFn.from_values(space, v)
