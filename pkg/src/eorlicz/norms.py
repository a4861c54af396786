"""Luxemburg-type norms as infima of monotone predicates in the scale lambda.

Every family here has the form ``inf{lam > 0 : P(lam)}`` with ``P`` monotone
(false below the norm, true above).  ``solve_infimum`` brackets the threshold
by powers of two starting at lam = 1 and then shrinks the bracket by batched
multisection, recording every observation so that a non-monotone answer is
caught rather than silently bisected through.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .classify import ToleranceConfig, classify, default_t_samples
from .expr import ComposedPhi, Expr, eval_array, free_vars, parse_expr
from .measure import (
    IntervalSpace,
    SampledFn,
    UndefinedIntegrandError,
    rearrange,
)

LAM_MIN = 1e-300
LAM_MAX = 1e300


class PreconditionError(ValueError):
    pass


class NonMonotonePredicateError(RuntimeError):
    pass


@dataclass
class NormResult:
    value: float
    bracket: tuple
    iterations: int
    predicate_evals: int
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "value": self.value,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
            "predicate_evals": self.predicate_evals,
            "notes": list(self.notes),
        }


# ------------------------------------------------------------------ solver

def solve_infimum(pred, rtol: float = 1e-10, max_iter: int = 200, batch: int = 8) -> NormResult:
    """inf{lam : pred(lam)} for a predicate monotone in lam.

    ``pred`` maps an array of lambdas to a boolean array.  Returns 0 when the
    predicate holds down to 1e-300 and +inf when it fails up to 1e300.
    """
    obs_lam, obs_hold = [], []

    def run(lams):
        lams = np.asarray(lams, dtype=float)
        h = np.asarray(pred(lams), dtype=bool).reshape(lams.shape)
        obs_lam.extend(lams.tolist())
        obs_hold.extend(h.tolist())
        return h

    def check():
        lam = np.asarray(obs_lam)
        hold = np.asarray(obs_hold)
        if hold.any() and (~hold).any():
            lowest_true = lam[hold].min()
            highest_false = lam[~hold].max()
            if highest_false > lowest_true:
                raise NonMonotonePredicateError(
                    f"predicate holds at lambda = {lowest_true!r} but fails at "
                    f"larger lambda = {highest_false!r}"
                )

    def result(value, lo, hi, it):
        check()
        return NormResult(value, (lo, hi), it, len(obs_lam))

    it = 0
    if run([1.0])[0]:
        hi, k = 1.0, 1
        while True:
            lams = 2.0 ** -np.arange(k, k + batch, dtype=float)
            lams = lams[lams >= LAM_MIN]
            if lams.size == 0:
                return result(0.0, 0.0, hi, it)
            h = run(lams)
            if not h.all():
                j = int(np.argmin(h))
                lo = float(lams[j])
                hi = float(lams[j - 1]) if j > 0 else hi
                break
            hi = float(lams[-1])
            k += batch
    else:
        lo, k = 1.0, 1
        while True:
            lams = 2.0 ** np.arange(k, k + batch, dtype=float)
            lams = lams[lams <= LAM_MAX]
            if lams.size == 0:
                return result(math.inf, lo, math.inf, it)
            h = run(lams)
            if h.any():
                j = int(np.argmax(h))
                hi = float(lams[j])
                lo = float(lams[j - 1]) if j > 0 else lo
                break
            lo = float(lams[-1])
            k += batch

    while hi - lo > rtol * hi and it < max_iter:
        it += 1
        pts = lo + (hi - lo) * np.arange(1, batch) / batch
        pts = pts[(pts > lo) & (pts < hi)]
        if pts.size == 0:
            break
        h = run(pts)
        if h.any():
            j = int(np.argmax(h))
            hi = float(pts[j])
            if j > 0:
                lo = float(pts[j - 1])
        else:
            lo = float(pts[-1])
    run([2 * hi, lo / 2])
    return result(hi, lo, hi, it)


# ------------------------------------------------------------ preliminaries

def _t_samples(space) -> np.ndarray:
    nodes = space.nodes
    if nodes.size == 1 or nodes[0] == nodes[-1]:
        return nodes[:1].copy()
    return default_t_samples(float(nodes[0]), float(nodes[-1]))


@lru_cache(maxsize=512)
def _young_verdict(c: ComposedPhi, T: tuple, tols: ToleranceConfig):
    rep = classify(c, np.array(T), tols, omega=(min(T), max(T)))
    return rep.verdicts["e_young"], rep.failures.get("e_young")


def require_young(c: ComposedPhi, space, tols: ToleranceConfig | None = None):
    """Raise ``PreconditionError`` unless phiE classifies as E-Young on the
    t-samples of ``space``."""
    T = tuple(float(x) for x in _t_samples(space))
    ok, why = _young_verdict(c, T, tols or ToleranceConfig())
    if not ok:
        raise PreconditionError(f"phi o E is not E-Young: {why}")


def _integrals(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Row-wise quadrature with extended-real rules (see measure.integrate)."""
    pos = w > 0
    Vp = V[:, pos]
    wp = w[pos]
    if np.isnan(Vp).any():
        raise UndefinedIntegrandError("integrand Undefined at a weighted node")
    plus = np.isposinf(Vp).any(axis=1)
    minus = np.isneginf(Vp).any(axis=1)
    if (plus & minus).any():
        raise UndefinedIntegrandError("integrand takes both +inf and -inf")
    finite = np.where(np.isfinite(Vp), Vp, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        s = finite @ wp
    s = np.where(plus, np.inf, s)
    return np.where(minus, -np.inf, s)


def _t_independent(c: ComposedPhi) -> bool:
    return "t" not in free_vars(c.expr)


def _psi(c: ComposedPhi, T: np.ndarray, u: np.ndarray) -> np.ndarray:
    """sup over sampled t of phiE(t, u), elementwise in u."""
    u = np.asarray(u, dtype=float)
    if _t_independent(c):
        with np.errstate(all="ignore"):
            return np.broadcast_to(c(0.0, u), u.shape).astype(float)
    with np.errstate(all="ignore"):
        V = c(T.reshape((-1,) + (1,) * u.ndim), u[None, ...])
    if np.isnan(V).any():
        raise UndefinedIntegrandError("phi(E(t, u)) Undefined in the weak supremum")
    return V.max(axis=0)


def _u_lattice(tols: ToleranceConfig) -> np.ndarray:
    return np.unique(np.concatenate((tols.u_small, tols.u_mid, tols.u_large)))


def _mul(a, b):
    """a*b with 0*inf = 0."""
    with np.errstate(invalid="ignore", over="ignore"):
        out = a * b
    if not np.isnan(out).any():
        return out
    return np.where((a == 0) | (b == 0), 0.0, out)


# ------------------------------------------------------------- Luxemburg

def _luxemburg_pred(f: SampledFn, c: ComposedPhi):
    t = f.space.nodes
    w = f.space.weights
    v = f.values

    def pred(lams):
        with np.errstate(all="ignore"):
            V = c(t[None, :], v[None, :] / lams[:, None])
        return _integrals(np.broadcast_to(V, (lams.size, t.size)), w) <= 1.0

    return pred


def luxemburg_norm(f: SampledFn, c: ComposedPhi, check: bool = True,
                   tols: ToleranceConfig | None = None) -> NormResult:
    """inf{lam > 0 : integral of phiE(t, |f(t)|/lam) <= 1}."""
    if check:
        require_young(c, f.space, tols)
    return solve_infimum(_luxemburg_pred(f, c))


# ------------------------------------------------------------ weak norms

@dataclass
class _Balls:
    """Contiguous node ranges [lo, hi) with measure and prefactor."""

    lo: np.ndarray
    hi: np.ndarray
    measure: np.ndarray
    factor: np.ndarray  # divide the ball quantity by this


def _whole_space(f: SampledFn) -> _Balls:
    n = f.values.size
    return _Balls(np.array([0]), np.array([n]), np.array([f.space.total_measure]), np.array([1.0]))


def _weak_pred(f: SampledFn, c: ComposedPhi, balls: _Balls, tols: ToleranceConfig,
               t_samples=None):
    """sup_u Psi(u) * m(B, f/lam, u) / factor <= 1 for every ball B.

    The supremum is taken over the jump points u = f_k/lam, where the
    distribution function is read as its left limit m(B, >= f_k), and over
    the canonical u-lattice.
    """
    v = f.values
    w = f.space.weights
    n = v.size
    T = _t_samples(f.space) if t_samples is None else np.asarray(t_samples, dtype=float).ravel()
    lattice = _u_lattice(tols)
    psi_lattice = _psi(c, T, lattice)
    if np.isnan(psi_lattice).any():
        raise UndefinedIntegrandError("weak supremum Undefined")

    # m(B, >= f_k) for every node k and ball B
    ge = (v[None, :] >= v[:, None]) * w[None, :]  # k x i
    P = np.concatenate((np.zeros((n, 1)), np.cumsum(ge, axis=1)), axis=1)
    Mge = P[:, balls.hi] - P[:, balls.lo]  # k x B
    idx = np.arange(n)
    inside = (idx[:, None] >= balls.lo[None, :]) & (idx[:, None] < balls.hi[None, :])
    Mge = np.where(inside & (v[:, None] > 0), Mge, 0.0)

    vmax = float(v.max()) if n else 0.0
    uniq, inv = np.unique(v, return_inverse=True)

    def pred(lams):
        m = lams.size
        with np.errstate(all="ignore"):
            psi_k = _psi(c, T, uniq[None, :] / lams[:, None])[:, inv]  # m x k
        if np.isnan(psi_k).any():
            raise UndefinedIntegrandError("weak supremum Undefined")
        sup = _mul(psi_k[:, :, None], Mge[None, :, :]).max(axis=1)  # m x B
        # lattice: m(B, f > lam u), which vanishes once lam u >= max f
        keep = lattice < vmax / lams.min()
        L, psi_L = lattice[keep], psi_lattice[keep]
        if L.size:
            above = v[None, None, :] > lams[:, None, None] * L[None, :, None]  # m x L x i
            Q = np.concatenate((np.zeros((m, L.size, 1)), np.cumsum(above * w, axis=2)), axis=2)
            M = Q[:, :, balls.hi] - Q[:, :, balls.lo]  # m x L x B
            sup = np.maximum(sup, _mul(psi_L[None, :, None], M).max(axis=1))
        return np.all(sup / balls.factor[None, :] <= 1.0, axis=1)

    return pred


def weak_orlicz_norm(f: SampledFn, c: ComposedPhi, check: bool = True,
                     tols: ToleranceConfig | None = None, t_samples=None) -> NormResult:
    """inf{lam > 0 : sup_{t,u} phiE(t, u) m(f/lam, u) <= 1}.

    The sup over t runs over ``t_samples`` (default: 33 points spanning the
    domain).
    """
    tols = tols or ToleranceConfig()
    if check:
        require_young(c, f.space, tols)
    return solve_infimum(_weak_pred(f, c, _whole_space(f), tols, t_samples))


# ---------------------------------------------------------------- Sobolev

@dataclass(frozen=True)
class SobolevConfig:
    k: int = 1

    def __post_init__(self):
        if self.k not in (0, 1, 2):
            raise ValueError("Sobolev order k must be 0, 1 or 2")


def derivatives(f: SampledFn, k: int) -> list:
    """Signed finite-difference derivatives of orders 0..k on a grid.

    Second-order central differences inside, second-order one-sided
    stencils at the two ends.
    """
    space = f.space
    if not isinstance(space, IntervalSpace):
        raise ValueError("derivatives need an interval grid")
    if space.n_nodes < 2 * k + 3:
        raise ValueError(f"order {k} needs at least {2 * k + 3} nodes")
    y = f.derivative_source
    h = space.h
    out = [y]
    if k >= 1:
        out.append(np.gradient(y, h, edge_order=2))
    if k >= 2:
        d2 = np.empty_like(y)
        d2[1:-1] = (y[2:] - 2 * y[1:-1] + y[:-2]) / h**2
        d2[0] = (2 * y[0] - 5 * y[1] + 4 * y[2] - y[3]) / h**2
        d2[-1] = (2 * y[-1] - 5 * y[-2] + 4 * y[-3] - y[-4]) / h**2
        out.append(d2)
    return out


def _combine(results: list) -> NormResult:
    value = math.fsum(r.value for r in results) if all(
        math.isfinite(r.value) for r in results) else math.inf
    return NormResult(
        value,
        (math.fsum(r.bracket[0] for r in results), value),
        sum(r.iterations for r in results),
        sum(r.predicate_evals for r in results),
    )


def sobolev_norm(f: SampledFn, c: ComposedPhi, cfg: SobolevConfig | None = None,
                 weak: bool = False, check: bool = True,
                 tols: ToleranceConfig | None = None, t_samples=None) -> NormResult:
    """Sum over orders j <= k of the (weak) Orlicz norm of |D^j f|."""
    cfg = cfg or SobolevConfig()
    tols = tols or ToleranceConfig()
    if check:
        require_young(c, f.space, tols)
    parts = []
    for d in derivatives(f, cfg.k):
        g = SampledFn.from_values(f.space, d)
        if weak:
            parts.append(weak_orlicz_norm(g, c, check=False, tols=tols, t_samples=t_samples))
        else:
            parts.append(luxemburg_norm(g, c, check=False, tols=tols))
    return _combine(parts)


# ----------------------------------------------------------------- Morrey

@dataclass(frozen=True)
class MorreyConfig:
    phi_weight: Expr
    centers: tuple = ()
    radii: tuple = ()

    @classmethod
    def parse(cls, phi_weight: str, centers=(), radii=()) -> "MorreyConfig":
        return cls(parse_expr(phi_weight, ("r",)), tuple(map(float, centers)), tuple(map(float, radii)))

    def resolved(self, space) -> "MorreyConfig":
        """Fill in the default ball lattice for ``space``."""
        centers = self.centers or tuple(float(x) for x in _t_samples(space))
        radii = self.radii or tuple(space.total_measure * 2.0 ** -j for j in range(9))
        return MorreyConfig(self.phi_weight, centers, radii)

    def weight_warnings(self) -> list:
        """phi(r) should be almost decreasing and phi(r) r almost increasing
        on the radii (factor 2)."""
        r = np.array(sorted(set(self.radii)))
        if r.size < 2:
            return []
        p = np.broadcast_to(eval_array(self.phi_weight, {"r": r}), r.shape)
        notes = []
        for i in range(r.size):
            for j in range(i + 1, r.size):
                if p[j] > 2 * p[i]:
                    notes.append(f"phi(r) increases by more than 2x from r={r[i]:g} to r={r[j]:g}")
                    break
                if p[j] * r[j] < 0.5 * p[i] * r[i]:
                    notes.append(f"phi(r) r decreases by more than 2x from r={r[i]:g} to r={r[j]:g}")
                    break
        return notes


def _morrey_balls(f: SampledFn, cfg: MorreyConfig) -> _Balls:
    if not cfg.centers or not cfg.radii:
        raise ValueError("Morrey norm needs nonempty centers and radii")
    if any(r <= 0 for r in cfg.radii):
        raise ValueError("radii must be positive")
    t = f.space.nodes
    wcum = np.concatenate(([0.0], np.cumsum(f.space.weights)))
    radii = np.asarray(cfg.radii, dtype=float)
    weight = np.broadcast_to(eval_array(cfg.phi_weight, {"r": radii}), radii.shape)
    lo, hi, meas, fac = [], [], [], []
    for a in cfg.centers:
        for r, phi_r in zip(cfg.radii, weight):
            # open ball |t - a| < r as a contiguous index range
            i0 = int(np.searchsorted(t, a - r, side="right"))
            i1 = int(np.searchsorted(t, a + r, side="left"))
            m = wcum[i1] - wcum[i0]
            if i1 <= i0 or m <= 0:
                continue
            phi_r = float(phi_r)
            if not (math.isfinite(phi_r) and phi_r > 0):
                raise ValueError(f"phi(r) must be finite and positive, got {phi_r!r} at r={r!r}")
            lo.append(i0)
            hi.append(i1)
            meas.append(m)
            fac.append(m * phi_r)
    if not lo:
        raise ValueError("every Morrey ball has zero measure")
    return _Balls(np.array(lo), np.array(hi), np.array(meas), np.array(fac))


def _morrey_strong_pred(f: SampledFn, c: ComposedPhi, balls: _Balls):
    t = f.space.nodes
    w = f.space.weights
    v = f.values

    def pred(lams):
        with np.errstate(all="ignore"):
            V = np.broadcast_to(c(t[None, :], v[None, :] / lams[:, None]), (lams.size, t.size))
        V = np.where(w[None, :] > 0, V, 0.0)
        if np.isnan(V).any():
            raise UndefinedIntegrandError("integrand Undefined at a weighted node")
        wv = np.where(np.isfinite(V), V, 0.0) * w[None, :]
        zero = np.zeros((lams.size, 1))
        S = np.concatenate((zero, np.cumsum(wv, axis=1)), axis=1)
        P = np.concatenate((zero, np.cumsum(np.isposinf(V), axis=1)), axis=1)
        N = np.concatenate((zero, np.cumsum(np.isneginf(V), axis=1)), axis=1)
        sums = S[:, balls.hi] - S[:, balls.lo]
        plus = (P[:, balls.hi] - P[:, balls.lo]) > 0
        minus = (N[:, balls.hi] - N[:, balls.lo]) > 0
        if (plus & minus).any():
            raise UndefinedIntegrandError("integrand takes both +inf and -inf")
        sums = np.where(plus, np.inf, np.where(minus, -np.inf, sums))
        return np.all(sums / balls.factor[None, :] <= 1.0, axis=1)

    return pred


def morrey_norm(f: SampledFn, c: ComposedPhi, cfg: MorreyConfig, weak: bool = False,
                check: bool = True, tols: ToleranceConfig | None = None,
                t_samples=None) -> NormResult:
    """sup over balls of the ball-normalised (weak) Orlicz norm.

    Each ball's infimum is the threshold of a monotone predicate, so the
    supremum over balls is the threshold of their conjunction.
    """
    tols = tols or ToleranceConfig()
    if check:
        require_young(c, f.space, tols)
    cfg = cfg.resolved(f.space)
    notes = cfg.weight_warnings()
    for note in notes:
        warnings.warn(note, stacklevel=2)
    balls = _morrey_balls(f, cfg)
    pred = _weak_pred(f, c, balls, tols, t_samples) if weak else _morrey_strong_pred(f, c, balls)
    res = solve_infimum(pred)
    res.notes.extend(notes)
    return res


# ---------------------------------------------------------------- Lorentz

@dataclass(frozen=True)
class LorentzConfig:
    omega: Expr
    integrand_weight: str = "omega"  # or "cumulative_W"
    resolution: int = 4097

    def __post_init__(self):
        if self.integrand_weight not in ("omega", "cumulative_W"):
            raise ValueError("integrand_weight must be 'omega' or 'cumulative_W'")

    @classmethod
    def parse(cls, omega: str = "1", integrand_weight: str = "omega") -> "LorentzConfig":
        return cls(parse_expr(omega, ("s",)), integrand_weight)


def _weights_on(omega: Expr, grid: np.ndarray) -> np.ndarray:
    w = np.broadcast_to(eval_array(omega, {"s": grid}), grid.shape).astype(float)
    bad = np.isnan(w) | (w < 0) | np.isinf(w)
    if bad.any():
        s = grid[np.nonzero(bad)[0][0]]
        raise ValueError(f"weight must be finite and nonnegative, fails at s = {s!r}")
    return w


def _cumtrapz(y, x):
    return np.concatenate(([0.0], np.cumsum(np.diff(x) * (y[1:] + y[:-1]) / 2)))


def lorentz_norm(f: SampledFn, c: ComposedPhi, cfg: LorentzConfig | None = None,
                 weak: bool = False, check: bool = True,
                 tols: ToleranceConfig | None = None) -> NormResult:
    """Orlicz-type norm of the decreasing rearrangement f* with weight omega.

    strong: inf{lam : int_0^mu phiE(s, f*(s)/lam) w(s) ds <= 1}, w = omega
    (or W, the cumulative weight); weak: inf{lam : sup_s phiE(s, f*(s)/lam)
    W(s) <= 1}.
    """
    cfg = cfg or LorentzConfig.parse("1")
    tols = tols or ToleranceConfig()
    if check:
        require_young(c, f.space, tols)
    r = rearrange(f)
    edges = r.edges
    if r.levels.size == 0:
        return NormResult(0.0, (0.0, 0.0), 0, 0)
    fine = np.unique(np.concatenate((edges, np.linspace(0.0, edges[-1], cfg.resolution))))
    om = _weights_on(cfg.omega, fine)
    W = _cumtrapz(om, fine)
    at_edges = np.searchsorted(fine, edges)
    levels = r.levels

    if not weak:
        base = W if cfg.integrand_weight == "omega" else _cumtrapz(W, fine)
        cell = np.diff(base[at_edges])  # integral of w over each cell
        s_mid = (edges[:-1] + edges[1:]) / 2

        def pred(lams):
            with np.errstate(all="ignore"):
                V = np.broadcast_to(c(s_mid[None, :], levels[None, :] / lams[:, None]),
                                    (lams.size, levels.size))
            return _integrals(V, cell) <= 1.0

    else:
        s_right = edges[1:]
        W_right = W[at_edges[1:]]
        # interior fine points as well, with f* read off left-continuously
        s_in = fine[1:]
        f_in = r(s_in)
        W_in = W[1:]

        s_all = np.concatenate((s_right, s_in))
        f_all = np.concatenate((levels, f_in))
        W_all = np.concatenate((W_right, W_in))

        def pred(lams):
            with np.errstate(all="ignore"):
                V = np.broadcast_to(c(s_all[None, :], f_all[None, :] / lams[:, None]),
                                    (lams.size, s_all.size))
            if np.isnan(V).any():
                raise UndefinedIntegrandError("weak Lorentz supremum Undefined")
            return _mul(V, W_all[None, :]).max(axis=1) <= 1.0

    return solve_infimum(pred)


NORM_KINDS = ("luxemburg", "weak", "sobolev", "morrey", "lorentz")
