"""Numerical membership tests for the four E-function classes.

A composition phiE(t, u) = Phi(E(t, u)) is probed on fixed u-lattices for
each sampled t.  Every axiom gets a verdict (pass / fail / unknown) and a
witness; class verdicts are conjunctions of axioms over all sampled t.

Limits are decided by trend plus threshold on geometric lattices, convexity
by midpoint, three-point and random-chord tests, continuity by comparing each
increment with its neighbours on a fine lattice and at the seams of
piecewise definitions.
"""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .expr import IDENTITY_MAP, ComposedPhi, PhiSpec, free_vars

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"
_DMAX = sys.float_info.max

AXIOMS = (
    "convex_in_u",
    "even_in_u",
    "continuous_in_u",
    "vanish_at_zero",
    "strict_zero_iff",
    "positive_on_positives",
    "nonnegative_on_positives",
    "limit_ratio_zero",
    "limit_ratio_inf",
    "limit_value_zero",
    "limit_value_inf",
    "left_continuous_at_U",
)

CLASS_AXIOMS = {
    # vanish_at_zero follows from the other N axioms; listing it keeps the
    # finite-sample verdicts ordered like the exact classes
    "e_n": (
        "even_in_u",
        "continuous_in_u",
        "convex_in_u",
        "positive_on_positives",
        "limit_ratio_zero",
        "limit_ratio_inf",
        "vanish_at_zero",
    ),
    "e_strong_young": (
        "convex_in_u",
        "continuous_in_u",
        "strict_zero_iff",
        "limit_value_inf",
    ),
    "e_orlicz": (
        "convex_in_u",
        "vanish_at_zero",
        "nonnegative_on_positives",
        "limit_value_inf",
        "left_continuous_at_U",
    ),
    "e_young": (
        "convex_in_u",
        "vanish_at_zero",
        "limit_value_zero",
        "limit_value_inf",
    ),
}
CLASSES = ("e_n", "e_strong_young", "e_orlicz", "e_young")


class UndefinedEvaluationError(ValueError):
    def __init__(self, t, u):
        self.t, self.u = float(t), float(u)
        super().__init__(f"phi(E(t, u)) is Undefined at t = {self.t!r}, u = {self.u!r}")


@dataclass(frozen=True)
class ToleranceConfig:
    small_exponents: int = 24
    large_exponents: int = 24
    mid_points: int = 129
    mid_max: float = 16.0
    refine: int = 8
    tail: int = 8
    tail_slack: float = 1e-9
    ratio_zero: float = 1e-6
    ratio_inf: float = 1e6
    value_zero: float = 1e-6
    value_inf: float = 1e6
    convex_slack: float = 1e-9
    convex_probes: int = 64
    probe_seed: int = 0
    zero_tol: float = 1e-9
    even_rtol: float = 1e-9
    jump_factor: float = 1e3
    big: float = 1e150
    left_limit_rtol: float = 1e-6
    u_floor: float = 0.0
    null_exceptions: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ToleranceConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**d)

    # canonical lattices
    @property
    def u_small(self) -> np.ndarray:
        return 4.0 ** -np.arange(self.small_exponents + 1)

    @property
    def u_large(self) -> np.ndarray:
        return 4.0 ** np.arange(self.large_exponents + 1)

    @property
    def u_mid(self) -> np.ndarray:
        return np.linspace(0.0, self.mid_max, self.mid_points)

    @property
    def u_refined(self) -> np.ndarray:
        n = (self.mid_points - 1) * self.refine + 1
        u = np.linspace(0.0, self.mid_max, n)
        return u[u >= self.u_zero]

    @property
    def u_zero(self) -> float:
        return self.u_floor if self.u_floor > 0 else 0.0

    @property
    def u_cap(self) -> float:
        return 4.0 ** self.large_exponents

    @property
    def u_merged(self) -> np.ndarray:
        u = np.unique(np.concatenate(([self.u_zero], self.u_small, self.u_mid, self.u_large)))
        return u[u >= self.u_zero]


@dataclass
class AxiomRecord:
    verdict: str
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self):
        return {"verdict": self.verdict, "witness": self.witness}


@dataclass
class AxiomProfile:
    t: float
    records: dict
    U_phi: float = math.inf
    a_phi: float = 0.0

    def passes(self, axioms) -> bool:
        return all(self.records[a].passed for a in axioms)

    def first_failure(self, axioms):
        for a in axioms:
            if not self.records[a].passed:
                return a, self.records[a]
        return None

    def __getitem__(self, name) -> AxiomRecord:
        return self.records[name]

    def to_dict(self):
        return {
            "t": self.t,
            "U_phi": self.U_phi,
            "a_phi": self.a_phi,
            "axioms": {k: v.to_dict() for k, v in self.records.items()},
        }


@dataclass
class ClassReport:
    profiles: list
    verdicts: dict
    chain_consistent: bool
    failures: dict = field(default_factory=dict)
    excused: dict = field(default_factory=dict)
    range_violations: list = field(default_factory=list)

    def profile_at(self, t: float) -> AxiomProfile:
        return min(self.profiles, key=lambda p: abs(p.t - t))

    def to_dict(self):
        return {
            "verdicts": dict(self.verdicts),
            "chain_consistent": self.chain_consistent,
            "failures": self.failures,
            "excused": self.excused,
            "range_violations": self.range_violations,
            "profiles": [p.to_dict() for p in self.profiles],
        }


def chain_holds(verdicts: dict) -> bool:
    """e_n => e_strong_young => e_orlicz => e_young."""
    return all(
        verdicts[hi] <= verdicts[lo]
        for hi, lo in zip(CLASSES[:-1], CLASSES[1:])
    )


# ------------------------------------------------------------- evaluation

def _grid(c: ComposedPhi, T: np.ndarray, U: np.ndarray, allow_nan=False) -> np.ndarray:
    with np.errstate(all="ignore"):
        V = np.broadcast_to(c(T[:, None], U[None, :], saturate=True), (T.size, U.size))
    if not allow_nan and np.isnan(V).any():
        i, j = np.argwhere(np.isnan(V))[0]
        raise UndefinedEvaluationError(T[i], U[j])
    return V


def _pairwise(c: ComposedPhi, T: np.ndarray, U: np.ndarray) -> np.ndarray:
    """phiE at (T[i], U[i]) for matched 1-d arrays."""
    with np.errstate(all="ignore"):
        return np.broadcast_to(c(T, U, saturate=True), T.shape).astype(float)


def _saturated(*arrays):
    """Finite values beyond double range (see ``eval_array(saturate=True)``)
    make a chord comparison inconclusive."""
    out = np.zeros(np.broadcast_shapes(*(a.shape for a in arrays)), dtype=bool)
    for a in arrays:
        out |= np.abs(a) == _DMAX
    return out


def _le(a, b, slack):
    """a <= b + slack, with infinities compared exactly."""
    with np.errstate(all="ignore"):
        return (a <= b) | (a <= b + slack)


def _ge(a, b, slack):
    with np.errstate(all="ignore"):
        return (a >= b) | (a >= b - slack)


def _first(mask_row):
    idx = np.nonzero(mask_row)[0]
    return int(idx[0]) if idx.size else None


def _last(mask_row):
    idx = np.nonzero(mask_row)[0]
    return int(idx[-1]) if idx.size else None


def _f(x) -> float:
    return float(x)


def _bisect(pred, T, lo, hi, iters=1100):
    """Shrink [lo, hi] per row to adjacent floats, keeping pred(lo) true and
    pred(hi) false."""
    lo = lo.astype(float).copy()
    hi = hi.astype(float).copy()
    for _ in range(iters):
        mid = lo + (hi - lo) / 2
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        p = pred(T[active], mid[active])
        a = np.nonzero(active)[0]
        lo[a[p]] = mid[active][p]
        hi[a[~p]] = mid[active][~p]
    return lo, hi


def _snap(lo: float, hi: float) -> tuple:
    """Shortest decimal in [lo, hi] and whether it equals hi."""
    mid = lo + (hi - lo) / 2
    for digits in range(1, 18):
        c = float(f"{mid:.{digits}g}")
        if lo <= c <= hi:
            return c, c == hi
    return mid, False


# ---------------------------------------------------------------- axioms

def _scale_at_one(c, T):
    v = _grid(c, T, np.array([1.0]), allow_nan=True)[:, 0]
    with np.errstate(all="ignore"):
        s = np.where(np.isfinite(v), np.maximum(1.0, np.abs(v)), 1.0)
    return s


def _convexity(c, T, tols, U, V):
    n = T.size
    fails = [None] * n
    slack = tols.convex_slack

    def record(mask, where, kind, extra):
        for i in range(n):
            if fails[i] is None:
                j = _first(mask[i])
                if j is not None:
                    fails[i] = {"t": _f(T[i]), "u": _f(where[j]), "kind": kind, **extra(j)}

    with np.errstate(all="ignore"):
        # midpoints of adjacent lattice pairs
        a, b = U[:-1], U[1:]
        m = (a + b) / 2
        Vm = _grid(c, T, m)
        Va, Vb = V[:, :-1], V[:, 1:]
        rhs = (Va + Vb) / 2
        ok = (rhs == np.inf) | _le(Vm, rhs, slack * (1 + np.abs(Va) + np.abs(Vb)))
        ok |= _saturated(Vm, Va, Vb)
        record(~ok, m, "midpoint", lambda j: {"a": _f(a[j]), "b": _f(b[j])})

        # consecutive triples
        u0, u1, u2 = U[:-2], U[1:-1], U[2:]
        lam = (u2 - u1) / (u2 - u0)
        V0, V1, V2 = V[:, :-2], V[:, 1:-1], V[:, 2:]
        rhs = lam * V0 + (1 - lam) * V2
        ok = (rhs == np.inf) | _le(V1, rhs, slack * (1 + np.abs(V0) + np.abs(V2)))
        ok |= _saturated(V1, V0, V2)
        record(~ok, u1, "triple", lambda j: {"a": _f(u0[j]), "b": _f(u2[j])})

        # seeded random chords
        rng = np.random.default_rng(tols.probe_seed)
        k = tols.convex_probes
        ia = rng.integers(0, U.size, k)
        ib = rng.integers(0, U.size, k)
        lam = rng.uniform(0.0, 1.0, k)
        pa, pb = U[ia], U[ib]
        x = lam * pa + (1 - lam) * pb
        Vx = _grid(c, T, x)
        Pa, Pb = V[:, ia], V[:, ib]
        rhs = lam * Pa + (1 - lam) * Pb
        ok = (rhs == np.inf) | _le(Vx, rhs, slack * (1 + np.abs(Pa) + np.abs(Pb)))
        ok |= _saturated(Vx, Pa, Pb)
        record(~ok, x, "chord", lambda j: {"a": _f(pa[j]), "b": _f(pb[j]), "lambda": _f(lam[j])})
    return [AxiomRecord(PASS) if w is None else AxiomRecord(FAIL, w) for w in fails]


def _evenness(c, T, tols, U, V):
    pos = U > 0
    Up = U[pos]
    Vp = V[:, pos]
    Vn = _grid(c, T, -Up, allow_nan=True)
    out = []
    with np.errstate(all="ignore"):
        same = (Vn == Vp) | (np.abs(Vn - Vp) <= tols.even_rtol * (1 + np.abs(Vp)))
    for i in range(T.size):
        undefined = _first(np.isnan(Vn[i]))
        if undefined is not None:
            out.append(AxiomRecord(UNKNOWN, {
                "t": _f(T[i]), "u": _f(-Up[undefined]),
                "reason": "Undefined at negative u",
            }))
            continue
        j = _first(~same[i])
        if j is None:
            out.append(AxiomRecord(PASS))
        else:
            out.append(AxiomRecord(FAIL, {
                "t": _f(T[i]), "u": _f(Up[j]),
                "value": _f(Vp[i, j]), "mirrored": _f(Vn[i, j]),
            }))
    return out


def _jumps(Va, Vb, local, tols):
    """True where the step Va -> Vb is a jump relative to ``local``."""
    with np.errstate(all="ignore"):
        fa, fb = np.isfinite(Va), np.isfinite(Vb)
        d = np.abs(Vb - Va)
        finite_jump = fa & fb & (d > tols.jump_factor * local) & (
            d > tols.zero_tol * (1 + np.abs(Va) + np.abs(Vb))
        )
        # one side infinite: continuous only if the other side already diverges
        inf_a = ~fa & fb & ~((np.sign(Va) * Vb) >= tols.big)
        inf_b = fa & ~fb & ~((np.sign(Vb) * Va) >= tols.big)
        opposite = ~fa & ~fb & (Va != Vb)
    return finite_jump | inf_a | inf_b | opposite


def _lattice_jumps(T, tols, R, VR):
    with np.errstate(all="ignore"):
        d = np.abs(np.diff(VR, axis=1))
        d = np.where(np.isfinite(d), d, 0.0)
    left = np.concatenate((np.zeros((T.size, 1)), d[:, :-1]), axis=1)
    right = np.concatenate((d[:, 1:], np.zeros((T.size, 1))), axis=1)
    local = np.maximum(left, right)
    return _jumps(VR[:, :-1], VR[:, 1:], local, tols)


def _seams(c, T, tols, U):
    """Bracket every change of conditional branch along the lattice U and
    test for a jump across it.  Returns per-row witness or None."""
    sig = np.broadcast_to(c.branches(T[:, None], U[None, :]), (T.size, U.size))
    change = sig[:, 1:] != sig[:, :-1]
    rows, cols = np.nonzero(change)
    out = [None] * T.size
    if rows.size == 0:
        return out
    Tr = T[rows]
    ref = sig[rows, cols]

    # bisect each bracket to adjacent floats, same branch as the left end
    lo = U[cols].astype(float).copy()
    hi = U[cols + 1].astype(float).copy()
    for _ in range(1100):
        mid = lo + (hi - lo) / 2
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        a = np.nonzero(active)[0]
        s = np.broadcast_to(c.branches(Tr[a], mid[a]), a.shape)
        p = s == ref[a]
        lo[a[p]] = mid[a][p]
        hi[a[~p]] = mid[a][~p]
    eps = 1e-7 * np.maximum(1.0, np.abs(hi))
    v_lo = _pairwise(c, Tr, lo)
    v_hi = _pairwise(c, Tr, hi)
    v_l2 = _pairwise(c, Tr, np.maximum(lo - eps, tols.u_zero))
    v_r2 = _pairwise(c, Tr, hi + eps)
    with np.errstate(all="ignore"):
        local = np.abs(v_lo - v_l2) + np.abs(v_r2 - v_hi)
        local = np.where(np.isfinite(local), local, 0.0)
    jump = _jumps(v_lo, v_hi, local, tols)
    for k in np.nonzero(jump)[0]:
        i = rows[k]
        if out[i] is None:
            out[i] = {
                "t": _f(T[i]), "u": _f(hi[k]), "kind": "seam",
                "left": _f(v_lo[k]), "right": _f(v_hi[k]),
            }
    return out


def _left_limits(c, T, U):
    """Estimate phiE(U-) per row from U*(1 - 10^-j), j = 2..11."""
    js = np.arange(2, 12)
    ys = np.array([
        _pairwise(c, T, U * (1 - 10.0 ** -j)) for j in js
    ]).T  # rows x len(js)
    return ys


def _left_limit_value(y, tols) -> float:
    if np.isnan(y).any():
        return math.nan
    if np.isinf(y).any() or abs(y[-1]) >= tols.big:
        return math.inf if y[np.isinf(y) | (np.abs(y) >= tols.big)][0] > 0 else -math.inf
    d = np.diff(y)
    # steady (non-shrinking) increments indicate divergence
    if d[-1] != 0 and np.all(np.sign(d[-3:]) == np.sign(d[-1])) and (
        abs(d[-1]) >= 0.9 * abs(d[-2]) and abs(d[-2]) >= 0.9 * abs(d[-3])
    ):
        return math.inf if d[-1] > 0 else -math.inf
    return float(y[-1])


def _boundaries(c, T, tols, U, V):
    """U_phi (finiteness threshold) and a_phi (positivity threshold)."""
    n = T.size
    Up = U[U > 0]
    Vp = V[:, U > 0]
    U_phi = np.full(n, np.inf)
    U_at = np.zeros(n, dtype=bool)  # phi(U_phi) is +inf (boundary excluded)
    a_phi = np.zeros(n)

    finite = np.isfinite(Vp)
    need = []
    for i in range(n):
        if finite[i].all():
            continue
        last = _last(finite[i])
        if last is None:
            U_phi[i] = 0.0
        elif last == Up.size - 1:
            U_phi[i] = np.inf
        else:
            need.append((i, Up[last], Up[last + 1]))
    if need:
        idx = np.array([k[0] for k in need])
        lo, hi = _bisect(
            lambda t, u: np.isfinite(_pairwise(c, t, u)),
            T[idx], np.array([k[1] for k in need]), np.array([k[2] for k in need]),
        )
        for k, i in enumerate(idx):
            U_phi[i], _ = _snap(lo[k], hi[k])
            U_at[i] = not np.isfinite(_pairwise(c, T[i:i + 1], np.array([U_phi[i]]))[0])

    positive = Vp > 0
    need = []
    for i in range(n):
        first = _first(positive[i])
        if first is None:
            a_phi[i] = np.inf
        elif first == 0:
            a_phi[i] = 0.0
        else:
            need.append((i, Up[first - 1], Up[first]))
    if need:
        idx = np.array([k[0] for k in need])
        lo, hi = _bisect(
            lambda t, u: ~(_pairwise(c, t, u) > 0),
            T[idx], np.array([k[1] for k in need]), np.array([k[2] for k in need]),
        )
        for k, i in enumerate(idx):
            a_phi[i], _ = _snap(lo[k], hi[k])
    return U_phi, U_at, a_phi


def _left_continuity(c, T, tols, U_phi):
    out = [None] * T.size
    finite_U = np.isfinite(U_phi) & (U_phi > 0)
    idx = np.nonzero(finite_U)[0]
    left = {}
    if idx.size:
        ys = _left_limits(c, T[idx], U_phi[idx])
        at = _pairwise(c, T[idx], U_phi[idx])
        for k, i in enumerate(idx):
            L = _left_limit_value(ys[k], tols)
            v = float(at[k])
            left[i] = L
            if math.isinf(v):
                ok = L == v
            elif math.isnan(L) or math.isinf(L):
                ok = False
            else:
                ok = abs(L - v) <= tols.left_limit_rtol * (1 + abs(v))
            if not ok:
                out[i] = {"t": _f(T[i]), "u": _f(U_phi[i]), "left_limit": L, "value": v}
    for i in np.nonzero(U_phi == 0)[0]:
        out[i] = {"t": _f(T[i]), "u": 0.0, "reason": "phiE is +inf on (0, inf)"}
    return out, left


def _tail_records(T, lattice, seq, tail, slack_fn, decreasing: bool, final_ok, extra=None):
    out = []
    seg = seq[:, -tail:]
    prev, nxt = seg[:, :-1], seg[:, 1:]
    slack = slack_fn(prev)
    trend = _le(nxt, prev, slack) if decreasing else _ge(nxt, prev, slack)
    with np.errstate(all="ignore"):
        trend = trend & ~np.isnan(nxt) & ~np.isnan(prev)
    final = final_ok(seg[:, -1])
    for i in range(T.size):
        if trend[i].all() and final[i]:
            out.append(AxiomRecord(PASS))
        else:
            w = {
                "t": _f(T[i]), "u": _f(lattice[-1]),
                "sequence": [float(x) for x in seg[i]],
            }
            if extra is not None:
                w.update(extra(i))
            out.append(AxiomRecord(FAIL, w))
    return out


def _profiles(c: ComposedPhi, T, tols: ToleranceConfig) -> list:
    T = np.asarray(T, dtype=float).ravel()
    if T.size > 1 and "t" not in free_vars(c.expr):
        # every row is the same; profile one and relabel
        (p,) = _profiles(c, T[:1], tols)
        return [_relabel(p, float(t)) for t in T]
    n = T.size
    U = tols.u_merged
    V = _grid(c, T, U)
    scale = _scale_at_one(c, T)
    rec = {}

    rec["convex_in_u"] = _convexity(c, T, tols, U, V)
    rec["even_in_u"] = _evenness(c, T, tols, U, V)

    # zero and sign
    v0 = V[:, 0]
    with np.errstate(all="ignore"):
        vanish = np.abs(v0) <= tols.zero_tol * scale
    rec["vanish_at_zero"] = [
        AxiomRecord(PASS) if vanish[i] else
        AxiomRecord(FAIL, {"t": _f(T[i]), "u": _f(U[0]), "value": _f(v0[i])})
        for i in range(n)
    ]
    Up, Vp = U[1:], V[:, 1:]
    pos_rec, nonneg_rec, strict_rec = [], [], []
    for i in range(n):
        j = _last(~(Vp[i] > 0))
        if j is None:
            pos_rec.append(AxiomRecord(PASS))
        else:
            pos_rec.append(AxiomRecord(FAIL, {"t": _f(T[i]), "u": _f(Up[j]), "value": _f(Vp[i, j])}))
        j = _first(~(Vp[i] >= -tols.zero_tol * scale[i]))
        if j is None:
            nonneg_rec.append(AxiomRecord(PASS))
        else:
            nonneg_rec.append(AxiomRecord(FAIL, {"t": _f(T[i]), "u": _f(Up[j]), "value": _f(Vp[i, j])}))
        if not vanish[i]:
            strict_rec.append(rec["vanish_at_zero"][i])
        else:
            strict_rec.append(pos_rec[i])
    rec["positive_on_positives"] = pos_rec
    rec["nonnegative_on_positives"] = nonneg_rec
    rec["strict_zero_iff"] = strict_rec

    # limits on the geometric lattices
    S, L = tols.u_small, tols.u_large
    VS, VL = _grid(c, T, S), _grid(c, T, L)
    with np.errstate(all="ignore"):
        rS = np.abs(VS / S)
        # a saturated value only bounds phi from below; the ratio is off-scale
        rL = np.where(np.abs(VL) >= _DMAX, np.sign(VL) * np.inf, VL) / L
        fin = np.where(np.isfinite(rS), rS, -np.inf)
        ref = np.where(np.isfinite(rS[:, 0]), rS[:, 0], np.max(fin, axis=1))
        ref = np.where(np.isfinite(ref), np.maximum(1.0, ref), 1.0)
    tail = tols.tail
    rel = lambda p: tols.tail_slack * np.abs(p)
    rec["limit_ratio_zero"] = _tail_records(
        T, S, rS, tail, rel, True, lambda f: f < tols.ratio_zero * ref)
    # growth is measured against the first positive ratio on the large lattice
    with np.errstate(all="ignore"):
        posL = np.where((rL > 0) & np.isfinite(rL), rL, np.inf)
        refL = np.min(np.where(np.cumsum(posL < np.inf, axis=1) == 1, posL, np.inf), axis=1)
    rec["limit_ratio_inf"] = _tail_records(
        T, L, rL, tail, rel, False, lambda f: f > tols.ratio_inf * refL)
    with np.errstate(all="ignore"):
        aS = np.abs(VS)
    rec["limit_value_zero"] = _tail_records(
        T, S, aS, tail, lambda p: tols.tail_slack * scale[:, None], True,
        lambda f: f <= tols.value_zero * scale)
    rec["limit_value_inf"] = _tail_records(
        T, L, VL, tail, lambda p: tols.tail_slack * (1 + np.abs(p)), False,
        lambda f: f > tols.value_inf)

    # thresholds and continuity
    U_phi, _, a_phi = _boundaries(c, T, tols, U, V)
    lc, left = _left_continuity(c, T, tols, U_phi)
    rec["left_continuous_at_U"] = [
        AxiomRecord(PASS, {"t": _f(T[i]), "u": _f(U_phi[i]), "left_limit": left[i]} if i in left else None)
        if lc[i] is None else AxiomRecord(FAIL, lc[i])
        for i in range(n)
    ]

    R = tols.u_refined
    VR = _grid(c, T, R)
    jumps = _lattice_jumps(T, tols, R, VR)
    # right continuity at the lowest point, against the next geometric step
    z = np.array([tols.u_zero, S[-1], S[-2]]) if tols.u_zero < S[-1] else None
    zjump = np.zeros(n, dtype=bool)
    if z is not None:
        Vz = _grid(c, T, z)
        with np.errstate(all="ignore"):
            d1 = np.abs(Vz[:, 2] - Vz[:, 1])
            d1 = np.where(np.isfinite(d1), d1, 0.0)
        zjump = _jumps(Vz[:, 0], Vz[:, 1], d1, tols)
    seam = _seams(c, T, tols, np.unique(np.concatenate((U, R))))
    cont = []
    for i in range(n):
        j = _first(jumps[i])
        if j is not None:
            w = {"t": _f(T[i]), "u": _f(R[j + 1]), "kind": "lattice",
                 "left": _f(VR[i, j]), "right": _f(VR[i, j + 1])}
        elif zjump[i]:
            w = {"t": _f(T[i]), "u": _f(z[0]), "kind": "at_zero",
                 "value": _f(Vz[i, 0]), "next": _f(Vz[i, 1])}
        elif seam[i] is not None:
            w = seam[i]
        elif lc[i] is not None:
            w = dict(lc[i], kind="left_of_U")
        else:
            w = None
        cont.append(AxiomRecord(PASS) if w is None else AxiomRecord(FAIL, w))
    rec["continuous_in_u"] = cont

    return [
        AxiomProfile(
            t=_f(T[i]),
            records={a: rec[a][i] for a in AXIOMS},
            U_phi=_f(U_phi[i]),
            a_phi=_f(a_phi[i]),
        )
        for i in range(n)
    ]


def _relabel(p: AxiomProfile, t: float) -> AxiomProfile:
    recs = {}
    for k, r in p.records.items():
        w = None if r.witness is None else dict(r.witness, t=t)
        recs[k] = AxiomRecord(r.verdict, w)
    return AxiomProfile(t=t, records=recs, U_phi=p.U_phi, a_phi=p.a_phi)


def axiom_profile(c: ComposedPhi, t: float, tols: ToleranceConfig | None = None) -> AxiomProfile:
    """Check every axiom for phiE(t, .) at one t."""
    return _profiles(c, [t], tols or ToleranceConfig())[0]


def default_t_samples(a: float, b: float, n: int = 33) -> np.ndarray:
    return np.linspace(a, b, n)


def _null_probes(t, spacing, omega):
    d = 1e-3 * spacing
    lo, hi = omega if omega is not None else (-math.inf, math.inf)
    if t - d < lo:
        return (t + d, t + 2 * d)
    if t + d > hi:
        return (t - d, t - 2 * d)
    return (t - d, t + d)


def classify(
    c: ComposedPhi,
    t_samples,
    tols: ToleranceConfig | None = None,
    omega: tuple | None = None,
) -> ClassReport:
    """Class verdicts for phiE over the sampled t.

    A class holds iff its axioms pass at every sampled t.  With
    ``tols.null_exceptions`` a failing t is excused for a class when the
    class holds at two nearby probes t +- 1e-3 * spacing (inside ``omega``):
    isolated failures are a null set.
    """
    tols = tols or ToleranceConfig()
    T = np.asarray(t_samples, dtype=float).ravel()
    if T.size == 0:
        raise ValueError("t_samples must be nonempty")
    if omega is not None and (T.min() < omega[0] or T.max() > omega[1]):
        raise ValueError("t samples must lie in omega")
    profiles = _profiles(c, T, tols)

    failing = {
        cls: [i for i, p in enumerate(profiles) if not p.passes(ax)]
        for cls, ax in CLASS_AXIOMS.items()
    }
    excused = {cls: [] for cls in CLASSES}
    if tols.null_exceptions:
        bad = sorted({i for v in failing.values() for i in v})
        if bad:
            if T.size > 1:
                spacing = float(np.min(np.diff(np.sort(np.unique(T))))) if np.unique(T).size > 1 else 1.0
            elif omega is not None:
                spacing = omega[1] - omega[0]
            else:
                spacing = 1.0
            probes = [q for i in bad for q in _null_probes(T[i], spacing, omega)]
            try:
                pp = _profiles(c, np.array(probes), tols)
            except UndefinedEvaluationError:
                pp = None
            if pp is not None:
                for k, i in enumerate(bad):
                    p1, p2 = pp[2 * k], pp[2 * k + 1]
                    for cls, ax in CLASS_AXIOMS.items():
                        if i in failing[cls] and p1.passes(ax) and p2.passes(ax):
                            excused[cls].append(i)

    verdicts, failures = {}, {}
    for cls in CLASSES:
        remaining = [i for i in failing[cls] if i not in excused[cls]]
        verdicts[cls] = not remaining
        if remaining:
            i = remaining[0]
            axiom, record = profiles[i].first_failure(CLASS_AXIOMS[cls])
            failures[cls] = {"t": _f(T[i]), "axiom": axiom, "witness": record.witness}

    viol = c.map.range_violations(T, tols.u_merged)
    return ClassReport(
        profiles=profiles,
        verdicts=verdicts,
        chain_consistent=chain_holds(verdicts),
        failures=failures,
        excused={k: [_f(T[i]) for i in v] for k, v in excused.items() if v},
        range_violations=[{"t": a, "u": b} for a, b in viol[:5]] + (
            [{"count": len(viol)}] if len(viol) > 5 else []),
    )


def raw_classify(phi: PhiSpec, t_samples, tols: ToleranceConfig | None = None,
                 omega: tuple | None = None) -> ClassReport:
    """``classify`` with the identity map."""
    return classify(ComposedPhi(phi, IDENTITY_MAP), t_samples, tols, omega)
