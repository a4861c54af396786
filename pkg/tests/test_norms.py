import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eorlicz.expr import ComposedPhi, PhiSpec, PlaneMap
from eorlicz.measure import IntervalSpace, SampledFn, sample
from eorlicz.norms import (
    LorentzConfig,
    MorreyConfig,
    NonMonotonePredicateError,
    PreconditionError,
    SobolevConfig,
    derivatives,
    lorentz_norm,
    luxemburg_norm,
    morrey_norm,
    solve_infimum,
    sobolev_norm,
    weak_orlicz_norm,
)

S = IntervalSpace(0.0, 1.0, 257)
FINE = IntervalSpace(0.0, 1.0, 2049)
SQ = ComposedPhi(PhiSpec.parse("u^2"))


def comp(phi, map_t="t", map_u="u"):
    return ComposedPhi(PhiSpec.parse(phi), PlaneMap.parse(map_t, map_u))


# solver -----------------------------------------------------------------------

def test_solver_threshold():
    r = solve_infimum(lambda lam: lam >= 3.0)
    assert r.value == pytest.approx(3.0, rel=1e-10)
    assert r.bracket[0] <= 3.0 <= r.bracket[1]


def test_solver_extremes():
    assert solve_infimum(lambda lam: lam >= 0).value == 0.0
    assert solve_infimum(lambda lam: lam < 0).value == math.inf


def test_solver_rejects_non_monotone_predicate():
    with pytest.raises(NonMonotonePredicateError):
        solve_infimum(lambda lam: (lam >= 3.0) & (lam < 5.0))


# Luxemburg --------------------------------------------------------------------

def test_luxemburg_oracles():
    assert luxemburg_norm(sample("1", S), SQ).value == pytest.approx(1.0, abs=1e-8)
    assert luxemburg_norm(sample("t", FINE), SQ).value == pytest.approx(3 ** -0.5, rel=1e-6)
    got = luxemburg_norm(sample("1", S), comp("exp(t + u) - 1", "u", "u")).value
    assert got == pytest.approx(2 / math.log(2), abs=1e-6)


@pytest.mark.parametrize("p", [1, 2, 4])
def test_lp_reduction(p):
    c = comp(f"u^{p}")
    assert luxemburg_norm(sample("1", IntervalSpace(0, 3, 65)), c).value == pytest.approx(3 ** (1 / p), rel=1e-6)
    assert luxemburg_norm(sample("t", FINE), c).value == pytest.approx((1 / (p + 1)) ** (1 / p), rel=1e-6)


def test_infinite_values_stay_finite_norm():
    # phiE jumps to +inf at u = 1, so the norm of f = 2 is exactly 2
    assert luxemburg_norm(sample("2", S), comp("if(u < 1, u, inf)")).value == pytest.approx(2.0, rel=1e-9)


def test_zero_function():
    z = sample("0", S)
    for fn in (luxemburg_norm, weak_orlicz_norm, lorentz_norm):
        assert fn(z, SQ).value == 0.0
    assert morrey_norm(z, SQ, MorreyConfig.parse("r^(-1)")).value == 0.0
    assert sobolev_norm(z, SQ).value == 0.0


def test_precondition():
    with pytest.raises(PreconditionError):
        luxemburg_norm(sample("1", S), comp("sqrt(u)"))
    # skipping the check is allowed
    assert luxemburg_norm(sample("1", S), comp("sqrt(u)"), check=False).value > 0


# weak -------------------------------------------------------------------------

@pytest.mark.parametrize("p", [1, 2, 4])
def test_weak_constant(p):
    assert weak_orlicz_norm(sample("1", S), comp(f"u^{p}")).value == pytest.approx(1.0, abs=1e-8)


def test_weak_linear_closed_form():
    # sup_u u^2 (1 - lam u) peaks at u = 2/(3 lam): lam^2 = 4/27
    got = weak_orlicz_norm(sample("t", FINE), SQ).value
    assert got == pytest.approx(math.sqrt(4 / 27), rel=1e-3)


@pytest.mark.parametrize("phi", ["u", "u^2", "u^4", "exp(2*u) - 1", "cosh(u) - 1"])
@pytest.mark.parametrize("f", ["0.5", "2", "t", "t^2", "if(t <= 0.5, 1, 0)"])
def test_weak_below_strong(phi, f):
    g = sample(f, S)
    c = comp(phi)
    assert weak_orlicz_norm(g, c).value <= luxemburg_norm(g, c).value + 1e-9


# Sobolev ----------------------------------------------------------------------

def test_sobolev_examples():
    assert sobolev_norm(sample("t", FINE), SQ, SobolevConfig(1)).value == pytest.approx(1 + 3 ** -0.5, abs=1e-4)
    assert sobolev_norm(sample("3", S), SQ, SobolevConfig(2)).value == pytest.approx(3.0, abs=1e-6)
    f = sample("t^2", S)
    assert sobolev_norm(f, SQ, SobolevConfig(0)).value == luxemburg_norm(f, SQ).value


def test_derivatives_exact_for_quadratics():
    f = sample("t^2 - t", S)
    d0, d1, d2 = derivatives(f, 2)
    assert np.allclose(d1, 2 * S.nodes - 1, atol=1e-10)
    assert np.allclose(d2, 2.0, atol=1e-6)


def test_sobolev_order_validated():
    with pytest.raises(ValueError):
        SobolevConfig(3)


# Morrey -----------------------------------------------------------------------

def test_morrey_single_ball():
    cfg = MorreyConfig.parse("r^(-1)", [0.5], [0.5])
    assert morrey_norm(sample("1", S), SQ, cfg).value == pytest.approx(math.sqrt(0.5), abs=1e-6)


def test_morrey_covering_ball_is_luxemburg():
    f = sample("t", S)
    cfg = MorreyConfig.parse("1", [0.5], [0.6])
    assert morrey_norm(f, SQ, cfg).value == pytest.approx(luxemburg_norm(f, SQ).value, rel=1e-9)


def test_morrey_default_lattice():
    cfg = MorreyConfig.parse("r^(-1)").resolved(S)
    assert len(cfg.centers) == 33 and len(cfg.radii) == 9
    assert cfg.radii[0] == 1.0 and cfg.radii[-1] == 2.0 ** -8


def test_morrey_bad_weight():
    # phi(0.5) = -0.5 is rejected; the growth to phi(1) = 0 is also flagged
    with pytest.raises(ValueError), pytest.warns(UserWarning):
        morrey_norm(sample("1", S), SQ, MorreyConfig.parse("r - 1", [0.5], [0.5, 1.0]))


# Lorentz ----------------------------------------------------------------------

def test_lorentz_unit_weight_is_luxemburg():
    f = sample("t", S)
    assert lorentz_norm(f, SQ).value == pytest.approx(luxemburg_norm(f, SQ).value, rel=1e-6)
    assert lorentz_norm(sample("1", S), SQ, weak=True).value == pytest.approx(1.0, abs=1e-6)


def test_lorentz_cumulative_weight_differs():
    f = sample("t", S)
    literal = lorentz_norm(f, SQ, LorentzConfig.parse("1", "cumulative_W")).value
    # int_0^1 (1-s)^2 s ds / lam^2 = 1/12 / lam^2
    assert literal == pytest.approx(math.sqrt(1 / 12), rel=1e-3)


def test_lorentz_negative_weight():
    with pytest.raises(ValueError):
        lorentz_norm(sample("1", S), SQ, LorentzConfig.parse("s - 0.5"))


# properties -------------------------------------------------------------------

NORMS = {
    "luxemburg": lambda f, c: luxemburg_norm(f, c, check=False),
    "weak": lambda f, c: weak_orlicz_norm(f, c, check=False),
    "sobolev": lambda f, c: sobolev_norm(f, c, check=False),
    "morrey": lambda f, c: morrey_norm(f, c, MorreyConfig.parse("r^(-1)", [0.25, 0.75], [0.5, 0.25]),
                                       check=False),
    "lorentz": lambda f, c: lorentz_norm(f, c, check=False),
}
SMALL = IntervalSpace(0.0, 1.0, 33)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(NORMS)), st.lists(st.floats(0, 10), min_size=33, max_size=33),
       st.sampled_from(["u^2", "exp(u) - 1", "u + u^3"]), st.floats(0.05, 20))
def test_homogeneity(kind, vals, phi, alpha):
    f = SampledFn.from_values(SMALL, vals)
    c = comp(phi)
    base = NORMS[kind](f, c).value
    scaled = NORMS[kind](f.scaled(alpha), c).value
    assert scaled == pytest.approx(alpha * base, rel=1e-8, abs=1e-300)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=33, max_size=33), st.floats(1.0, 3.0), st.floats(1.0, 4.0))
def test_domination_orders_norms(vals, p, k):
    # pointwise phi1 <= phi2 gives ||f||_1 <= ||f||_2
    f = SampledFn.from_values(SMALL, vals)
    c1, c2 = comp(f"u^{p!r}"), comp(f"{k!r} * u^{p!r} + u^4")
    for kind in NORMS:
        a, b = NORMS[kind](f, c1).value, NORMS[kind](f, c2).value
        assert a <= b + 1e-8 * (1 + b)
