import pytest

from eorlicz.classify import classify
from eorlicz.expr import ComposedPhi, PhiSpec, PlaneMap
from eorlicz.verify import (
    OMEGA,
    T_SAMPLES,
    SuiteReport,
    check_chain,
    check_closure,
    check_inclusion,
    check_non_reversals,
    combine_phi,
    compare_norms,
    corpus_functions,
    draw_pair,
    gen_young,
    run_suite,
)


def verdicts(phi, map_t="t", map_u="u"):
    c = ComposedPhi(phi if isinstance(phi, PhiSpec) else PhiSpec.parse(phi), PlaneMap.parse(map_t, map_u))
    return classify(c, T_SAMPLES, omega=OMEGA).verdicts


# generator ----------------------------------------------------------------------

@pytest.mark.parametrize("seed", [0, 1, 17])
def test_gen_young_is_deterministic_and_young(seed):
    a, b = gen_young(seed), gen_young(seed)
    assert a.to_dict() == b.to_dict()
    assert classify(a.composed, T_SAMPLES, omega=OMEGA).verdicts["e_young"]


def test_draws_differ_across_seeds():
    assert len({str(draw_pair(s).composed) for s in range(20)}) == 20


# closure ------------------------------------------------------------------------

def test_sum_of_square_and_exponential_tail():
    phi = combine_phi("sum", [PhiSpec.parse("u^2"), PhiSpec.parse("exp(u) - 1 - u")])
    assert verdicts(phi)["e_young"]


def test_max_of_even_powers_is_n_function():
    phi = combine_phi("max_phi", [PhiSpec.parse("abs(u)^2"), PhiSpec.parse("abs(u)^4")])
    assert verdicts(phi)["e_n"]


def test_scale_by_zero_is_a_diagnostic():
    rep = check_closure("e_young", "scale", cases=5, c=0.0)
    assert rep.ok and rep.cases_run == 0
    (d,) = rep.diagnostics
    assert d["in_class"] is False and d["failure"]["axiom"] == "limit_value_inf"


def test_negative_scale_rejected():
    with pytest.raises(ValueError):
        check_closure("e_young", "scale", cases=1, c=-1.0)


@pytest.mark.parametrize("op", ["sum", "scale", "max_phi", "map_sum", "map_scale", "map_compose",
                                "map_max", "uniform_limit"])
def test_closure_small_suites_pass(op):
    rep = check_closure("e_young", op, cases=8, seed=3)
    assert rep.ok, rep.failures
    assert rep.cases_passed + len(rep.failures) == rep.cases_run == 8


def test_map_min_counterexample_is_reported():
    # min of two crossing power maps is not convex; the suite records it
    rep = check_closure("e_young", "map_min", cases=10, seed=0)
    assert not rep.ok
    f = rep.failures[0]
    assert f["statement"] == "closure/e_young/map_min"
    assert f["witness"]["axiom"] == "convex_in_u"


def test_closure_is_deterministic():
    a = check_closure("e_orlicz", "sum", cases=5, seed=9).to_dict()
    b = check_closure("e_orlicz", "sum", cases=5, seed=9).to_dict()
    assert a == b


# chain ----------------------------------------------------------------------------

def test_chain_and_non_reversals():
    rep = check_chain(cases=30, seed=7)
    assert rep.ok and rep.cases_passed == 30
    nr = check_non_reversals()
    assert nr.ok and nr.cases_passed == 3


# inclusion ------------------------------------------------------------------------

FNS = corpus_functions()


def comp(phi, map_u="u"):
    return ComposedPhi(PhiSpec.parse(phi), PlaneMap.parse("t", map_u))


def test_corpus_functions():
    assert sorted(FNS) == sorted(["const_0.5", "const_1", "const_2", "t", "t^2", "osc", "step", "spike"])


@pytest.mark.parametrize("family", ["orlicz", "lorentz", "morrey", "sobolev"])
def test_doubling_the_map_doubles_the_norm(family):
    c1, c2 = comp("u^2"), comp("u^2", "2*u")
    bad, _ = compare_norms(c1, c2, family, FNS)
    assert bad is None
    bad, _ = compare_norms(c2, c1, family, {"t": FNS["t"]})
    assert bad is not None


def test_dominated_phi_orders_norms():
    bad, _ = compare_norms(comp("u^2"), comp("u^2 + u^4"), "orlicz", FNS)
    assert bad is None


def test_weak_cross_same_function():
    c = comp("u^2")
    bad, ratios = compare_norms(c, c, "orlicz", FNS, weak_cross=True)
    assert bad is None and len(ratios) == len(FNS)
    assert all(r >= 1.0 - 1e-9 for r in ratios)


@pytest.mark.parametrize("mode", ["map_mono", "phi_mono"])
def test_inclusion_small_suites(mode):
    rep = check_inclusion(mode, "orlicz", cases=4, seed=1)
    assert rep.ok, rep.failures
    assert rep.cases_run + rep.skipped == 4


def test_inclusion_rejects_unknown_family():
    with pytest.raises(ValueError):
        check_inclusion("map_mono", "besov", cases=1)


# reports ----------------------------------------------------------------------------

def test_report_bookkeeping():
    r = SuiteReport("x")
    r.passed()
    r.failed(3, "x", {"why": 1})
    r.skip()
    assert (r.cases_run, r.cases_passed, r.skipped, r.ok) == (2, 1, 1, False)
    m = r.merge(SuiteReport("y", 1, 1))
    assert m.cases_run == 3 and m.suite == "x+y"


def test_run_suite_names():
    names = [r.suite for r in run_suite("chain", seed=2, cases=5)]
    assert names == ["chain", "non_reversal"]
    with pytest.raises(ValueError):
        run_suite("bogus")
