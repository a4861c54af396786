import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eorlicz.measure import (
    DiscreteSpace,
    IntervalSpace,
    SampledFn,
    UndefinedIntegrandError,
    cumulative_weight,
    distribution,
    integrate,
    load_csv,
    rearrange,
    sample,
)

UNIT = IntervalSpace(0.0, 1.0, 101)


def test_integrate_constant_and_linear():
    assert integrate(UNIT, np.ones(101)) == 1.0
    assert integrate(UNIT, UNIT.nodes) == pytest.approx(0.5, abs=1e-12)


def test_integrate_infinite_node():
    v = np.ones(101)
    v[50] = math.inf
    assert integrate(UNIT, v) == math.inf


def test_integrate_undefined_raises():
    v = np.ones(101)
    v[3] = math.nan
    with pytest.raises(UndefinedIntegrandError):
        integrate(UNIT, v)


def test_integrate_discrete_weighted_sum():
    space = DiscreteSpace.of([0, 1, 2], [1.0, 2.0, 0.5])
    assert integrate(space, [1.0, 2.0, 4.0]) == 7.0


def test_distribution_examples():
    f = sample("t", UNIT)
    assert distribution(f, 0.25) == pytest.approx(0.75, abs=UNIT.max_cell)
    assert distribution(f, 1.0) == 0.0
    c = sample("3", UNIT)
    assert distribution(c, 2.0) == pytest.approx(UNIT.total_measure)


def test_rearrange_linear():
    f = sample("t", UNIT)
    r = rearrange(f)
    assert float(r(0.3)) == pytest.approx(0.7, abs=UNIT.max_cell)
    assert np.all(np.diff(r.levels) < 0)


def test_rearrange_constant():
    r = rearrange(sample("2", UNIT))
    assert r.levels.tolist() == [2.0]
    assert r.total_measure == pytest.approx(1.0)


def test_rearrange_discrete_sorting():
    space = DiscreteSpace.of([0, 1, 2], [1.0, 1.0, 1.0])
    r = rearrange(SampledFn.from_values(space, [3.0, 1.0, 2.0]))
    assert r.levels.tolist() == [3.0, 2.0, 1.0]
    assert r.breakpoints.tolist() == [1.0, 2.0, 3.0]


@pytest.mark.parametrize("omega,upper,want,tol", [("1", 0.8, 0.8, 1e-12), ("2*s", 1.0, 1.0, 1e-6),
                                                  ("0", 1.0, 0.0, 0.0)])
def test_cumulative_weight(omega, upper, want, tol):
    assert cumulative_weight(omega, upper) == pytest.approx(want, abs=tol)


def test_cumulative_weight_rejects_negative():
    with pytest.raises(ValueError):
        cumulative_weight("s - 1", 1.0)


def test_sample_stores_absolute_values():
    f = sample("t - 0.5", UNIT)
    assert f.values.min() == 0.0 and f.signed.min() == -0.5


def test_csv_uniform_becomes_interval(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("t,value\n0,1\n0.5,2\n1,3\n")
    f = load_csv(p)
    assert isinstance(f.space, IntervalSpace)
    assert f.values.tolist() == [1.0, 2.0, 3.0]


def test_csv_nonuniform_becomes_discrete(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("0,1\n0.2,1\n1,1\n")
    f = load_csv(p)
    assert isinstance(f.space, DiscreteSpace)
    assert f.space.weights.tolist() == pytest.approx([0.1, 0.5, 0.4])


@pytest.mark.parametrize("text", ["0,1\n0,2\n", "0,1\n", "0,1,2\n1,2,3\n", "0,1\nx,2\n"])
def test_csv_errors(tmp_path, text):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(ValueError):
        load_csv(p)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=3, max_size=40), st.floats(0, 100))
def test_rearrangement_is_equimeasurable(vals, u):
    space = IntervalSpace(0.0, 2.0, len(vals))
    f = SampledFn.from_values(space, vals)
    r = rearrange(f)
    assert r.measure_above(u) == pytest.approx(distribution(f, u), abs=1e-12)
    # the p-integral is preserved by the step function exactly
    assert float(np.sum(r.levels ** 2 * r.cell_measures)) == pytest.approx(
        float(np.sum(f.values ** 2 * space.weights)), rel=1e-12, abs=1e-12)
