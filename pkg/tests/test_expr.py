import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eorlicz import extreal as xr
from eorlicz.expr import (
    Binary,
    ComposedPhi,
    Conditional,
    Constant,
    ExprSyntaxError,
    PhiSpec,
    PlaneMap,
    Unary,
    UnboundVariableError,
    Variable,
    eval_array,
    eval_expr,
    free_vars,
    parse_expr,
    substitute,
    to_text,
)


def test_parse_product_with_power():
    e = parse_expr("t*u^2")
    assert e == Binary("*", Variable("t"), Binary("^", Variable("u"), Constant(2.0)))


def test_parse_conditional():
    e = parse_expr("if(u > 1, t*ln(u), 0)")
    assert e == Conditional(">", Variable("u"), Constant(1.0),
                            Binary("*", Variable("t"), Unary("ln", Variable("u"))), Constant(0.0))


@pytest.mark.parametrize("text,offset", [("u +* 2", 3), ("(u", 2), ("u 2", 2), ("foo(u)", 0)])
def test_syntax_error_offset(text, offset):
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr(text)
    assert err.value.position == offset


def test_power_is_right_associative():
    assert eval_expr(parse_expr("2^3^2"), {}) == 512.0


def test_unknown_variable_rejected():
    with pytest.raises(ExprSyntaxError):
        parse_expr("t*s")


def test_eval_and_composition():
    phi = PhiSpec.parse("t*u^2")
    assert eval_expr(phi.body, {"t": -2.0, "u": 3.0}) == -18.0
    c = ComposedPhi(phi, PlaneMap.parse("abs(t)", "u"))
    assert float(c(-2.0, 3.0)) == 18.0


def test_exp_of_infinity():
    assert eval_expr(parse_expr("exp(u)"), {"u": math.inf}) == math.inf


def test_untaken_branch_not_evaluated():
    assert eval_expr(parse_expr("if(u>1, 1/0, 0)"), {"u": 0.5}) == 0.0
    # vectorised: each element only sees its own branch
    got = eval_array(parse_expr("if(u>1, 1/0, u)"), {"u": np.array([0.5, 2.0])})
    assert got[0] == 0.5 and math.isnan(got[1])


def test_inf_literal():
    assert eval_expr(parse_expr("if(u < 1, 0, inf)"), {"u": 1.0}) == math.inf


@pytest.mark.parametrize("text,allowed,want", [
    ("t*u^2", ("t", "u"), {"t", "u"}),
    ("3.5", ("t", "u"), set()),
    ("if(u<1, s, r)", ("u", "s", "r"), {"u", "s", "r"}),
])
def test_free_vars(text, allowed, want):
    assert free_vars(parse_expr(text, allowed)) == want


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        eval_expr(parse_expr("t+u"), {"u": 1.0})


def test_substitute():
    e = substitute(parse_expr("t*u"), {"t": parse_expr("abs(t)"), "u": parse_expr("2*u")})
    assert to_text(e) == "abs(t) * (2 * u)"


# extended reals -------------------------------------------------------------

def test_zero_times_infinity_is_zero():
    assert xr.mul(0.0, math.inf) == 0.0
    assert eval_expr(parse_expr("0*exp(u)"), {"u": math.inf}) == 0.0


@pytest.mark.parametrize("text,u", [("exp(u) - exp(u)", math.inf), ("1/u", 0.0), ("ln(u)", -1.0)])
def test_undefined_propagates(text, u):
    assert math.isnan(eval_expr(parse_expr(text), {"u": u}))


def test_ln_zero_is_minus_infinity():
    assert eval_expr(parse_expr("ln(u)"), {"u": 0.0}) == -math.inf


def test_json_encoding_round_trip():
    for x in (1.5, math.inf, -math.inf):
        assert xr.from_json(xr.to_json(x)) == x
    assert math.isnan(xr.from_json(xr.to_json(math.nan)))


def test_overflow_recovered_by_high_precision():
    # both terms overflow in doubles; their difference is finite
    got = eval_expr(parse_expr("exp(u) - exp(u - 1e-300)"), {"u": 800.0})
    assert got == 0.0
    got = eval_expr(parse_expr("exp(u)/exp(u - 1)"), {"u": 1000.0})
    assert got == pytest.approx(math.e, rel=1e-12)


def test_saturate_marks_overflow():
    e = parse_expr("exp(u)")
    assert eval_array(e, {"u": np.array(1000.0)}, saturate=True) == np.finfo(float).max
    assert eval_array(e, {"u": np.array(math.inf)}, saturate=True) == math.inf


# round trip -----------------------------------------------------------------

_leaf = st.one_of(
    st.sampled_from([Variable("t"), Variable("u")]),
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).map(Constant),
    st.just(Constant(math.inf)),
)


def _extend(children):
    return st.one_of(
        st.builds(Unary, st.sampled_from(["neg", "abs", "exp", "ln", "sqrt", "cosh"]), children),
        st.builds(Binary, st.sampled_from(["+", "-", "*", "/", "^", "min", "max"]), children, children),
        st.builds(Conditional, st.sampled_from(["<", "<=", ">", ">=", "=="]),
                  children, children, children, children),
    )


trees = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_print_parse_round_trip(e):
    assert parse_expr(to_text(e)) == e


@settings(max_examples=200, deadline=None)
@given(trees, st.floats(-5, 5), st.floats(-5, 5))
def test_scalar_and_vector_evaluation_agree(e, t, u):
    a = eval_expr(e, {"t": t, "u": u})
    b = eval_array(e, {"t": np.array([t, t]), "u": np.array([u, u])})
    assert (math.isnan(a) and np.isnan(b).all()) or (b == a).all()
