from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quipqasm.angles import (
    AngleError,
    BinOp,
    Const,
    FuncCall,
    Num,
    contains_call,
    evaluate,
    fold,
    parse_expr,
    render,
)


@pytest.mark.parametrize(
    "text, value",
    [
        ("pi", math.pi),
        ("pi / 2", math.pi / 2),
        ("-pi/4", -math.pi / 4),
        ("2*arcsin(1)", math.pi),
        ("cos(pi/3)", 0.5),
        ("tau - pi", math.pi),
        ("2 ** 3", 8.0),
        ("ln(euler)", 1.0),
        ("mod(7, 3)", 1.0),
        ("1e-3", 1e-3),
    ],
)
def test_evaluate(text, value):
    assert evaluate(parse_expr(text)) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["pi +", "foo(1)", "sin(1, 2)", "(1", "x"])
def test_malformed_expressions_are_rejected(text):
    with pytest.raises(AngleError):
        evaluate(parse_expr(text))


def test_domain_error_is_an_angle_error():
    with pytest.raises(AngleError):
        evaluate(parse_expr("sqrt(-1)"))


def test_contains_call():
    assert contains_call(parse_expr("1 + sin(pi)"))
    assert not contains_call(parse_expr("pi / 4"))


def test_fold_gives_a_literal():
    assert fold(BinOp("/", Const("pi"), Num(2.0))) == Num(math.pi / 2)


@pytest.mark.parametrize(
    "expr",
    [
        BinOp("-", Num(1.0), BinOp("-", Num(2.0), Num(3.0))),
        BinOp("/", Const("pi"), BinOp("*", Num(2.0), Num(4.0))),
        FuncCall("sin", (BinOp("+", Num(0.5), Const("pi")),)),
    ],
)
def test_render_keeps_structure(expr):
    assert parse_expr(render(expr)) == expr


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@given(finite)
def test_numbers_round_trip_exactly(x):
    assert evaluate(parse_expr(render(Num(x)))) == x
