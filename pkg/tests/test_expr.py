from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcspec.errors import ExpressionSyntaxError, UnknownIdentifier
from funcspec.expr import BinOp, Num, Pow, Var, evaluate, parse_expression, to_text, variables


def test_parses_polynomial():
    tree = parse_expression("x^2 + 3*x - 1")
    assert tree == BinOp("-", BinOp("+", Pow(Var("x"), 2), BinOp("*", Num(3), Var("x"))), Num(1))
    assert evaluate(tree, {"x": 4}, int) == 27


@pytest.mark.parametrize(
    "text,position",
    [("((x+1)", 6), ("2x", 1), ("x +", 3), ("x ^ y", 4), ("3 $ 4", 2), ("", 0), ("-x", 0)],
)
def test_syntax_errors_report_position(text, position):
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse_expression(text)
    assert exc.value.position == position


def test_power_is_right_binding():
    assert evaluate(parse_expression("2^3^2"), {}, int) == 2**9


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier):
        evaluate(parse_expression("x + y"), {"x": 1}, int)


def test_variables():
    assert variables(parse_expression("a*(b + 1)^2 - a")) == {"a", "b"}


def expressions():
    leaf = st.one_of(st.integers(0, 30).map(Num), st.sampled_from(["x", "y", "g1"]).map(Var))

    def extend(children):
        return st.one_of(
            st.builds(BinOp, st.sampled_from(["+", "-", "*"]), children, children),
            st.builds(Pow, children, st.integers(0, 4)),
        )

    return st.recursive(leaf, extend, max_leaves=12)


def eval_tree(node, env):
    return evaluate(node, env, int)


@settings(max_examples=200, deadline=None)
@given(expressions())
def test_print_parse_print_is_idempotent(node):
    text = to_text(node)
    again = parse_expression(text)
    assert to_text(again) == text
    env = {"x": 3, "y": -2, "g1": 5}
    assert eval_tree(again, env) == eval_tree(node, env)


@settings(max_examples=100, deadline=None)
@given(expressions(), st.integers(-5, 5), st.integers(-5, 5))
def test_evaluation_matches_python(node, x, y):
    def py(n):
        if isinstance(n, Num):
            return n.value
        if isinstance(n, Var):
            return {"x": x, "y": y, "g1": 7}[n.name]
        if isinstance(n, Pow):
            return py(n.base) ** n.exponent
        a, b = py(n.left), py(n.right)
        return a + b if n.op == "+" else a - b if n.op == "-" else a * b

    assert evaluate(node, {"x": x, "y": y, "g1": 7}, int) == py(node)
