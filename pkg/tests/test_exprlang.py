import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffspace import exprlang, jets
from ffspace.errors import EvaluationError, ParseError
from ffspace.exprlang import BinOp, Call, Coord, Neg, Num, evaluate, parse, pretty


def test_single_call():
    ast = parse("exp(t)", 3)
    assert ast == Call("exp", Coord(0))


def test_precedence_power_over_product():
    ast = parse("t^2*sin(x1)", 3)
    assert ast == BinOp("*", BinOp("^", Coord(0), Num(2.0)),
                        Call("sin", Coord(1)))


def test_coordinate_out_of_range():
    with pytest.raises(ParseError, match="out of range"):
        parse("x5", 3)


def test_unknown_symbol():
    with pytest.raises(ParseError, match="unknown symbol"):
        parse("foo", 3)


def test_unbalanced_parentheses():
    with pytest.raises(ParseError):
        parse("(t + 1", 3)


def test_empty_input():
    with pytest.raises(ParseError):
        parse("   ", 3)


def test_parse_error_carries_offset():
    with pytest.raises(ParseError) as err:
        parse("1 + $", 3)
    assert err.value.offset == 4


def test_power_right_associative():
    assert evaluate(parse("2^3^2", 1), [0.0]) == 512.0


def test_unary_minus_binds_the_base_of_a_power():
    # grammar: factor := base ('^' factor)?, base := '-' base
    assert evaluate(parse("-2^2", 1), [0.0]) == 4.0
    assert evaluate(parse("2^-1", 1), [0.0]) == 0.5


def test_basic_values():
    assert evaluate(parse("exp(t)", 3), [0.0, 0.0, 0.0]) == 1.0
    got = evaluate(parse("t^2*sin(x1)", 3), [2.0, math.pi / 2, 0.0])
    assert got == pytest.approx(4.0, rel=1e-15)


def test_division_by_zero():
    with pytest.raises(EvaluationError):
        evaluate(parse("1/t", 3), [0.0, 1.0, 1.0])


def test_log_sqrt_domain():
    with pytest.raises(EvaluationError):
        evaluate(parse("log(t)", 1), [0.0])
    with pytest.raises(EvaluationError):
        evaluate(parse("sqrt(t)", 1), [-1.0])


def test_jet_evaluation_matches_diffcore():
    ast = parse("t^3", 1)

    def f(x, y):
        return evaluate(ast, x)

    assert evaluate(ast, [2.0]) == 8.0
    assert jets.derive_x(f, [2.0], [0.0], (0,)) == pytest.approx(12.0)
    assert jets.derive_x(f, [2.0], [0.0], (0, 0)) == pytest.approx(12.0)


def _asts(depth):
    leaf = st.one_of(
        st.integers(0, 9).map(lambda v: Num(float(v))),
        st.floats(0.0, 5.0, allow_nan=False).map(lambda v: Num(round(v, 3))),
        st.integers(0, 2).map(Coord),
    )
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(st.sampled_from("+-*/^"), sub, sub).map(
                lambda t: BinOp(*t)),
            sub.map(Neg),
            st.tuples(st.sampled_from(exprlang.FUNCTIONS), sub).map(
                lambda t: Call(*t)),
        ),
        max_leaves=depth,
    )


@given(_asts(12))
@settings(max_examples=200, deadline=None)
def test_pretty_parse_round_trip(ast):
    assert parse(pretty(ast), 3) == ast


def test_pretty_keeps_structure_of_nested_right_operands():
    ast = BinOp("*", Coord(0), BinOp("/", Num(1.0), Coord(1)))
    assert parse(pretty(ast), 2) == ast
