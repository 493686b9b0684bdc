"""Scalars, polynomials, restricted rational expressions, jets and the parser."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import COORDS_2D, COORDS_3D, expressions, gaussian, polynomials
from superspin.coeffring import (
    I,
    Expression,
    ExpressionClassError,
    GaussianRational,
    ParseError,
    PoleError,
    UnboundSymbolError,
    antiderivative_jet,
    context_2d,
    context_3d,
    differentiate,
    evaluate,
    free_jet,
    parameter,
    parse_expr,
    radial_jet,
    substitute,
)


def P2(text):
    return parse_expr(text, context_2d())


def P3(text):
    return parse_expr(text, context_3d())


# scalars


def test_gaussian_rational_reduced():
    z = GaussianRational(Fraction(4, 6), Fraction(-3, -9))
    assert z.re == Fraction(2, 3)
    assert z.im == Fraction(1, 3)
    assert z.re.denominator > 0


def test_imaginary_unit_squares_to_minus_one():
    assert I * I == GaussianRational(-1)


def test_gaussian_inverse_exact():
    z = GaussianRational(3, -4)
    assert z * z.inverse() == 1
    assert z.inverse() == GaussianRational(Fraction(3, 25), Fraction(4, 25))


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


@given(gaussian, gaussian, gaussian)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1


# ring operations


def test_difference_of_squares():
    assert P2("(x+y)*(x-y)") == P2("x^2-y^2")


def test_registered_base_cancels():
    assert P2("(x^2+y^2)") * P2("1/(x^2+y^2)") == Expression.const(1)


def test_additive_inverse_with_parameter():
    assert not P2("gamma*(i*x) + gamma*(-i*x)")


def test_unregistered_division_rejected():
    with pytest.raises(ExpressionClassError):
        P2("x") / P2("x+1")


def test_user_registered_base():
    base = P2("x+1")
    with pytest.raises(ExpressionClassError):
        base.inverse()
    inv = base.inverse(bases=(base.num,))
    assert inv * base == Expression.const(1)


@given(expressions(), expressions(), expressions())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert not (a - a)


@given(expressions(COORDS_3D))
def test_canonical_zero_3d(a):
    assert (a + a) - 2 * a == Expression()


# differentiation


def test_power_rule():
    assert differentiate(P2("x^2*y"), "x") == P2("2*x*y")


def test_free_jet_derivative_is_jet():
    d = differentiate(P2("V1"), "x")
    assert d == P2("V1_x")
    assert d.jets() == {free_jet("V1", COORDS_2D, (1, 0))}


def test_radial_chain_rule():
    f = Expression.sym(radial_jet("f", COORDS_2D))
    fp = Expression.sym(radial_jet("f", COORDS_2D, 1))
    assert differentiate(f, "y") == 2 * P2("y") * fp


def test_antiderivative_rule():
    W = Expression.sym(antiderivative_jet("W", "V1", "x"))
    V1 = Expression.sym(free_jet("V1", ("x",)))
    assert differentiate(W, "x") == V1
    assert not differentiate(W, "y")


def test_quotient_derivative():
    assert differentiate(P3("1/(x^2+y^2+z^2)"), "x") == P3("-2*x/(x^2+y^2+z^2)^2")


@given(expressions())
def test_mixed_partials_commute(e):
    assert e.diff("x").diff("y") == e.diff("y").diff("x")


def test_mixed_partials_commute_on_jets():
    e = P2("V0*V1_x + x*V1^2/(x^2+y^2)")
    assert e.diff("x").diff("y") == e.diff("y").diff("x")


@given(expressions(), expressions())
def test_leibniz(a, b):
    assert (a * b).diff("x") == a.diff("x") * b + a * b.diff("x")


@given(st.integers(0, 3))
def test_angular_derivative_kills_radial(order):
    x, y = parse_expr("x"), parse_expr("y")
    for coords in (COORDS_2D, COORDS_3D):
        f = Expression.sym(radial_jet("f", coords, order))
        assert not (y * f.diff("x") - x * f.diff("y"))


# substitution


def test_classical_limit_substitution():
    assert not substitute(P3("hbar^2/(x^2+y^2+z^2)"), {parameter("hbar"): 0})


def test_jet_binding_fixes_derivatives():
    V1 = free_jet("V1", COORDS_3D)
    assert substitute(P3("V1_x"), {V1: P3("1/(x^2+y^2+z^2)")}) == P3("-2*x/(x^2+y^2+z^2)^2")


def test_partial_evaluation():
    assert substitute(P2("x + gamma*y"), {parameter("gamma"): 0}) == P2("x")


def test_radial_binding_must_be_radial():
    f = radial_jet("f", COORDS_2D)
    with pytest.raises(ExpressionClassError, match="non-radial"):
        substitute(Expression.sym(f), {f: P2("x")})


def test_radial_binding_derivatives():
    f = radial_jet("f", COORDS_2D)
    fp = Expression.sym(radial_jet("f", COORDS_2D, 1))
    # f = 1/u gives f' = -1/u^2
    assert substitute(fp, {f: P2("1/(x^2+y^2)")}) == P2("-1/(x^2+y^2)^2")


def test_antiderivative_binding_must_be_consistent():
    W = antiderivative_jet("W", "V1", "x")
    V1 = free_jet("V1", ("x",))
    with pytest.raises(ExpressionClassError, match="inconsistent"):
        substitute(Expression.sym(W), {W: P2("x^2"), V1: P2("x")})
    assert substitute(Expression.sym(W), {W: P2("x^2/2"), V1: P2("x")}) == P2("x^2/2")


# evaluation


def test_evaluate_inverse_square():
    assert evaluate(P3("1/(x^2+y^2+z^2)"), {"x": 1, "y": 2, "z": 2}) == Fraction(1, 9)


def test_evaluate_symmetric_zero():
    assert evaluate(P2("x^2-y^2"), {"x": 3, "y": 3}) == 0


def test_evaluate_with_parameter():
    assert evaluate(P2("gamma*x"), {"x": 2}, {"gamma": Fraction(1, 2)}) == 1


def test_evaluate_pole():
    with pytest.raises(PoleError):
        evaluate(P2("1/(x^2+y^2)"), {"x": 0, "y": 0})


def test_evaluate_unbound():
    with pytest.raises(UnboundSymbolError):
        evaluate(P2("gamma*x"), {"x": 1})


@given(expressions(), expressions(), st.fractions(1, 5, max_denominator=7), st.fractions(-5, -1, max_denominator=7), st.fractions(-3, 3, max_denominator=5))
def test_evaluate_is_a_homomorphism(a, b, x, y, g):
    point, params = {"x": x, "y": y}, {"gamma": g}
    ea, eb = evaluate(a, point, params), evaluate(b, point, params)
    assert evaluate(a + b, point, params) == ea + eb
    assert evaluate(a * b, point, params) == ea * eb


# parser


def test_parse_inverse_square():
    e = P3("1/(x^2+y^2+z^2)")
    assert e * P3("x^2+y^2+z^2") == Expression.const(1)


def test_parse_expansion_identity():
    assert not P2("(x+y)^2 - x^2 - 2*x*y - y^2")


def test_parse_unregistered_denominator():
    with pytest.raises(ParseError, match="registered"):
        P2("1/(x+1)")


@pytest.mark.parametrize(
    "text, pos",
    [("x + * y", 4), ("(x + y", 6), ("x ^ y", 4), ("x $ 2", 2)],
)
def test_parse_error_position(text, pos):
    with pytest.raises(ParseError) as info:
        P2(text)
    assert info.value.pos == pos


def test_parse_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier"):
        P2("q*x")


def test_parse_declares_unknown_parameters():
    e = parse_expr("c*x", context_2d(declare_unknown=True))
    assert e == Expression.sym(parameter("c")) * P2("x")


def test_parse_tolerates_surrounding_whitespace():
    assert P2("  x + 1  ") == P2("x+1")


def test_parse_negative_exponent():
    assert P2("x^-2") * P2("x^2") == Expression.const(1)


@given(expressions())
def test_print_parse_round_trip(e):
    assert P2(str(e)) == e


@given(polynomials(COORDS_3D, params=("gamma", "hbar")))
def test_print_parse_round_trip_3d(e):
    assert P3(str(e)) == e


def test_round_trip_with_jets():
    e = P3("V1*phi1_xz - 1/2*i*A2_y/(x^2+y^2+z^2)")
    assert P3(str(e)) == e
