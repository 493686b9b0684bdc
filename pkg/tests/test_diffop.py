"""Normal-form scalar differential operators."""

import random

import pytest
from hypothesis import given

from conftest import COORDS_2D, COORDS_3D, diffops, expressions, polynomials
from superspin import catalog
from superspin.coeffring import Expression, context_2d, parameter, parse_expr
from superspin.diffop import (
    ScalarDiffOp,
    angular_momentum,
    anticommutator,
    apply,
    commutator,
    compose,
    identity,
    laplacian,
    momentum,
    multiplication,
    partial,
    symmetrize,
)

C2 = COORDS_2D


def P(text):
    return parse_expr(text, context_2d())


def mult(text, coords=C2):
    return multiplication(coords, parse_expr(text, context_2d() if coords == C2 else None))


Dx, Dy = partial(C2, "x"), partial(C2, "y")
L3 = angular_momentum(C2, "z")


def test_identity_normal_form():
    one = identity(C2)
    assert one.order() == 0
    assert one.coefficient((0, 0)) == Expression.const(1)


def test_zero_coefficients_pruned():
    op = Dx - Dx
    assert op.is_zero()
    assert op == ScalarDiffOp.zero(C2)


def test_leibniz_derivative_then_multiplication():
    assert compose(Dx, mult("x")) == mult("x") * Dx + identity(C2)


def test_multiplication_then_derivative():
    op = compose(mult("x"), Dx)
    assert op.order() == 1
    assert op.coefficient((1, 0)) == P("x")
    assert op.coefficient((0, 0)) == Expression()


def test_angular_momentum_squared_on_x():
    # L3 x = i y and L3 (i y) = x
    assert apply(L3, P("x")) == P("i*y")
    assert apply(compose(L3, L3), P("x")) == P("x")
    assert apply(L3, apply(L3, P("x"))) == P("x")


def test_canonical_commutation():
    assert commutator(momentum(C2, "x"), mult("x")) == multiplication(C2, P("-i"))


def test_canonical_commutation_with_hbar():
    hbar = Expression.sym(parameter("hbar"))
    for k in C2:
        for l in C2:
            got = commutator(momentum(C2, k, hbar=True), mult(l))
            want = multiplication(C2, P("-i") * hbar) if k == l else ScalarDiffOp.zero(C2)
            assert got == want


def test_rotation_generator_against_translation():
    assert commutator(L3, Dx) == P("i") * Dy


@pytest.mark.parametrize("degree", range(4))
def test_rotation_commutator_on_monomials(degree):
    lhs = commutator(L3, Dx)
    for a in range(degree + 1):
        f = P(f"x^{a}*y^{degree - a}")
        direct = apply(L3, apply(Dx, f)) - apply(Dx, apply(L3, f))
        assert apply(lhs, f) == direct


@given(diffops())
def test_self_commutator_vanishes(A):
    assert commutator(A, A).is_zero()


@given(diffops(order=1), diffops(order=1), diffops(order=1))
def test_jacobi(A, B, C):
    total = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B))
    assert total.is_zero()


@given(diffops(), diffops())
def test_commutator_antisymmetric(A, B):
    assert commutator(A, B) == -commutator(B, A)
    assert anticommutator(A, B) == anticommutator(B, A)


@given(diffops(order=1), diffops(order=1), diffops(order=1))
def test_compose_associative(A, B, C):
    assert compose(compose(A, B), C) == compose(A, compose(B, C))


@given(diffops(), diffops())
def test_composition_order_bound(A, B):
    AB = compose(A, B)
    assert AB.order() <= A.order() + B.order()


@given(diffops(), diffops(), polynomials(C2, max_degree=4, params=()))
def test_compose_matches_apply(A, B, f):
    assert apply(compose(A, B), f) == apply(A, apply(B, f))


@given(diffops(COORDS_3D, order=1, degree=1), diffops(COORDS_3D, order=1, degree=1), expressions(COORDS_3D))
def test_compose_matches_apply_rational_3d(A, B, f):
    assert apply(compose(A, B), f) == apply(A, apply(B, f))


def test_symmetrize_without_derivative_term():
    assert symmetrize(P("y"), momentum(C2, "x")) == mult("-i*y") * Dx


def test_symmetrize_quadratic():
    assert symmetrize(P("x^2"), momentum(C2, "x")) == mult("-i*x^2") * Dx + mult("-i*x")


def test_symmetrize_jet_matches_half_derivative():
    got = symmetrize(P("A0"), momentum(C2, "x"))
    assert got == mult("-i*A0") * Dx + mult("-1/2*i*A0_x")


def test_symmetrize_rejects_second_order():
    with pytest.raises(ValueError):
        symmetrize(P("x"), Dx * Dx)


def test_angular_momentum_kills_radial_function():
    assert not apply(L3, P("x^2+y^2"))


def test_momentum_on_coordinate():
    assert apply(momentum(C2, "x"), P("x")) == P("-i")


@pytest.mark.parametrize("seed", range(5))
def test_rotation_invariance_of_radial_kinetic_part(seed):
    rng = random.Random(seed)
    u = P("x^2+y^2")
    f = Expression.sum(catalog._random_rational(rng) * u**k for k in range(4))
    V0 = Expression.sum(catalog._random_rational(rng) * u**k for k in range(3))
    H = laplacian(C2) * P("-1/2") + multiplication(C2, V0)
    assert not apply(commutator(H, L3), f)


def test_adjoint_involution():
    assert L3.adjoint() == L3
    assert Dx.adjoint() == -Dx
    assert momentum(C2, "y").adjoint() == momentum(C2, "y")


@given(diffops(order=1), diffops(order=1))
def test_adjoint_reverses_products(A, B):
    assert compose(A, B).adjoint() == compose(B.adjoint(), A.adjoint())


def test_printer_lists_coefficients_before_derivatives():
    assert str(compose(Dx, mult("x"))) == "(x)*Dx + (1)"
