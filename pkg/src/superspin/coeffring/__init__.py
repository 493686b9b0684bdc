"""Exact coefficient ring: Gaussian rationals, polynomials, restricted rational
expressions and jet variables of formal functions."""

from .errors import ExpressionClassError, ParseError, PoleError, UnboundSymbolError
from .expr import DEFAULT_BASES, R2, RHO2, Expression, as_expression, factor_over_bases
from .parser import Context, context_2d, context_3d, parse_expr
from .poly import Polynomial
from .scalars import ONE, ZERO, GaussianRational, I, as_scalar
from .symbols import (
    COORDINATE,
    JET,
    PARAMETER,
    Symbol,
    antiderivative_jet,
    coordinate,
    free_jet,
    jet_base,
    parameter,
    radial_jet,
)


def differentiate(e: Expression, c: str) -> Expression:
    return as_expression(e).diff(c)


def substitute(e: Expression, bindings) -> Expression:
    return as_expression(e).substitute(bindings)


def evaluate(e: Expression, point=None, params=None) -> GaussianRational:
    return as_expression(e).evaluate(point, params)


def x_(name: str) -> Expression:
    """Coordinate ``name`` as an expression."""
    return Expression.sym(coordinate(name))


def p_(name: str) -> Expression:
    """Parameter ``name`` as an expression."""
    return Expression.sym(parameter(name))


__all__ = [
    "COORDINATE", "JET", "PARAMETER", "DEFAULT_BASES", "R2", "RHO2", "ONE", "ZERO", "I",
    "Context", "Expression", "ExpressionClassError", "GaussianRational", "ParseError",
    "PoleError", "Polynomial", "Symbol", "UnboundSymbolError",
    "antiderivative_jet", "as_expression", "as_scalar", "context_2d", "context_3d",
    "coordinate", "differentiate", "evaluate", "factor_over_bases", "free_jet",
    "jet_base", "p_", "parameter", "parse_expr", "radial_jet", "substitute", "x_",
]
