"""Shared strategies and fixtures."""

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from superspin import catalog
from superspin.coeffring import Expression, GaussianRational, R2, RHO2, coordinate, parameter

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

COORDS_2D = ("x", "y")
COORDS_3D = ("x", "y", "z")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussian = st.builds(GaussianRational, small_fractions, small_fractions)


@st.composite
def polynomials(draw, coords=COORDS_2D, max_degree=3, params=("gamma",), max_terms=4):
    symbols = [coordinate(c) for c in coords] + [parameter(p) for p in params]
    out = Expression()
    for _ in range(draw(st.integers(0, max_terms))):
        term = Expression.const(draw(gaussian))
        for s in symbols:
            k = draw(st.integers(0, max_degree))
            if k:
                term = term * Expression.sym(s) ** k
        out = out + term
    return out


@st.composite
def expressions(draw, coords=COORDS_2D, max_degree=2):
    """Polynomials divided by a power product of the registered bases."""
    e = draw(polynomials(coords, max_degree))
    base = RHO2 if len(coords) == 2 else R2
    k = draw(st.integers(0, 2))
    if k:
        e = e * Expression(base).inverse() ** k
    m = draw(st.integers(0, 1))
    if m:
        e = e / Expression.sym(coordinate("x"))
    return e


def rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


@pytest.fixture(scope="session")
def systems():
    """Every catalog system, built once in verified mode."""
    return {sid: catalog.build_system(sid) for sid in catalog.SYSTEM_IDS}


def multi_indices(n_coords: int, max_order: int):
    if n_coords == 0:
        yield ()
        return
    for k in range(max_order + 1):
        for rest in multi_indices(n_coords - 1, max_order - k):
            yield (k,) + rest


def random_diffop(rng: random.Random, coords=COORDS_2D, order=2, degree=2):
    """Random normal-form operator with complex polynomial coefficients."""
    from superspin.diffop import ScalarDiffOp

    terms = {}
    for beta in multi_indices(len(coords), order):
        if rng.random() < 0.6:
            terms[beta] = catalog.random_polynomial(coords, degree, rng, complex_coeffs=True)
    return ScalarDiffOp(coords, terms)


@st.composite
def diffops(draw, coords=COORDS_2D, order=2, degree=2):
    return random_diffop(random.Random(draw(st.integers(0, 2**32))), coords, order, degree)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
