"""Catalog Hamiltonians, integrals, gauge action and the numeric probe."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superspin import catalog, diffop, spinop
from superspin.catalog import (
    SYSTEM_IDS,
    VerificationError,
    apply_gauge,
    build_hamiltonian_2d,
    build_hamiltonian_3d,
    build_integrable_2d,
    build_spherical_3d,
    build_superintegrable_2d,
    build_superintegrable_3d,
    build_system,
    gauge_invariant,
    numeric_probe,
    sigma3_doubles,
)
from superspin.coeffring import (
    Expression,
    antiderivative_jet,
    context_2d,
    context_3d,
    free_jet,
    parameter,
    parse_expr,
    radial_jet,
)
from superspin.spinop import commutator, scalar, sigma

C2, C3 = ("x", "y"), ("x", "y", "z")


def P2(text):
    return parse_expr(text, context_2d(declare_unknown=True))


def P3(text):
    return parse_expr(text, context_3d())


def test_free_planar_hamiltonian():
    H = build_hamiltonian_2d(0, 0)
    assert H == scalar(diffop.laplacian(C2).left_mul(P2("-1/2")))


def test_radial_spin_orbit_has_no_zeroth_order_part():
    V1 = Expression.sym(radial_jet("V1", C2))
    H = build_hamiltonian_2d(0, V1)
    assert H[3] == diffop.multiplication(C2, V1) * diffop.angular_momentum(C2, "z")


def test_superintegrable_planar_hamiltonian_printed_form():
    spec = build_superintegrable_2d(verify=False)
    L3 = diffop.angular_momentum(C2, "z")
    want = (scalar(diffop.laplacian(C2).left_mul(P2("-1/2")) + diffop.multiplication(C2, P2("gamma^2*(x^2+y^2)/2")))
            + scalar(L3.left_mul(P2("gamma")), 3))
    assert spec.hamiltonian == want


@pytest.mark.parametrize("sid", SYSTEM_IDS)
def test_catalog_systems_verify(sid, systems):
    spec = systems[sid]
    assert spec.failures() == []
    assert spec.hermitian()


@pytest.mark.parametrize("sid", SYSTEM_IDS)
def test_catalog_systems_verify_with_hbar(sid):
    spec = build_system(sid, hbar=True)
    assert spec.failures() == []
    assert spec.hermitian()


def test_planar_generator_names(systems):
    assert list(systems["2d-superintegrable"].integrals) == ["L+", "X+", "Y+", "I+", "L-", "X-", "Y-", "I-"]


def test_projectors_sum_to_twice_identity(systems):
    g = systems["2d-superintegrable"].integrals
    assert g["I+"] + g["I-"] == sigma(C2, 0) * Expression.const(2)


def test_numeric_coupling():
    spec = build_superintegrable_2d(gamma=P2("3/2"))
    assert parameter("gamma") not in spec.potentials[0].symbols()


def test_perturbed_potential_fails_verification():
    with pytest.raises(VerificationError) as info:
        build_superintegrable_2d(v0_extra=P2("x"))
    assert info.value.generator in ("L+", "X+", "L-", "X-")
    spec = build_superintegrable_2d(v0_extra=P2("x"), verify=False)
    assert set(spec.failures()) == {"L+", "X+", "L-", "X-"}


def test_cartesian_degenerate_member_is_translation():
    spec = build_integrable_2d("cartesian")
    V1 = free_jet("V1", ("x",))
    F = free_jet("F", ("x",))
    W = antiderivative_jet("W", "V1", "x")
    zero = {V1: 0, F: 0, W: 0}
    X = spec.integrals["X"].substitute(zero)
    assert X == scalar(diffop.momentum(C2, "y"))
    assert spec.hamiltonian.substitute(zero) == build_hamiltonian_2d(0, 0)


def test_unknown_integrable_case():
    with pytest.raises(ValueError):
        build_integrable_2d("elliptic")


def test_unknown_system_id():
    with pytest.raises(KeyError):
        build_system("4d-superintegrable")


def test_superintegrable_spatial_hamiltonian():
    spec = build_superintegrable_3d()
    assert spec.potentials == (P3("1/(x^2+y^2+z^2)"), P3("1/(x^2+y^2+z^2)"))
    assert list(spec.integrals) == [f"{n}{k}" for n in ("J", "Pi", "S") for k in (1, 2, 3)]


def test_tracked_potentials_and_classical_limit():
    spec = build_superintegrable_3d("tracked")
    hbar = parameter("hbar")
    assert spec.potentials == (P3("hbar^2/(x^2+y^2+z^2)"), P3("hbar/(x^2+y^2+z^2)"))
    assert all(not V.substitute({hbar: 0}) for V in spec.potentials)


def test_tracked_generators_reduce_to_untracked():
    tracked = build_superintegrable_3d("tracked", verify=False)
    plain = build_superintegrable_3d(verify=False)
    one = {parameter("hbar"): 1}
    for n, X in tracked.integrals.items():
        assert X.substitute(one) == plain.integrals[n]
    assert tracked.hamiltonian.substitute(one) == plain.hamiltonian


def test_tracked_hamiltonian_homogeneous_in_hbar():
    # rescaling hbar -> 2 hbar with x fixed multiplies H by 4
    tracked = build_superintegrable_3d("tracked", verify=False)
    h = parameter("hbar")
    doubled = tracked.hamiltonian.substitute({h: Expression.sym(h) * 2})
    assert doubled == tracked.hamiltonian * Expression.const(4)


def test_invalid_hbar_mode():
    with pytest.raises(ValueError):
        build_superintegrable_3d("half")


def test_angular_momentum_algebra(systems):
    J = systems["3d-spherical"].integrals
    assert commutator(J["J1"], J["J2"]) == J["J3"] * P3("i")


def test_spherical_specializes_to_superintegrable(systems):
    inv = P3("1/(x^2+y^2+z^2)")
    bind = {radial_jet("V0", C3): inv, radial_jet("V1", C3): inv}
    spherical = systems["3d-spherical"].substitute(bind)
    sup = systems["3d-superintegrable"]
    assert spherical.hamiltonian == sup.hamiltonian
    for k in (1, 2, 3):
        assert spherical.integrals[f"J{k}"] == sup.integrals[f"J{k}"]


def test_spatial_hamiltonian_builder_matches_planar_restriction():
    # with V1 = 0 both builders are the kinetic term plus V0
    H3 = build_hamiltonian_3d(P3("x*y"), 0)
    assert H3.is_diagonal() and H3[3].is_zero()


@pytest.mark.parametrize("sid", ["2d-superintegrable", "2d-radial", "2d-cartesian"])
def test_sigma3_doubling(sid, systems):
    spec = systems[sid]
    for n, X in sigma3_doubles(spec).items():
        assert commutator(spec.hamiltonian, X).is_zero(), n


def test_sigma3_doubling_rejects_spatial(systems):
    with pytest.raises(ValueError):
        sigma3_doubles(systems["3d-spherical"])


def test_sigma3_itself_is_an_integral(systems):
    for sid in ("2d-superintegrable", "2d-radial", "2d-cartesian"):
        assert commutator(systems[sid].hamiltonian, sigma(C2, 3)).is_zero()


# gauge


def test_identity_gauge():
    V0, V1 = P2("V0"), P2("V1")
    assert apply_gauge(V0, V1, 0) == (V0, V1)


def test_constant_gauge_shifts_spin_orbit_strength():
    _, V1 = apply_gauge(P2("gamma^2*(x^2+y^2)/2"), P2("g"), P2("c"))
    assert V1 == P2("g + c/x^2")


def test_gauge_formula_term_by_term():
    a, V0, V1 = P2("y/x"), P2("V0"), P2("V1")
    new_v0, new_v1 = apply_gauge(V0, V1, a)
    assert new_v1 == P2("V1 + y/x^3")
    assert new_v0 == P2("V0 + (1 + y^2/x^2)*((y/x)^2/(2*x^2) + (y/x)*V1)")


def test_invariant_of_superintegrable_system_vanishes(systems):
    V0, V1 = systems["2d-superintegrable"].potentials
    assert not gauge_invariant(V0, V1)


def test_invariant_without_spin_orbit():
    assert gauge_invariant(P2("V0"), 0) == P2("V0")


def test_invariant_under_xi_gauge():
    V0, V1 = P2("V0"), P2("V1")
    assert gauge_invariant(*apply_gauge(V0, V1, P2("y/x"))) == gauge_invariant(V0, V1)


@st.composite
def alpha_dots(draw):
    """Rational functions of xi = y/x with denominators (1 + xi^2)^k."""
    coeffs = [draw(st.fractions(-5, 5, max_denominator=4)) for _ in range(4)]
    k = draw(st.integers(0, 2))
    xi = P2("y/x")
    num = Expression.sum(Expression.const(c) * xi**n for n, c in enumerate(coeffs))
    return num * P2("x^2/(x^2+y^2)") ** k


@given(alpha_dots())
def test_gauge_invariant_property(a):
    V0, V1 = P2("V0"), P2("V1")
    assert gauge_invariant(*apply_gauge(V0, V1, a)) == gauge_invariant(V0, V1)


@given(alpha_dots(), alpha_dots())
def test_gauges_compose_additively(a, b):
    V = (P2("V0"), P2("V1"))
    assert apply_gauge(*apply_gauge(*V, a), b) == apply_gauge(*V, a + b)


# numeric probe


def test_probe_passes_for_integral(systems):
    spec = systems["2d-cartesian"]
    r = numeric_probe(spec.hamiltonian, spec.integrals["X"], random.Random(7), spinors=3, points=10)
    assert r.ok and r.evaluations == 30


def test_probe_detects_non_integral():
    spec = build_superintegrable_2d(v0_extra=P2("x"), verify=False)
    r = numeric_probe(spec.hamiltonian, spec.integrals["X+"], random.Random(3), spinors=2, points=5)
    assert not r.ok
    assert r.failures


def test_probe_binds_formal_functions(systems):
    spec = systems["3d-spherical"]
    r = numeric_probe(spec.hamiltonian, spec.integrals["J2"], random.Random(11), spinors=2, points=10)
    assert r.ok


def test_random_jet_bindings_respect_rules():
    rng = random.Random(5)
    W = antiderivative_jet("W", "V1", "x")
    f = radial_jet("f", C2, 2)
    b = catalog.random_jet_bindings({W, f}, rng)
    V1 = free_jet("V1", ("x",))
    assert b[W].diff("x") == b[V1]
    u = radial_jet("f", C2)
    ang = P2("y") * b[u].diff("x") - P2("x") * b[u].diff("y")
    assert not ang
