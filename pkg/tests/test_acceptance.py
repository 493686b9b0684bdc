"""Acceptance gate: one check per criterion, each reported as a PASS/FAIL line.

The lines are printed in the terminal summary of every pytest run that
collects this module, and directly when the module is run as a script.
"""

import random
import time

import pytest

from conftest import COORDS_2D, COORDS_3D, random_diffop
from superspin import catalog, diffop, spinop
from superspin.coeffring import Expression, context_2d, context_3d, parameter, parse_expr
from superspin.determining import (
    STAGES,
    DeterminingSystem,
    check_solution,
    generate,
    match_reference,
    reference_comparison,
)
from superspin.liealg import (
    GeneratorSet,
    casimir_check,
    commutation_table,
    generators_3d_relations_basis,
    relations_2d,
    relations_3d,
    verify_relations,
)

RESULTS: dict = {}

PROBE_SPINORS = 20
PROBE_POINTS = 100
ORACLE_INSTANCES = 200


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    RESULTS[number] = (title, ok, detail)
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f" ({detail})" if detail else "")
    print(line)
    assert ok, line


def summary_lines() -> list:
    return [
        f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f" ({detail})" if detail else "")
        for n, (title, ok, detail) in sorted(RESULTS.items())
    ]


def P2(text):
    return parse_expr(text, context_2d(declare_unknown=True))


def P3(text):
    return parse_expr(text, context_3d())


def _zero_table(table, pairs) -> bool:
    return all(not any(table.bracket(a, b).values()) for a, b in pairs)


def test_criterion_01_planar_superintegrability():
    start = time.perf_counter()
    spec = catalog.build_superintegrable_2d(verify=False)
    failures = spec.failures()
    elapsed = time.perf_counter() - start
    ok = len(spec.integrals) == 8 and not failures and parameter("gamma") in spec.parameters and elapsed < 10
    record(1, "planar superintegrability: 8 generators commute with H", ok,
           f"{8 - len(failures)}/8 exact zeros, {elapsed:.2f} s")


def test_criterion_02_spatial_superintegrability():
    start = time.perf_counter()
    spec = catalog.build_superintegrable_3d(verify=False)
    failures = spec.failures()
    elapsed = time.perf_counter() - start
    ok = len(spec.integrals) == 9 and not failures and elapsed < 60
    record(2, "spatial superintegrability: 9 generators commute with H", ok,
           f"{9 - len(failures)}/9 exact zeros, {elapsed:.2f} s")


def test_criterion_03_algebra_structure():
    spec2 = catalog.build_superintegrable_2d(verify=False)
    gens2 = GeneratorSet.from_dict(spec2.integrals, central=("I+", "I-"))
    t2 = commutation_table(gens2, strict=False)
    plus, minus = ("L+", "X+", "Y+", "I+"), ("L-", "X-", "Y-", "I-")
    cross = _zero_table(t2, [(a, b) for a in plus for b in minus])
    central = _zero_table(t2, [(f"I{s}", f"{n}{s}") for s in "+-" for n in "LXY"])
    gamma = spec2.potentials[1]
    cocycle = (t2.bracket("X+", "Y+") == {**{n: Expression() for n in t2.names}, "I+": gamma * P2("4*i")}
               and t2.bracket("X-", "Y-") == {**{n: Expression() for n in t2.names}, "I-": gamma * P2("-4*i")})
    rel2 = verify_relations(t2, relations_2d(gamma))

    spec3 = catalog.build_superintegrable_3d(verify=False)
    t3_catalog = commutation_table(GeneratorSet.from_dict(spec3.integrals), strict=False)
    basis = GeneratorSet.from_dict(generators_3d_relations_basis(spec3.integrals))
    t3 = commutation_table(basis, strict=False)
    rel3 = verify_relations(t3, relations_3d())

    parts = {
        "closure": t2.closed and t3.closed and t3_catalog.closed,
        "cross brackets zero": cross,
        "I central": central,
        "cocycle +-4i gamma": cocycle,
        "planar relations": rel2.ok,
        "spatial families": rel3.ok and len(rel3.families()) == 6,
        "jacobi": t2.jacobi() and t3.jacobi() and t3_catalog.jacobi(),
    }
    record(3, "algebra structure: closure, direct sum, cocycle, relation families, Jacobi",
           all(parts.values()), ", ".join(k for k, v in parts.items() if not v) or "all parts")


def test_criterion_04_casimirs():
    report = casimir_check(catalog.build_superintegrable_2d(verify=False))
    record(4, "Casimirs commute with all 8 generators and H = (C+ + C-)/8", report.ok,
           f"{len(report.brackets)} brackets" + (f"; failing {report.failures()}" if not report.ok else ""))


def test_criterion_05_determining_systems():
    systems = {(m, s): generate(m, s) for m in ("2d", "3d") for s in STAGES}
    planar = sum(len(systems[("2d", s)].principal()) for s in STAGES)
    spin = len(systems[("3d", "second")].block("spin"))
    phi = len(systems[("3d", "first")].block("phi"))
    phi0 = len(systems[("3d", "first")].block("phi0"))
    zeroth = len(systems[("3d", "zeroth")])
    counts = (planar, spin, phi, phi0, zeroth) == (12, 18, 9, 3, 8)
    matches = {}
    for mode in ("2d", "3d"):
        for name, gen, ref in reference_comparison(mode):
            matches[f"{mode}:{name}"] = match_reference(gen, ref).ok
    record(5, "determining systems: counts and golden matches", counts and all(matches.values()),
           f"2d {planar}; 3d {spin} / {phi}+{phi0} / {zeroth}; matched {sorted(k for k, v in matches.items() if v)}")


def test_criterion_06_universal_solution():
    second = generate("3d", "second")
    spin = DeterminingSystem("3d", "second", tuple(second.block("spin")))
    w = {"A1": "0", "A2": "z*w", "A3": "-y*w", "B1": "-z*w", "B2": "0",
         "B3": "x*w", "C1": "y*w", "C2": "-x*w", "C3": "0"}
    report = check_solution(spin, w, formal=["V1"])
    record(6, "universal w-solution solves the 18 spin equations with V1 formal", report.ok, report.summary())


def test_criterion_07_integrable_families():
    radial = catalog.build_integrable_2d("radial", verify=False)
    cartesian = catalog.build_integrable_2d("cartesian", verify=False)
    spherical = catalog.build_spherical_3d(verify=False)
    failures = radial.failures() + cartesian.failures() + spherical.failures()
    formal = all(s.jets() for s in (radial.hamiltonian, cartesian.hamiltonian, spherical.hamiltonian))
    ok = not failures and formal and len(spherical.integrals) == 3
    record(7, "integrable families with formal potentials", ok,
           "radial X, cartesian X, J1..J3" if ok else f"failing {failures}")


def test_criterion_08_gauge():
    V0, V1, a = P2("V0"), P2("V1"), P2("c*y/x")
    # the printed action, transcribed independently of apply_gauge
    want_v1 = P2("V1 + c*y/x^3")
    want_v0 = P2("V0 + (1 + y^2/x^2)*((c*y/x)^2/(2*x^2) + (c*y/x)*V1)")
    exact = catalog.apply_gauge(V0, V1, a) == (want_v0, want_v1)
    rng = random.Random(20261019)
    before = catalog.gauge_invariant(V0, V1)
    invariant = 0
    for _ in range(50):
        coeffs = [catalog._random_rational(rng) for _ in range(4)]
        num = Expression.sum(Expression.const(q) * P2("y/x") ** n for n, q in enumerate(coeffs))
        alpha = num * P2("x^2/(x^2+y^2)") ** rng.randint(0, 2)
        invariant += catalog.gauge_invariant(*catalog.apply_gauge(V0, V1, alpha)) == before
    sup = catalog.build_superintegrable_2d(verify=False)
    vanishes = not catalog.gauge_invariant(*sup.potentials)
    ok = exact and invariant == 50 and vanishes
    record(8, "gauge action exact, invariant preserved, zero for the superintegrable system", ok,
           f"exact={exact}, invariant {invariant}/50, superintegrable invariant zero={vanishes}")


def test_criterion_09_classical_limit():
    hbar = parameter("hbar")
    spec = catalog.build_superintegrable_3d("tracked", verify=False)
    potentials = spec.potentials == (P3("hbar^2/(x^2+y^2+z^2)"), P3("hbar/(x^2+y^2+z^2)"))
    vanish = all(not V.substitute({hbar: 0}) for V in spec.potentials)
    dressed = not spec.failures() and len(spec.integrals) == 9
    planar = catalog.build_superintegrable_2d(hbar=True, verify=False)
    independent = all(hbar not in V.symbols() for V in planar.potentials) and not planar.failures()
    ok = potentials and vanish and dressed and independent
    record(9, "classical limit: hbar-dressed potentials vanish, dressed integrals commute", ok,
           f"potentials={potentials}, vanish={vanish}, dressed 9/9={dressed}, planar hbar-free={independent}")


def _verified_pairs():
    pairs = []
    for sid in catalog.SYSTEM_IDS:
        spec = catalog.build_system(sid)
        for n, X in spec.integrals.items():
            pairs.append((f"{sid}:{n}", spec.hamiltonian, X))
        if spec.mode == "2d":
            for n, X in catalog.sigma3_doubles(spec).items():
                pairs.append((f"{sid}:{n}", spec.hamiltonian, X))
    tracked = catalog.build_superintegrable_3d("tracked")
    for n, X in tracked.integrals.items():
        pairs.append((f"3d-superintegrable-hbar:{n}", tracked.hamiltonian, X))
    return pairs


@pytest.mark.slow
def test_criterion_10_independent_oracle():
    rng = random.Random(10)
    oracle_ok = 0
    for i in range(ORACLE_INSTANCES):
        coords = COORDS_2D if i % 2 == 0 else COORDS_3D
        A = random_diffop(rng, coords, order=2, degree=2)
        B = random_diffop(rng, coords, order=2, degree=2)
        f = catalog.random_polynomial(coords, 4, rng)
        oracle_ok += diffop.apply(diffop.compose(A, B), f) == diffop.apply(A, diffop.apply(B, f))
    pairs = _verified_pairs()
    bad = []
    evaluations = 0
    for k, (name, H, X) in enumerate(pairs):
        r = catalog.numeric_probe(H, X, random.Random(1000 + k), spinors=PROBE_SPINORS, points=PROBE_POINTS)
        evaluations += r.evaluations
        if not r.ok or r.evaluations != PROBE_SPINORS * PROBE_POINTS:
            bad.append(name)
    ok = oracle_ok == ORACLE_INSTANCES and not bad
    record(10, "independent oracles: compose vs apply, pointwise probe of every verified pair", ok,
           f"compose/apply {oracle_ok}/{ORACLE_INSTANCES}; {len(pairs) - len(bad)}/{len(pairs)} pairs, "
           f"{evaluations} exact evaluations" + (f"; failing {bad}" if bad else ""))


def test_criterion_11_sigma3_doubling():
    total, bad = 0, []
    for sid in ("2d-superintegrable", "2d-radial", "2d-cartesian"):
        spec = catalog.build_system(sid, verify=False)
        for n, X in catalog.sigma3_doubles(spec).items():
            total += 1
            if not spinop.commutator(spec.hamiltonian, X).is_zero():
                bad.append(f"{sid}:{n}")
    record(11, "sigma3 times every planar integral is an integral", not bad and total == 10,
           f"{total - len(bad)}/{total}")


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
