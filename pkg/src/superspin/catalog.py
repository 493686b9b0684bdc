"""Hamiltonians, integrals of motion and potential families.

Every system is addressable by a stable string id (see :data:`SYSTEM_IDS`).
Construction in verified mode checks ``[H, X] = 0`` for every listed integral
and the Hermiticity of ``H`` before returning.

With ``hbar`` tracked, momenta are ``-i hbar d``, angular momenta are built
from those momenta and spin enters as ``hbar sigma / 2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import diffop, spinop
from .coeffring import (
    Expression,
    PoleError,
    Polynomial,
    antiderivative_jet,
    as_expression,
    coordinate,
    free_jet,
    parameter,
    radial_jet,
)
from .coeffring.scalars import I, GaussianRational
from .coeffring.symbols import JET, PARAMETER, jet_base
from .diffop import hbar_factor
from .spinop import PauliOperator, Spinor, apply_to_spinor, levi_civita

__all__ = [
    "SystemSpec",
    "VerificationError",
    "SYSTEM_IDS",
    "build_hamiltonian_2d",
    "build_hamiltonian_3d",
    "build_superintegrable_2d",
    "build_integrable_2d",
    "build_superintegrable_3d",
    "build_spherical_3d",
    "build_system",
    "apply_gauge",
    "gauge_invariant",
    "sigma3_doubles",
    "numeric_probe",
    "random_jet_bindings",
]

COORDS_2D = ("x", "y")
COORDS_3D = ("x", "y", "z")
AXES = ("x", "y", "z")
SYSTEM_IDS = ("2d-superintegrable", "2d-radial", "2d-cartesian", "3d-superintegrable", "3d-spherical")


class VerificationError(AssertionError):
    """An integral failed ``[H, X] = 0`` or ``H`` is not Hermitian."""

    def __init__(self, system: str, generator: str, residual: PauliOperator):
        self.system = system
        self.generator = generator
        self.residual = residual
        first = residual.triples()[0] if not residual.is_zero() else None
        where = f"{first[0]} {first[2] or '1'}: {first[1]}" if first else "?"
        super().__init__(f"{system}: [H, {generator}] != 0, first nonzero coefficient {where}")


def _x(c: str) -> Expression:
    return Expression.sym(coordinate(c))


def _p(name: str) -> Expression:
    return Expression.sym(parameter(name))


def _r2(coords) -> Expression:
    return Expression.sum(_x(c) ** 2 for c in coords)


# Hamiltonians ---------------------------------------------------------------


def _kinetic(coords, hbar) -> PauliOperator:
    h = hbar_factor(hbar)
    return spinop.scalar(diffop.laplacian(coords).left_mul(h * h * Fraction(-1, 2)))


def build_hamiltonian_2d(V0, V1, hbar=None) -> PauliOperator:
    """``-1/2 Delta + V0 + V1 sigma3 L3 + 1/2 sigma3 (L3 V1)``.

    The last two terms together equal ``1/2 {V1, L3} sigma3``.
    """
    V0, V1 = as_expression(V0), as_expression(V1)
    L3 = diffop.angular_momentum(COORDS_2D, "z", hbar)
    H = _kinetic(COORDS_2D, hbar) + spinop.scalar(diffop.multiplication(COORDS_2D, V0))
    return H + spinop.scalar(diffop.symmetrize(V1, L3), 3)


def build_hamiltonian_3d(V0, V1, hbar=None) -> PauliOperator:
    """``-1/2 Delta + V0 + 1/2 {V1, sigma.L}``."""
    V0, V1 = as_expression(V0), as_expression(V1)
    H = _kinetic(COORDS_3D, hbar) + spinop.scalar(diffop.multiplication(COORDS_3D, V0))
    for k, axis in enumerate(AXES, start=1):
        L = diffop.angular_momentum(COORDS_3D, axis, hbar)
        H = H + spinop.scalar(diffop.symmetrize(V1, L), k)
    return H


# system container -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """A Hamiltonian with its named integrals of motion."""

    name: str
    mode: str
    hamiltonian: PauliOperator
    integrals: dict
    parameters: tuple
    potentials: tuple
    notes: dict = field(default_factory=dict)

    @property
    def coords(self):
        return self.hamiltonian.coords

    def residual(self, name: str) -> PauliOperator:
        return self._residuals[name]

    @cached_property
    def _residuals(self) -> dict:
        return {n: spinop.commutator(self.hamiltonian, X) for n, X in self.integrals.items()}

    def failures(self) -> list:
        """Names of integrals with a nonzero commutator."""
        return [n for n in self.integrals if not self._residuals[n].is_zero()]

    def hermitian(self) -> bool:
        return self.hamiltonian.is_hermitian()

    def verify(self) -> SystemSpec:
        """Raise :class:`VerificationError` on the first failing integral."""
        if not self.hermitian():
            raise VerificationError(self.name, "H^+ - H", self.hamiltonian.adjoint() - self.hamiltonian)
        for n in self.integrals:
            if not self._residuals[n].is_zero():
                raise VerificationError(self.name, n, self._residuals[n])
        return self

    def substitute(self, bindings, name=None) -> SystemSpec:
        return SystemSpec(
            name or self.name,
            self.mode,
            self.hamiltonian.substitute(bindings),
            {n: X.substitute(bindings) for n, X in self.integrals.items()},
            self.parameters,
            tuple(v.substitute(bindings) for v in self.potentials),
            dict(self.notes),
        )


def _finish(spec: SystemSpec, verify: bool) -> SystemSpec:
    return spec.verify() if verify else spec


# 2D systems -----------------------------------------------------------------


def projector_2d(sign: int) -> PauliOperator:
    """``I + sign * sigma3``."""
    return spinop.sigma(COORDS_2D, 0) + spinop.sigma(COORDS_2D, 3).left_mul(sign)


def superintegrable_2d_generators(gamma, hbar=None) -> dict:
    """``L, X, Y, I`` for both signs, each carrying the factor ``I +- sigma3``."""
    g = as_expression(gamma)
    h = hbar_factor(hbar)
    ih = h * I
    out = {}
    for sign, tag in ((1, "+"), (-1, "-")):
        P = projector_2d(sign)
        L3 = diffop.angular_momentum(COORDS_2D, "z", hbar)
        X = diffop.partial(COORDS_2D, "x").left_mul(ih) + (-sign) * g * _x("y")
        Y = diffop.partial(COORDS_2D, "y").left_mul(ih) + sign * g * _x("x")
        out[f"L{tag}"] = spinop.scalar(L3) * P
        out[f"X{tag}"] = spinop.scalar(X) * P
        out[f"Y{tag}"] = spinop.scalar(Y) * P
        out[f"I{tag}"] = P
    order = ("L+", "X+", "Y+", "I+", "L-", "X-", "Y-", "I-")
    return {k: out[k] for k in order}


def build_superintegrable_2d(gamma=None, hbar=None, verify: bool = True, v0_extra=None) -> SystemSpec:
    """Harmonic ``V0 = gamma^2 (x^2+y^2)/2`` with constant spin-orbit strength ``gamma``.

    Parameters
    ----------
    gamma : expression-like, optional
        Coupling; defaults to the formal parameter ``gamma``.
    hbar : bool or expression-like, optional
        Track Planck's constant in momenta and angular momenta.
    verify : bool
        Check all integrals at construction.
    v0_extra : expression-like, optional
        Perturbation added to ``V0`` (for negative checks; use ``verify=False``).
    """
    g = _p("gamma") if gamma is None else as_expression(gamma)
    V0 = g * g * _r2(COORDS_2D) * Fraction(1, 2)
    if v0_extra is not None:
        V0 = V0 + as_expression(v0_extra)
    V1 = g
    H = build_hamiltonian_2d(V0, V1, hbar)
    params = tuple(sorted(s for s in (V0.symbols() | V1.symbols() | _hbar_syms(hbar)) if s.kind == PARAMETER))
    spec = SystemSpec(
        "2d-superintegrable", "2d", H, superintegrable_2d_generators(g, hbar), params, (V0, V1),
    )
    return _finish(spec, verify)


def _hbar_syms(hbar) -> set:
    return hbar_factor(hbar).symbols()


def build_integrable_2d(case: str, hbar=None, verify: bool = True) -> SystemSpec:
    """One-integral families with formal functions.

    ``case='radial'``: ``V0(rho)``, ``V1(rho)`` as radial jets and
    ``X = (omega0 + omega1 sigma3) L3``.

    ``case='cartesian'``: ``V1(x)``, ``F(x)``, ``V0 = y^2 V1^2 / 2 + F`` and
    ``X = -i d_y - sigma3 W`` with ``W`` an antiderivative of ``V1``.
    """
    if case == "radial":
        V0 = Expression.sym(radial_jet("V0", COORDS_2D))
        V1 = Expression.sym(radial_jet("V1", COORDS_2D))
        H = build_hamiltonian_2d(V0, V1, hbar)
        L3 = spinop.scalar(diffop.angular_momentum(COORDS_2D, "z", hbar))
        w = spinop.sigma(COORDS_2D, 0).left_mul(_p("omega0")) + spinop.sigma(COORDS_2D, 3).left_mul(_p("omega1"))
        integrals = {"X": w * L3}
        params = (parameter("omega0"), parameter("omega1"))
    elif case == "cartesian":
        V1 = Expression.sym(free_jet("V1", ("x",)))
        F = Expression.sym(free_jet("F", ("x",)))
        W = Expression.sym(antiderivative_jet("W", "V1", "x"))
        V0 = _x("y") ** 2 * V1 * V1 * Fraction(1, 2) + F
        H = build_hamiltonian_2d(V0, V1, hbar)
        X = spinop.scalar(diffop.momentum(COORDS_2D, "y", hbar)) - spinop.sigma(COORDS_2D, 3).left_mul(W)
        integrals = {"X": X}
        params = ()
    else:
        raise ValueError(f"unknown integrable case {case!r}; expected 'radial' or 'cartesian'")
    params = params + tuple(sorted(_hbar_syms(hbar)))
    spec = SystemSpec(f"2d-{case}", "2d", H, integrals, params, (V0, V1))
    return _finish(spec, verify)


def sigma3_doubles(spec: SystemSpec) -> dict:
    """``sigma3 * X`` for every integral ``X`` of a 2D system."""
    if spec.mode != "2d":
        raise ValueError("sigma3 doubling applies to 2D systems only")
    s3 = spinop.sigma(COORDS_2D, 3)
    return {f"sigma3*{n}": s3 * X for n, X in spec.integrals.items()}


# 3D systems -----------------------------------------------------------------


def superintegrable_3d_generators(hbar=None) -> dict:
    """Total angular momentum ``J``, modified momentum ``Pi`` and modified spin ``S``."""
    h = hbar_factor(hbar)
    r2 = _r2(COORDS_3D)
    inv_r2 = r2.inverse()
    sig = [spinop.sigma(COORDS_3D, k) for k in (1, 2, 3)]
    r_dot_sigma = sig[0].left_mul(_x("x")) + sig[1].left_mul(_x("y")) + sig[2].left_mul(_x("z"))
    J, Pi, S = {}, {}, {}
    for i, axis in enumerate(AXES):
        L = spinop.scalar(diffop.angular_momentum(COORDS_3D, axis, hbar))
        J[f"J{i + 1}"] = L + sig[i].left_mul(h * Fraction(1, 2))
        P = spinop.scalar(diffop.momentum(COORDS_3D, axis, hbar))
        for k in range(3):
            for l in range(3):
                e = levi_civita(i + 1, k + 1, l + 1)
                if e:
                    P = P - sig[l].left_mul(h * inv_r2 * _x(AXES[k]) * e)
        Pi[f"Pi{i + 1}"] = P
        S[f"S{i + 1}"] = (sig[i].left_mul(Fraction(-1, 2)) + r_dot_sigma.left_mul(_x(axis) * inv_r2)).left_mul(h)
    return {**J, **Pi, **S}


def superintegrable_3d_potentials(hbar=None):
    h = hbar_factor(hbar)
    inv_r2 = _r2(COORDS_3D).inverse()
    return h * h * inv_r2, h * inv_r2


def build_superintegrable_3d(hbar_mode: str = "off", verify: bool = True, v0_extra=None) -> SystemSpec:
    """``V0 = hbar^2/r^2``, ``V1 = hbar/r^2`` with the nine generators.

    ``hbar_mode='off'`` sets ``hbar = 1``; ``'tracked'`` keeps the parameter.
    In tracked mode ``H`` scales as ``hbar^2`` and every generator as ``hbar``
    relative to the ``hbar = 1`` forms.
    """
    if hbar_mode not in ("off", "tracked"):
        raise ValueError(f"hbar_mode must be 'off' or 'tracked', got {hbar_mode!r}")
    hbar = hbar_mode == "tracked"
    V0, V1 = superintegrable_3d_potentials(hbar)
    if v0_extra is not None:
        V0 = V0 + as_expression(v0_extra)
    H = build_hamiltonian_3d(V0, V1, hbar)
    params = (parameter("hbar"),) if hbar else ()
    spec = SystemSpec("3d-superintegrable", "3d", H, superintegrable_3d_generators(hbar), params, (V0, V1),
                      {"hbar_mode": hbar_mode})
    return _finish(spec, verify)


def build_spherical_3d(hbar=None, verify: bool = True) -> SystemSpec:
    """Radial ``V0(r)``, ``V1(r)`` with the total angular momentum components."""
    V0 = Expression.sym(radial_jet("V0", COORDS_3D))
    V1 = Expression.sym(radial_jet("V1", COORDS_3D))
    H = build_hamiltonian_3d(V0, V1, hbar)
    h = hbar_factor(hbar)
    integrals = {}
    for i, axis in enumerate(AXES):
        L = spinop.scalar(diffop.angular_momentum(COORDS_3D, axis, hbar))
        integrals[f"J{i + 1}"] = L + spinop.sigma(COORDS_3D, i + 1).left_mul(h * Fraction(1, 2))
    params = tuple(sorted(_hbar_syms(hbar)))
    return _finish(SystemSpec("3d-spherical", "3d", H, integrals, params, (V0, V1)), verify)


def build_system(system_id: str, gamma=None, hbar: bool = False, verify: bool = True, v0_extra=None) -> SystemSpec:
    """Build a catalog system by id."""
    h = True if hbar else None
    if system_id == "2d-superintegrable":
        return build_superintegrable_2d(gamma, h, verify, v0_extra)
    if system_id in ("2d-radial", "2d-cartesian"):
        _no_extra(system_id, gamma, v0_extra)
        return build_integrable_2d(system_id[3:], h, verify)
    if system_id == "3d-superintegrable":
        _no_extra(system_id, gamma, None)
        return build_superintegrable_3d("tracked" if hbar else "off", verify, v0_extra)
    if system_id == "3d-spherical":
        _no_extra(system_id, gamma, v0_extra)
        return build_spherical_3d(h, verify)
    raise KeyError(f"unknown system {system_id!r}; expected one of {', '.join(SYSTEM_IDS)}")


def _no_extra(system_id, gamma, v0_extra):
    if gamma is not None:
        raise ValueError(f"{system_id} has no gamma parameter")
    if v0_extra is not None:
        raise ValueError(f"{system_id} does not take a V0 perturbation")


# gauge ----------------------------------------------------------------------


def apply_gauge(V0, V1, alpha_dot):
    """Potentials after the diagonal phase gauge with ``d alpha / d xi = alpha_dot``.

    ``alpha_dot`` is a function of ``xi = y/x`` already written in ``x, y``.
    Returns ``(V0 + (1 + y^2/x^2)(alpha_dot^2/(2x^2) + alpha_dot V1), V1 + alpha_dot/x^2)``.
    """
    V0, V1, a = as_expression(V0), as_expression(V1), as_expression(alpha_dot)
    inv_x2 = (_x("x") ** 2).inverse()
    new_v1 = V1 + a * inv_x2
    factor = 1 + _x("y") ** 2 * inv_x2
    new_v0 = V0 + factor * (a * a * inv_x2 * Fraction(1, 2) + a * V1)
    return new_v0, new_v1


def gauge_invariant(V0, V1) -> Expression:
    """``V0 - (x^2 + y^2) V1^2 / 2``, unchanged by :func:`apply_gauge`."""
    V0, V1 = as_expression(V0), as_expression(V1)
    return V0 - _r2(COORDS_2D) * V1 * V1 * Fraction(1, 2)


# numeric probe --------------------------------------------------------------


def _random_rational(rng: random.Random, span: int = 7, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_polynomial(coords, degree: int, rng: random.Random, complex_coeffs: bool = True) -> Expression:
    """Dense random polynomial of total degree at most ``degree``."""
    terms = []
    for exps in _exponents(len(coords), degree):
        re = rng.randint(-4, 4)
        im = rng.randint(-4, 4) if complex_coeffs else 0
        if re == 0 and im == 0:
            continue
        mono = Expression.const(GaussianRational(re, im))
        for c, e in zip(coords, exps):
            if e:
                mono = mono * _x(c) ** e
        terms.append(mono)
    return Expression.sum(terms)


def _exponents(n: int, degree: int):
    if n == 0:
        yield ()
        return
    for e in range(degree + 1):
        for rest in _exponents(n - 1, degree - e):
            yield (e,) + rest


def random_jet_bindings(jets, rng: random.Random, degree: int = 2) -> dict:
    """Concrete real polynomial values for every formal function among ``jets``.

    Radial functions become polynomials in the squared radius; an antiderivative
    is bound to the exact antiderivative of the polynomial chosen for its integrand.
    """
    out: dict = {}
    bases = {jet_base(s) for s in jets if s.kind == JET}
    for s in sorted(bases):
        if s.rule == "free":
            out.setdefault(s, random_polynomial(s.arg, degree, rng, complex_coeffs=False))
        elif s.rule == "radial":
            u = _r2(s.arg)
            out[s] = Expression.sum(Expression.const(rng.randint(-4, 4)) * u**k for k in range(degree + 1))
    for s in sorted(bases):
        if s.rule == "antiderivative":
            of, c = s.arg
            target = free_jet(of, (c,))
            if target not in out:
                out[target] = random_polynomial((c,), degree, rng, complex_coeffs=False)
            out[s] = _antiderivative(out[target], c)
    return out


def _antiderivative(p: Expression, c: str) -> Expression:
    if not p.is_polynomial():
        raise ValueError("only polynomial integrands have exact antiderivatives here")
    terms = []
    for m, k in p.num.terms.items():
        e = dict(m).get(coordinate(c), 0)
        terms.append(Expression(Polynomial({m: k / (e + 1)})) * _x(c))
    return Expression.sum(terms)


@dataclass
class ProbeResult:
    """Outcome of evaluating ``H(X psi) - X(H psi)`` at sample points."""

    spinors: int
    points: int
    evaluations: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.evaluations > 0


def numeric_probe(
    H: PauliOperator,
    X: PauliOperator,
    rng: random.Random,
    spinors: int = 20,
    points: int = 100,
    degree: int = 3,
) -> ProbeResult:
    """Pointwise check of ``[H, X] psi = 0`` that never composes operators.

    Formal functions and parameters are replaced by random concrete values;
    ``H`` and ``X`` then act on random polynomial spinors by direct
    differentiation and both orders are evaluated at random rational points
    away from poles.
    """
    coords = H.coords
    jets = H.jets() | X.jets()
    params = {s for s in _operator_symbols(H) | _operator_symbols(X) if s.kind == PARAMETER}
    result = ProbeResult(spinors, points)
    bindings = random_jet_bindings(jets, rng)
    Hc, Xc = H.substitute(bindings), X.substitute(bindings)
    for _ in range(spinors):
        param_values = {s: _nonzero_rational(rng) for s in params}
        psi = Spinor(random_polynomial(coords, degree, rng), random_polynomial(coords, degree, rng))
        hx = apply_to_spinor(Hc, apply_to_spinor(Xc, psi))
        xh = apply_to_spinor(Xc, apply_to_spinor(Hc, psi))
        done = 0
        while done < points:
            point = {coordinate(c): _random_rational(rng) for c in coords}
            try:
                a = hx.evaluate(point, param_values)
                b = xh.evaluate(point, param_values)
            except PoleError:
                continue
            done += 1
            result.evaluations += 1
            if a != b:
                result.failures.append((str(psi), {str(k): str(v) for k, v in point.items()}, str(a), str(b)))
    return result


def _nonzero_rational(rng: random.Random) -> Fraction:
    while True:
        q = _random_rational(rng)
        if q:
            return q


def _operator_symbols(P: PauliOperator) -> set:
    out = set()
    for comp in P.components:
        for c in comp.terms.values():
            out |= c.symbols()
    return out
