"""Pauli-matrix-valued differential operators.

An operator is stored by its sigma expansion ``sum_mu sigma_mu * A_mu`` with
``sigma_0`` the identity and scalar operators ``A_mu``. The Pauli matrices
commute with scalar operators, so products follow the table
``sigma_a sigma_b = delta_ab sigma_0 + i eps_abc sigma_c``.
"""

from __future__ import annotations

from typing import NamedTuple

from . import diffop
from .coeffring import Expression, as_expression
from .coeffring.scalars import ONE, I
from .diffop import ScalarDiffOp, derivative_name

__all__ = [
    "PauliOperator",
    "Spinor",
    "sigma_product",
    "levi_civita",
    "delta",
    "mul",
    "commutator",
    "anticommutator",
    "apply_to_spinor",
    "is_zero",
    "sigma",
    "scalar",
]

SIGMA_NAMES = ("sigma0", "sigma1", "sigma2", "sigma3")


def levi_civita(a: int, b: int, c: int) -> int:
    """``eps_abc`` for indices in 1..3."""
    if {a, b, c} != {1, 2, 3}:
        return 0
    return 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def sigma_product(a: int, b: int):
    """``(scalar, c)`` with ``sigma_a sigma_b = scalar * sigma_c``."""
    if a == 0:
        return ONE, b
    if b == 0:
        return ONE, a
    if a == b:
        return ONE, 0
    c = 6 - a - b
    return I * levi_civita(a, b, c), c


class Spinor(NamedTuple):
    """Two-component spinor with expression entries."""

    up: Expression
    down: Expression

    @classmethod
    def of(cls, up, down) -> Spinor:
        return cls(as_expression(up), as_expression(down))

    def is_zero(self) -> bool:
        return not self.up and not self.down

    def __add__(self, other):
        return Spinor(self.up + other.up, self.down + other.down)

    def __sub__(self, other):
        return Spinor(self.up - other.up, self.down - other.down)

    def evaluate(self, point, params=None):
        return (self.up.evaluate(point, params), self.down.evaluate(point, params))

    def __str__(self):
        return f"({self.up}, {self.down})"


class PauliOperator:
    """Immutable sigma expansion with four :class:`ScalarDiffOp` components."""

    __slots__ = ("coords", "components")

    def __init__(self, coords, components=None):
        self.coords = tuple(coords)
        comps = tuple(components) if components is not None else ()
        comps = comps + tuple(ScalarDiffOp(self.coords) for _ in range(4 - len(comps)))
        if len(comps) != 4:
            raise ValueError("a Pauli operator has exactly four components")
        for c in comps:
            if c.coords != self.coords:
                raise ValueError(f"component coordinates {c.coords} differ from {self.coords}")
        self.components = comps

    # predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __bool__(self):
        return not self.is_zero()

    def is_diagonal(self) -> bool:
        return self.components[1].is_zero() and self.components[2].is_zero()

    def order(self) -> int:
        return max(c.order() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.coords == other.coords and self.components == other.components

    def __hash__(self):
        return hash((self.coords, self.components))

    def __getitem__(self, mu: int) -> ScalarDiffOp:
        return self.components[mu]

    def jets(self) -> set:
        out = set()
        for c in self.components:
            out |= c.jets()
        return out

    # arithmetic -------------------------------------------------------------

    def _lift(self, other) -> PauliOperator:
        if isinstance(other, PauliOperator):
            if other.coords != self.coords:
                raise ValueError(f"mixed coordinate modes {self.coords} and {other.coords}")
            return other
        if isinstance(other, ScalarDiffOp):
            return scalar(other)
        return scalar(diffop.multiplication(self.coords, other))

    def __add__(self, other) -> PauliOperator:
        other = self._lift(other)
        return PauliOperator(self.coords, [a + b for a, b in zip(self.components, other.components)])

    __radd__ = __add__

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.coords, [-a for a in self.components])

    def __sub__(self, other) -> PauliOperator:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> PauliOperator:
        return self._lift(other) - self

    def __mul__(self, other) -> PauliOperator:
        return mul(self, self._lift(other))

    def __rmul__(self, other) -> PauliOperator:
        if isinstance(other, ScalarDiffOp):
            return mul(scalar(other), self)
        return self.left_mul(other)

    def __matmul__(self, other) -> PauliOperator:
        return mul(self, self._lift(other))

    def __pow__(self, n: int) -> PauliOperator:
        out = identity(self.coords)
        for _ in range(n):
            out = mul(out, self)
        return out

    def left_mul(self, f) -> PauliOperator:
        """Multiply every coefficient by the scalar function ``f``."""
        f = as_expression(f)
        return PauliOperator(self.coords, [a.left_mul(f) for a in self.components])

    def map_components(self, fn) -> PauliOperator:
        return PauliOperator(self.coords, [fn(a) for a in self.components])

    def substitute(self, bindings) -> PauliOperator:
        return self.map_components(lambda a: a.substitute(bindings))

    def adjoint(self) -> PauliOperator:
        """Formal adjoint; the Pauli matrices are Hermitian."""
        return self.map_components(ScalarDiffOp.adjoint)

    def is_hermitian(self) -> bool:
        return self.adjoint() == self

    # printing ---------------------------------------------------------------

    def triples(self):
        """``(sigma name, coefficient, derivative name)`` in canonical order."""
        out = []
        for mu, comp in enumerate(self.components):
            for beta, c in comp.sorted_terms():
                out.append((SIGMA_NAMES[mu], c, derivative_name(self.coords, beta)))
        return out

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for s, c, d in self.triples():
            parts.append(f"{s}*({c})" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"PauliOperator({str(self)!r})"


def scalar(op: ScalarDiffOp, mu: int = 0) -> PauliOperator:
    """``sigma_mu * op``."""
    comps = [ScalarDiffOp(op.coords) for _ in range(4)]
    comps[mu] = op
    return PauliOperator(op.coords, comps)


def sigma(coords, mu: int) -> PauliOperator:
    return scalar(diffop.identity(coords), mu)


def identity(coords) -> PauliOperator:
    return sigma(coords, 0)


def mul(P: PauliOperator, Q: PauliOperator) -> PauliOperator:
    if P.coords != Q.coords:
        raise ValueError(f"mixed coordinate modes {P.coords} and {Q.coords}")
    acc = [[] for _ in range(4)]
    for a, A in enumerate(P.components):
        if A.is_zero():
            continue
        for b, B in enumerate(Q.components):
            if B.is_zero():
                continue
            k, c = sigma_product(a, b)
            AB = diffop.compose(A, B)
            acc[c].append(AB if k == ONE else AB.left_mul(Expression.const(k)))
    comps = []
    for terms in acc:
        out = ScalarDiffOp(P.coords)
        for t in terms:
            out = out + t
        comps.append(out)
    return PauliOperator(P.coords, comps)


def commutator(P: PauliOperator, Q: PauliOperator) -> PauliOperator:
    return mul(P, Q) - mul(Q, P)


def anticommutator(P: PauliOperator, Q: PauliOperator) -> PauliOperator:
    return mul(P, Q) + mul(Q, P)


def is_zero(P: PauliOperator) -> bool:
    return P.is_zero()


def apply_to_spinor(P: PauliOperator, psi: Spinor) -> Spinor:
    """Matrix action of ``P`` on ``psi``."""
    up, down = as_expression(psi[0]), as_expression(psi[1])
    a0, a1, a2, a3 = P.components
    a0u, a0d = a0.apply(up), a0.apply(down)
    a1u, a1d = a1.apply(up), a1.apply(down)
    a2u, a2d = a2.apply(up), a2.apply(down)
    a3u, a3d = a3.apply(up), a3.apply(down)
    return Spinor(
        Expression.sum([a0u, a3u, a1d, a2d * (-I)]),
        Expression.sum([a1u, a2u * I, a0d, -a3d]),
    )
