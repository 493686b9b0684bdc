"""Scalar linear differential operators in normal form.

An operator is ``sum_beta c_beta * d^beta`` with every coefficient to the left
of the derivatives. ``beta`` is a multi-index over the operator's coordinates.
Composition moves derivatives to the right with the Leibniz rule, so equality
of operators is equality of their coefficient maps.
"""

from __future__ import annotations

from math import comb
from itertools import product

from .coeffring import Expression, as_expression, coordinate, parameter
from .coeffring.scalars import GaussianRational, I

__all__ = [
    "ScalarDiffOp",
    "compose",
    "commutator",
    "anticommutator",
    "symmetrize",
    "apply",
    "partial",
    "multiplication",
    "identity",
    "momentum",
    "angular_momentum",
    "laplacian",
    "hbar_factor",
]

HALF = GaussianRational(1, 0) / 2


class ScalarDiffOp:
    """Immutable operator; ``terms`` maps multi-index tuples to nonzero expressions."""

    __slots__ = ("coords", "terms", "_hash")

    def __init__(self, coords, terms=None):
        self.coords = tuple(coords)
        self.terms = {b: c for b, c in (terms or {}).items() if c}
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, coords) -> ScalarDiffOp:
        return cls(coords)

    # predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        return max((sum(b) for b in self.terms), default=-1)

    def __eq__(self, other):
        if not isinstance(other, ScalarDiffOp):
            return NotImplemented
        return self.coords == other.coords and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.coords, frozenset(self.terms.items())))
        return self._hash

    def coefficient(self, beta) -> Expression:
        return self.terms.get(tuple(beta), Expression())

    def jets(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.jets()
        return out

    # arithmetic -------------------------------------------------------------

    def _check(self, other: ScalarDiffOp):
        if self.coords != other.coords:
            raise ValueError(f"mixed coordinate modes {self.coords} and {other.coords}")

    def __add__(self, other) -> ScalarDiffOp:
        if not isinstance(other, ScalarDiffOp):
            other = multiplication(self.coords, other)
        self._check(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out[b] + c if b in out else c
        return ScalarDiffOp(self.coords, out)

    __radd__ = __add__

    def __neg__(self) -> ScalarDiffOp:
        return ScalarDiffOp(self.coords, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other) -> ScalarDiffOp:
        if not isinstance(other, ScalarDiffOp):
            other = multiplication(self.coords, other)
        return self + (-other)

    def __rsub__(self, other) -> ScalarDiffOp:
        return (-self) + other

    def left_mul(self, f) -> ScalarDiffOp:
        """``f * self``: multiply every coefficient by the function ``f``."""
        f = as_expression(f)
        return ScalarDiffOp(self.coords, {b: f * c for b, c in self.terms.items()})

    def __mul__(self, other) -> ScalarDiffOp:
        if isinstance(other, ScalarDiffOp):
            return compose(self, other)
        return compose(self, multiplication(self.coords, other))

    def __rmul__(self, other) -> ScalarDiffOp:
        return self.left_mul(other)

    def __matmul__(self, other: ScalarDiffOp) -> ScalarDiffOp:
        return compose(self, other)

    def __pow__(self, n: int) -> ScalarDiffOp:
        out = identity(self.coords)
        for _ in range(n):
            out = compose(out, self)
        return out

    def map_coefficients(self, f) -> ScalarDiffOp:
        return ScalarDiffOp(self.coords, {b: f(c) for b, c in self.terms.items()})

    def substitute(self, bindings) -> ScalarDiffOp:
        return self.map_coefficients(lambda c: c.substitute(bindings))

    def adjoint(self) -> ScalarDiffOp:
        """Formal adjoint: ``(c d^b)^+ = (-1)^|b| d^b o conj(c)``."""
        out = ScalarDiffOp(self.coords)
        for b, c in self.terms.items():
            term = compose(_partial_multi(self.coords, b), multiplication(self.coords, c.conjugate()))
            out = out + (term if sum(b) % 2 == 0 else -term)
        return out

    def apply(self, f) -> Expression:
        return apply(self, f)

    # printing ---------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for b, c in self.sorted_terms():
            d = derivative_name(self.coords, b)
            parts.append(f"({c})" if not d else f"({c})*{d}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ScalarDiffOp({str(self)!r})"


def derivative_name(coords, beta) -> str:
    """``Dx^2*Dy`` style name of ``d^beta``; empty for the identity."""
    parts = []
    for c, n in zip(coords, beta):
        if n:
            parts.append(f"D{c}" if n == 1 else f"D{c}^{n}")
    return "*".join(parts)


# constructors ---------------------------------------------------------------


def identity(coords) -> ScalarDiffOp:
    coords = tuple(coords)
    return ScalarDiffOp(coords, {(0,) * len(coords): Expression.const(1)})


def multiplication(coords, f) -> ScalarDiffOp:
    coords = tuple(coords)
    return ScalarDiffOp(coords, {(0,) * len(coords): as_expression(f)})


def partial(coords, c: str, n: int = 1) -> ScalarDiffOp:
    coords = tuple(coords)
    beta = tuple(n if k == c else 0 for k in coords)
    if c not in coords:
        raise ValueError(f"{c!r} is not a coordinate of {coords}")
    return ScalarDiffOp(coords, {beta: Expression.const(1)})


def _partial_multi(coords, beta) -> ScalarDiffOp:
    return ScalarDiffOp(coords, {tuple(beta): Expression.const(1)})


def hbar_factor(hbar) -> Expression:
    """``hbar`` as an expression: ``None`` means 1, ``True`` the parameter ``hbar``."""
    if hbar is None or hbar is False:
        return Expression.const(1)
    if hbar is True:
        return Expression.sym(parameter("hbar"))
    return as_expression(hbar)


def momentum(coords, c: str, hbar=None) -> ScalarDiffOp:
    """``p_c = -i hbar d_c``."""
    return partial(coords, c).left_mul(hbar_factor(hbar) * (-I))


def angular_momentum(coords, axis: str, hbar=None) -> ScalarDiffOp:
    """Component ``axis`` of ``L = r x p``; in 2D only ``axis='z'`` exists."""
    coords = tuple(coords)
    pairs = {"x": ("y", "z"), "y": ("z", "x"), "z": ("x", "y")}
    a, b = pairs[axis]
    if a not in coords or b not in coords:
        raise ValueError(f"L_{axis} needs coordinates {a} and {b}")
    xa, xb = Expression.sym(coordinate(a)), Expression.sym(coordinate(b))
    return momentum(coords, b, hbar).left_mul(xa) - momentum(coords, a, hbar).left_mul(xb)


def laplacian(coords) -> ScalarDiffOp:
    out = ScalarDiffOp(coords)
    for c in coords:
        out = out + partial(coords, c, 2)
    return out


# algebra --------------------------------------------------------------------


def _derivatives(f: Expression, coords, gamma, cache) -> Expression:
    """``d^gamma f`` built incrementally from cached lower derivatives."""
    got = cache.get(gamma)
    if got is not None:
        return got
    k = next(i for i, g in enumerate(gamma) if g)
    lower = list(gamma)
    lower[k] -= 1
    out = _derivatives(f, coords, tuple(lower), cache).diff(coords[k])
    cache[gamma] = out
    return out


def compose(A: ScalarDiffOp, B: ScalarDiffOp) -> ScalarDiffOp:
    """Normal form of ``A o B``."""
    A._check(B)
    coords = A.coords
    acc: dict = {}
    for beta, b in B.terms.items():
        cache = {(0,) * len(coords): b}
        for alpha, a in A.terms.items():
            for gamma in product(*(range(k + 1) for k in alpha)):
                db = _derivatives(b, coords, gamma, cache)
                if not db:
                    continue
                mult = 1
                for al, g in zip(alpha, gamma):
                    mult *= comb(al, g)
                term = a * db
                if mult != 1:
                    term = term * mult
                idx = tuple(al - g + be for al, g, be in zip(alpha, gamma, beta))
                acc.setdefault(idx, []).append(term)
    return ScalarDiffOp(coords, {idx: Expression.sum(ts) for idx, ts in acc.items()})


def commutator(A: ScalarDiffOp, B: ScalarDiffOp) -> ScalarDiffOp:
    return compose(A, B) - compose(B, A)


def anticommutator(A: ScalarDiffOp, B: ScalarDiffOp) -> ScalarDiffOp:
    return compose(A, B) + compose(B, A)


def symmetrize(f, D: ScalarDiffOp) -> ScalarDiffOp:
    """``(f o D + D o f) / 2`` for a first-order ``D``."""
    if D.order() > 1:
        raise ValueError("symmetrize expects a first-order operator")
    F = multiplication(D.coords, f)
    return anticommutator(F, D).left_mul(Expression.const(HALF))


def apply(A: ScalarDiffOp, f) -> Expression:
    """Action of ``A`` on the function ``f``."""
    f = as_expression(f)
    cache = {(0,) * len(A.coords): f}
    return Expression.sum(c * _derivatives(f, A.coords, beta, cache) for beta, c in A.terms.items())
