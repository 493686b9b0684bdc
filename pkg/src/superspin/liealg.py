"""Commutation tables, structure constants and Casimir checks.

Operators are compared as vectors: the coordinate part of every coefficient
monomial, together with the sigma index and derivative multi-index, labels a
component, and the remaining parameter-dependent factor is the entry. Structure
constants therefore live in the Gaussian rationals extended by parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import spinop
from .coeffring import Expression, Polynomial
from .coeffring.scalars import I
from .coeffring.symbols import PARAMETER
from .linalg import null_vector, solve
from .spinop import PauliOperator, levi_civita

__all__ = [
    "GeneratorSet",
    "StructureTable",
    "Relation",
    "AmbiguityError",
    "ClosureError",
    "decompose",
    "commutation_table",
    "verify_relations",
    "casimir_check",
    "relations_2d",
    "relations_3d",
    "generators_3d_relations_basis",
    "format_combination",
]


class AmbiguityError(ValueError):
    """The generators are linearly dependent."""

    def __init__(self, combination: dict):
        self.combination = combination
        super().__init__(f"dependent generators: {format_combination(combination)} = 0")


class ClosureError(ValueError):
    """A commutator left the span of the generators."""

    def __init__(self, pair, residual: PauliOperator):
        self.pair = pair
        self.residual = residual
        super().__init__(f"[{pair[0]}, {pair[1]}] is not in the span: {residual}")


def format_combination(coeffs: dict) -> str:
    parts = [f"({c})*{n}" for n, c in coeffs.items() if c]
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Named generators and the subset declared central."""

    names: tuple
    operators: tuple
    central: tuple = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        if len(self.names) != len(self.operators):
            raise ValueError("one operator per name")
        for i, j in combinations(range(len(self.operators)), 2):
            if self.operators[i] == self.operators[j]:
                raise ValueError(f"generators {self.names[i]} and {self.names[j]} coincide")

    @classmethod
    def from_dict(cls, gens: dict, central=()) -> GeneratorSet:
        return cls(tuple(gens), tuple(gens.values()), tuple(central))

    def __getitem__(self, name: str) -> PauliOperator:
        return self.operators[self.names.index(name)]

    def __len__(self):
        return len(self.names)


def _split_monomial(m):
    coord = tuple(t for t in m if t[0].kind != PARAMETER)
    par = tuple(t for t in m if t[0].kind == PARAMETER)
    return coord, par


def _vectors(ops) -> list:
    """Sparse coordinate vectors of ``ops`` over a shared denominator per slot."""
    slots: dict = {}
    for P in ops:
        for mu, comp in enumerate(P.components):
            for beta, c in comp.terms.items():
                exps = slots.setdefault((mu, beta), {})
                for b, e in c.den:
                    exps[b] = max(exps.get(b, 0), e)
    mults = {}
    for key, exps in slots.items():
        m = Polynomial.constant(1)
        for b, e in exps.items():
            m = m * b**e
        mults[key] = Expression(m)
    out = []
    for P in ops:
        v: dict = {}
        for mu, comp in enumerate(P.components):
            for beta, c in comp.terms.items():
                num = c * mults[(mu, beta)]
                if not num.is_polynomial():
                    raise AssertionError("shared multiplier failed to clear a denominator")
                for m, k in num.num.terms.items():
                    coord, par = _split_monomial(m)
                    key = (mu, beta, coord)
                    term = Expression(Polynomial({par: k}))
                    v[key] = v[key] + term if key in v else term
        out.append({k: e for k, e in v.items() if e})
    return out


def _check_independent(gens: GeneratorSet, vecs):
    nv = null_vector(vecs)
    if nv is not None:
        raise AmbiguityError({n: c for n, c in zip(gens.names, nv) if c})


def decompose(P: PauliOperator, gens: GeneratorSet):
    """Coefficients ``{name: scalar}`` with ``P = sum c g`` or ``None`` if ``P`` is outside the span.

    Raises
    ------
    AmbiguityError
        If the generators are linearly dependent.
    """
    vecs = _vectors(list(gens.operators) + [P])
    _check_independent(gens, vecs[:-1])
    sol = solve(vecs[:-1], vecs[-1])
    if sol is None:
        return None
    return dict(zip(gens.names, sol))


@dataclass
class StructureTable:
    """``[g_i, g_j] = sum_k c_ij^k g_k`` for every ordered pair."""

    names: tuple
    entries: dict
    residuals: dict = field(default_factory=dict)

    def bracket(self, a: str, b: str):
        return self.entries[(a, b)]

    @property
    def closed(self) -> bool:
        return all(v is not None for v in self.entries.values())

    def open_pairs(self) -> list:
        return [k for k, v in self.entries.items() if v is None]

    def antisymmetric(self) -> bool:
        for a in self.names:
            for b in self.names:
                u, v = self.entries[(a, b)], self.entries[(b, a)]
                if u is None or v is None:
                    return False
                if any(u[n] + v[n] for n in self.names):
                    return False
        return True

    def jacobi_violations(self) -> list:
        """Triples ``(a, b, c)`` where the cyclic sum of structure constants is nonzero."""
        if not self.closed:
            raise ValueError("Jacobi check needs a closed table")
        bad = []
        names = self.names
        for a, b, c in combinations(names, 3):
            for l in names:
                total = Expression.sum(
                    self.entries[(y, z)][m] * self.entries[(x, m)][l]
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b))
                    for m in names
                )
                if total:
                    bad.append((a, b, c, l))
        return bad

    def jacobi(self) -> bool:
        return not self.jacobi_violations()

    def to_matrix(self) -> dict:
        """``{a: {b: "combination"}}`` with ``None`` marking an open bracket."""
        out = {}
        for a in self.names:
            row = {}
            for b in self.names:
                v = self.entries[(a, b)]
                row[b] = None if v is None else format_combination(v)
            out[a] = row
        return out

    def to_text(self) -> str:
        lines = []
        for a, b in combinations(self.names, 2):
            v = self.entries[(a, b)]
            rhs = "NOT IN SPAN" if v is None else format_combination(v)
            lines.append(f"[{a}, {b}] = {rhs}")
        return "\n".join(lines)


def commutation_table(gens: GeneratorSet, strict: bool = True) -> StructureTable:
    """Decompose every bracket of ``gens``.

    With ``strict`` a bracket outside the span raises :class:`ClosureError`;
    otherwise it is stored as ``None`` with its residual.
    """
    vecs = _vectors(list(gens.operators))
    _check_independent(gens, vecs)
    zero = {n: Expression() for n in gens.names}
    entries = {(n, n): dict(zero) for n in gens.names}
    residuals = {}
    for i, j in combinations(range(len(gens)), 2):
        a, b = gens.names[i], gens.names[j]
        C = spinop.commutator(gens.operators[i], gens.operators[j])
        v = _vectors(list(gens.operators) + [C])
        sol = solve(v[:-1], v[-1])
        if sol is None:
            if strict:
                raise ClosureError((a, b), C)
            entries[(a, b)] = entries[(b, a)] = None
            residuals[(a, b)] = C
            continue
        entries[(a, b)] = dict(zip(gens.names, sol))
        entries[(b, a)] = {n: -c for n, c in zip(gens.names, sol)}
    return StructureTable(gens.names, entries, residuals)


# relations ------------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """Expected bracket ``[left, right] = sum rhs[name] * name``."""

    family: str
    left: str
    right: str
    rhs: tuple = ()

    def expected(self, names) -> dict:
        d = dict(self.rhs)
        return {n: d.get(n, Expression()) for n in names}

    def __str__(self):
        return f"[{self.left}, {self.right}] = {format_combination(dict(self.rhs))}"


@dataclass
class RelationReport:
    results: list
    surplus: list

    @property
    def ok(self) -> bool:
        return all(r[1] for r in self.results)

    def families(self) -> dict:
        out: dict = {}
        for rel, ok, _ in self.results:
            out[rel.family] = out.get(rel.family, True) and ok
        return out


def verify_relations(table: StructureTable, expected) -> RelationReport:
    """Compare expected brackets with the table; uncovered nonzero brackets are surplus."""
    results = []
    covered = set()
    for rel in expected:
        got = table.entries.get((rel.left, rel.right))
        covered |= {(rel.left, rel.right), (rel.right, rel.left)}
        exp = rel.expected(table.names)
        ok = got is not None and all(got[n] == exp[n] for n in table.names)
        results.append((rel, ok, "not in span" if got is None else format_combination(got)))
    surplus = []
    for a, b in combinations(table.names, 2):
        if (a, b) not in covered:
            v = table.entries[(a, b)]
            if v is None or any(v.values()):
                surplus.append(f"[{a}, {b}] = {'not in span' if v is None else format_combination(v)}")
    return RelationReport(results, surplus)


def _e(v) -> Expression:
    return v if isinstance(v, Expression) else Expression.const(v)


def relations_2d(gamma) -> list:
    """Direct sum of two centrally extended plane Euclidean algebras.

    ``[L, X] = 2i Y``, ``[L, Y] = -2i X`` and ``[X, Y] = +-4i gamma I`` per sign;
    the factor 2 comes from ``(I +- sigma3)^2 = 2 (I +- sigma3)``.
    """
    g = _e(gamma)
    out = []
    plus = ("L+", "X+", "Y+", "I+")
    minus = ("L-", "X-", "Y-", "I-")
    for a in plus:
        for b in minus:
            out.append(Relation("cross-summand", a, b))
    for sign, tag in ((1, "+"), (-1, "-")):
        L, X, Y, Ic = (f"{n}{tag}" for n in "LXYI")
        out.append(Relation("e(2)", L, X, ((Y, Expression.const(2 * I)),)))
        out.append(Relation("e(2)", L, Y, ((X, Expression.const(-2 * I)),)))
        out.append(Relation("central-extension", X, Y, ((Ic, g * (4 * sign) * I),)))
        for n in (L, X, Y):
            out.append(Relation("central", Ic, n))
    return out


def generators_3d_relations_basis(gens: dict) -> dict:
    """``K_i = J_i - S_i``, ``Pi_i`` and ``S_i`` from the catalog generators."""
    out = {}
    for k in (1, 2, 3):
        out[f"K{k}"] = gens[f"J{k}"] - gens[f"S{k}"]
    for k in (1, 2, 3):
        out[f"Pi{k}"] = gens[f"Pi{k}"]
    for k in (1, 2, 3):
        out[f"S{k}"] = gens[f"S{k}"]
    return out


def relations_3d(scale=1) -> list:
    """Euclidean ``e(3)`` on ``{K, Pi}`` plus rotations ``o(3)`` on ``{S}``.

    ``scale`` multiplies the structure constants (``hbar`` when tracked).
    """
    s = _e(scale)
    out = []
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            out.append(Relation("[K,S]=0", f"K{i}", f"S{j}"))
            out.append(Relation("[Pi,S]=0", f"Pi{i}", f"S{j}"))
            if i < j:
                k = 6 - i - j
                e = levi_civita(i, j, k)
                out.append(Relation("[Pi,Pi]=0", f"Pi{i}", f"Pi{j}"))
                out.append(Relation("[K,K]=iK", f"K{i}", f"K{j}", ((f"K{k}", s * I * e),)))
                out.append(Relation("[S,S]=iS", f"S{i}", f"S{j}", ((f"S{k}", s * I * e),)))
            if i != j:
                k = 6 - i - j
                out.append(Relation("[K,Pi]=iPi", f"K{i}", f"Pi{j}", ((f"Pi{k}", s * I * levi_civita(i, j, k)),)))
            else:
                out.append(Relation("[K,Pi]=iPi", f"K{i}", f"Pi{j}"))
    return out


# Casimirs -------------------------------------------------------------------


def casimirs_2d(gens: dict, gamma) -> dict:
    """``C+- = X+-^2 + Y+-^2 +- 4 gamma L+- I+-``."""
    g = _e(gamma)
    out = {}
    for sign, tag in ((1, "+"), (-1, "-")):
        X, Y, L, Ic = (gens[f"{n}{tag}"] for n in "XYLI")
        out[f"C{tag}"] = spinop.mul(X, X) + spinop.mul(Y, Y) + spinop.mul(L, Ic).left_mul(g * (4 * sign))
    return out


@dataclass
class CasimirReport:
    brackets: dict
    hamiltonian_residual: PauliOperator
    casimir_bracket: PauliOperator

    @property
    def ok(self) -> bool:
        return (
            all(r.is_zero() for r in self.brackets.values())
            and self.hamiltonian_residual.is_zero()
            and self.casimir_bracket.is_zero()
        )

    def failures(self) -> list:
        bad = [k for k, r in self.brackets.items() if not r.is_zero()]
        if not self.hamiltonian_residual.is_zero():
            bad.append("H - (C+ + C-)/8")
        if not self.casimir_bracket.is_zero():
            bad.append("[C+, C-]")
        return bad


def casimir_check(system) -> CasimirReport:
    """Casimir brackets and ``H = (C+ + C-)/8`` for the 2D superintegrable system."""
    if system.name != "2d-superintegrable":
        raise ValueError("casimir_check applies to the 2D superintegrable system")
    gamma = system.potentials[1]
    C = casimirs_2d(system.integrals, gamma)
    brackets = {}
    for cn, Cop in C.items():
        for n, g in system.integrals.items():
            brackets[f"[{cn}, {n}]"] = spinop.commutator(Cop, g)
    residual = system.hamiltonian - (C["C+"] + C["C-"]).left_mul(Expression.const(1) / 8)
    return CasimirReport(brackets, residual, spinop.commutator(C["C+"], C["C-"]))
