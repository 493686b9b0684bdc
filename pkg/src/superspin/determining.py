"""Determining equations of first-order integrals.

The general first-order Hermitian ansatz ``X`` is commuted with the Hamiltonian
whose potentials ``V0``, ``V1`` are formal functions. Every coefficient of
``[H, X]`` at ``(sigma_mu, d^beta)`` is split into real and imaginary parts
(all unknown functions and constants are real), and each nonzero part becomes
one polynomial equation after clearing denominators.

Stages follow the order ``|beta|`` of the momentum monomial: ``second``
(``|beta| = 2``), ``first`` and ``zeroth``. Later stages substitute the general
solution of the scalar Killing block (the ``sigma_0`` second-order equations,
and in the plane also the ``sigma_3`` ones).

Equations are classed as ``principal`` or ``consequence``. A consequence is
either free of the stage's new unknowns (first stage, ``phi``-free) or reduces
to zero modulo the solved first-stage ``phi`` gradients (zeroth stage).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import diffop, spinop
from .catalog import COORDS_2D, COORDS_3D, build_hamiltonian_2d, build_hamiltonian_3d
from .coeffring import (
    Expression,
    ExpressionClassError,
    Polynomial,
    Symbol,
    UnboundSymbolError,
    as_expression,
    context_2d,
    context_3d,
    coordinate,
    free_jet,
    parameter,
    parse_expr,
)
from .coeffring.scalars import I
from .coeffring.symbols import JET, jet_base
from .diffop import derivative_name
from .linalg import rank, solve
from .spinop import SIGMA_NAMES, PauliOperator

__all__ = [
    "Ansatz",
    "Equation",
    "DeterminingSystem",
    "SolutionReport",
    "MatchReport",
    "STAGES",
    "generate",
    "check_solution",
    "match_reference",
    "load_reference",
    "reference_for",
    "specialize_conditions",
    "extract_ansatz_bindings",
    "staged_parameters",
]

STAGES = ("second", "first", "zeroth")
_ORDER = {"second": 2, "first": 1, "zeroth": 0}


def _x(c: str) -> Expression:
    return Expression.sym(coordinate(c))


def _p(name: str) -> Expression:
    return Expression.sym(parameter(name))


# ansatz ---------------------------------------------------------------------


@dataclass(frozen=True)
class Ansatz:
    """General first-order integral with symmetrized momentum terms.

    In the plane the ansatz is diagonal: component ``sigma_0`` carries the
    functions with index 0 and ``sigma_3`` those with index 1.
    """

    mode: str
    hbar: object = None

    def __post_init__(self):
        if self.mode not in ("2d", "3d"):
            raise ValueError(f"mode must be '2d' or '3d', got {self.mode!r}")

    @property
    def coords(self):
        return COORDS_2D if self.mode == "2d" else COORDS_3D

    def context(self, **extra):
        return context_2d(**extra) if self.mode == "2d" else context_3d(**extra)

    @property
    def components(self) -> dict:
        """Operator component -> function index used in the jet names."""
        return {0: 0, 3: 1} if self.mode == "2d" else {0: 0, 1: 1, 2: 2, 3: 3}

    @property
    def letters(self):
        return ("A", "B") if self.mode == "2d" else ("A", "B", "C")

    def jet(self, name: str) -> Symbol:
        return free_jet(name, self.coords)

    def function_names(self) -> list:
        out = []
        for k in self.components.values():
            out += [f"{L}{k}" for L in self.letters] + [f"phi{k}"]
        return out + ["V0", "V1"]

    def operator(self) -> PauliOperator:
        X = PauliOperator(self.coords)
        for mu, k in self.components.items():
            comp = diffop.ScalarDiffOp(self.coords)
            for L, c in zip(self.letters, self.coords):
                p = diffop.momentum(self.coords, c, self.hbar)
                comp = comp + diffop.symmetrize(Expression.sym(self.jet(f"{L}{k}")), p)
            comp = comp + diffop.multiplication(self.coords, Expression.sym(self.jet(f"phi{k}")))
            X = X + spinop.scalar(comp, mu)
        return X

    def hamiltonian(self) -> PauliOperator:
        V0, V1 = Expression.sym(self.jet("V0")), Expression.sym(self.jet("V1"))
        if self.mode == "2d":
            return build_hamiltonian_2d(V0, V1, self.hbar)
        return build_hamiltonian_3d(V0, V1, self.hbar)

    def killing_solution(self) -> dict:
        """General solution of the Killing block as jet bindings."""
        x, y = _x("x"), _x("y")
        if self.mode == "2d":
            out = {}
            for k in (0, 1):
                w = _p(f"omega{k}")
                out[self.jet(f"A{k}")] = w * y + _p(f"a{k}")
                out[self.jet(f"B{k}")] = -w * x + _p(f"b{k}")
            return out
        z = _x("z")
        a1, a2, a3 = _p("a1"), _p("a2"), _p("a3")
        b1, b2, b3 = _p("b1"), _p("b2"), _p("b3")
        return {
            self.jet("A0"): b1 - a3 * y + a2 * z,
            self.jet("B0"): b2 + a3 * x - a1 * z,
            self.jet("C0"): b3 - a2 * x + a1 * y,
        }

    def killing_parameters(self) -> tuple:
        if self.mode == "2d":
            return tuple(f"{n}{k}" for k in (0, 1) for n in ("omega", "a", "b"))
        return ("a1", "a2", "a3", "b1", "b2", "b3")

    def phi_jets(self) -> set:
        return {self.jet(f"phi{k}") for k in self.components.values()}


# equations ------------------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    """One real equation ``poly = 0`` extracted at ``(sigma, beta, part)``.

    ``poly`` equals the extracted coefficient part times ``multiplier``.
    """

    sigma: int
    beta: tuple
    part: str
    poly: Polynomial
    multiplier: Polynomial
    coords: tuple
    block: str = ""
    role: str = "principal"
    note: str = ""

    @property
    def label(self) -> str:
        d = derivative_name(self.coords, self.beta) or "1"
        return f"{SIGMA_NAMES[self.sigma]} {d} {self.part}"

    def expression(self) -> Expression:
        return Expression(self.poly)

    def jets(self) -> set:
        return {s for s in self.poly.symbols() if s.kind == JET}

    def __str__(self):
        return f"{self.poly} = 0"

    def as_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "beta": list(self.beta),
            "part": self.part,
            "block": self.block,
            "role": self.role,
            "equation": str(self.poly),
            "multiplier": str(self.multiplier),
            "note": self.note,
        }


@dataclass(frozen=True)
class DeterminingSystem:
    """Equations of one stage together with the substitution applied first."""

    mode: str
    stage: str
    equations: tuple
    substitution: dict = field(default_factory=dict)
    hbar: object = None

    def __len__(self):
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    @property
    def ansatz(self) -> Ansatz:
        return Ansatz(self.mode, self.hbar)

    def principal(self) -> list:
        return [e for e in self.equations if e.role == "principal"]

    def consequences(self) -> list:
        return [e for e in self.equations if e.role == "consequence"]

    def block(self, name: str) -> list:
        return [e for e in self.equations if e.block == name]

    def blocks(self) -> dict:
        out: dict = {}
        for e in self.equations:
            out[e.block] = out.get(e.block, 0) + 1
        return out

    def counts(self) -> dict:
        return {
            "total": len(self.equations),
            "principal": len(self.principal()),
            "consequence": len(self.consequences()),
            "blocks": self.blocks(),
        }

    def jets(self) -> set:
        out = set()
        for e in self.equations:
            out |= e.jets()
        return out

    def to_text(self) -> str:
        c = self.counts()
        lines = [
            f"# {self.mode} {self.stage}-order determining equations: "
            f"{c['total']} total, {c['principal']} principal, {c['consequence']} consequences"
        ]
        if self.substitution:
            subs = ", ".join(f"{_name(k)} = {v}" for k, v in sorted(self.substitution.items()))
            lines.append(f"# substituted: {subs}")
        for e in self.equations:
            lines.append(f"[{e.label}] ({e.block}, {e.role}) {e.poly} = 0")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "stage": self.stage,
            "counts": self.counts(),
            "substitution": {_name(k): str(v) for k, v in sorted(self.substitution.items())},
            "equations": [e.as_dict() for e in self.equations],
        }


def _name(s) -> str:
    return s.name if isinstance(s, Symbol) else str(s)


# generation -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _commutator(mode: str, hbar) -> PauliOperator:
    a = Ansatz(mode, hbar)
    return spinop.commutator(a.hamiltonian(), a.operator())


def _linear_coefficient(p: Polynomial, s: Symbol):
    """``(a, rest)`` with ``p = a*s + rest``; ``None`` if ``p`` is not linear in ``s``."""
    a, rest = {}, {}
    for m, c in p.terms.items():
        e = dict(m).get(s, 0)
        if e == 0:
            rest[m] = c
        elif e == 1:
            a[tuple(t for t in m if t[0] != s)] = c
        else:
            return None
    return Polynomial(a), Polynomial(rest)


def _phi_derivatives(p: Polynomial, phis) -> set:
    return {s for s in p.symbols() if s.kind == JET and jet_base(s) in phis and any(s.index)}


def _solved_forms(eqs, phis) -> dict:
    """Solve each equation for its single ``phi`` derivative where possible."""
    out = {}
    for e in eqs:
        ds = _phi_derivatives(e.poly, phis)
        if len(ds) != 1:
            continue
        (d,) = ds
        if d in out:
            continue
        split = _linear_coefficient(e.poly, d)
        if split is None:
            continue
        a, rest = split
        try:
            inv = Expression(a).inverse()
        except (ExpressionClassError, ZeroDivisionError):
            continue
        out[d] = -Expression(rest) * inv
    return out


def _reduce_phi(expr: Expression, solved: dict, phis, coords, rounds: int = 6) -> Expression:
    """Replace ``phi`` derivatives by derivatives of their solved forms."""
    by_base: dict = {}
    for d in solved:
        by_base.setdefault(jet_base(d), []).append(d)
    for _ in range(rounds):
        subs = {}
        for s in expr.symbols():
            if s.kind != JET or jet_base(s) not in phis or not any(s.index) or s in solved:
                if s in solved:
                    subs[s] = solved[s]
                continue
            # first coordinate carrying a derivative picks the solved form
            for k, n in enumerate(s.index):
                if not n:
                    continue
                lower = list(s.index)
                lower[k] -= 1
                d = s._replace(index=tuple(1 if j == k else 0 for j in range(len(s.index))))
                if d in solved:
                    v = solved[d]
                    for j, m in enumerate(lower):
                        for _ in range(m):
                            v = v.diff(coords[j])
                    subs[s] = v
                    break
        if not subs:
            break
        expr = expr.substitute(subs)
    return expr


def _classify(mode: str, stage: str, poly: Polynomial, phis) -> tuple:
    syms = poly.symbols()
    bases = {jet_base(s).name for s in syms if s.kind == JET}
    if stage == "second":
        return ("spin" if "V1" in bases else "killing"), "principal", ""
    if stage == "first":
        touched = {jet_base(s).name for s in _phi_derivatives(poly, phis)}
        if not touched:
            return "consequence", "consequence", "free of phi; second order in A, B, C and V1"
        if mode == "3d" and touched == {"phi0"}:
            return "phi0", "principal", ""
        return "phi", "principal", ""
    if "V0" in bases:
        return "V0", "principal", ""
    return "other", "principal", ""


def generate(mode: str, stage: str, hbar=None) -> DeterminingSystem:
    """Determining equations of ``[H, X] = 0`` at one stage.

    Parameters
    ----------
    mode : {'2d', '3d'}
    stage : {'second', 'first', 'zeroth'}
    hbar : bool, optional
        Track Planck's constant in the Hamiltonian and the ansatz.

    Returns
    -------
    DeterminingSystem
        Nonzero, pairwise non-proportional equations tagged with their origin.
    """
    if stage not in _ORDER:
        raise ValueError(f"stage must be one of {STAGES}, got {stage!r}")
    ansatz = Ansatz(mode, hbar)
    comm = _commutator(mode, hbar)
    subst = ansatz.killing_solution() if stage != "second" else {}
    phis = ansatz.phi_jets()
    order = _ORDER[stage]
    eqs = []
    seen = set()
    for mu in range(4):
        comp = comm[mu]
        for beta, c in comp.sorted_terms():
            if sum(beta) != order:
                continue
            if subst:
                c = c.substitute(subst)
            for part, e in (("re", c.real_part()), ("im", c.imag_part())):
                if not e:
                    continue
                num, mult = e.cleared()
                key = num.content_normalized()
                if key in seen:
                    continue
                seen.add(key)
                block, role, note = _classify(mode, stage, num, phis)
                eqs.append(Equation(mu, beta, part, num, mult, ansatz.coords, block, role, note))
    if stage == "zeroth":
        eqs = _mark_zeroth_consequences(mode, hbar, eqs, phis, ansatz.coords)
    return DeterminingSystem(mode, stage, tuple(eqs), subst, hbar)


def _mark_zeroth_consequences(mode, hbar, eqs, phis, coords) -> list:
    first = generate(mode, "first", hbar)
    solved = _solved_forms(first.principal(), phis)
    out = []
    for e in eqs:
        if e.block == "other":
            if not _reduce_phi(e.expression(), solved, phis, coords):
                e = Equation(e.sigma, e.beta, e.part, e.poly, e.multiplier, e.coords, "consequence",
                             "consequence", "reduces to zero modulo the first-stage phi gradients")
        out.append(e)
    return out


# solutions ------------------------------------------------------------------


@dataclass
class SolutionReport:
    """Residual of every equation after substituting a candidate solution."""

    residuals: list

    @property
    def ok(self) -> bool:
        return all(not r for _, r in self.residuals)

    def nonzero(self) -> list:
        return [(e, r) for e, r in self.residuals if r]

    def summary(self) -> str:
        bad = self.nonzero()
        if not bad:
            return f"all {len(self.residuals)} equations vanish"
        e, r = bad[0]
        return f"{len(bad)}/{len(self.residuals)} nonzero; first [{e.label}] residual {r}"


def _binding_key(k, ansatz: Ansatz):
    if isinstance(k, Symbol):
        return k
    if k in ansatz.function_names():
        return ansatz.jet(k)
    if k in ansatz.coords:
        raise ValueError(f"cannot bind the coordinate {k!r}")
    return parameter(k)


def _binding_value(v, ansatz: Ansatz) -> Expression:
    if isinstance(v, str):
        return parse_expr(v, ansatz.context(declare_unknown=True))
    return as_expression(v)


def normalize_bindings(bindings, ansatz: Ansatz) -> dict:
    return {_binding_key(k, ansatz): _binding_value(v, ansatz) for k, v in bindings.items()}


def check_solution(system: DeterminingSystem, bindings, formal=()) -> SolutionReport:
    """Substitute ``bindings`` into every equation and normalize.

    Every unknown function must be bound, possibly to another formal function,
    or listed in ``formal``; otherwise :class:`UnboundSymbolError` names the
    missing ones. Parameters may stay free.
    """
    ansatz = system.ansatz
    b = normalize_bindings(bindings, ansatz)
    keep = {_binding_key(f, ansatz) for f in formal}
    bases = {jet_base(s) for s in system.jets()}
    missing = {s for s in bases if s not in b and s not in keep}
    if missing:
        raise UnboundSymbolError(missing)
    return SolutionReport([(e, e.expression().substitute(b)) for e in system.equations])


# matching against references --------------------------------------------------


@dataclass
class MatchReport:
    """Comparison of generated equations with a reference list."""

    bijection: bool
    span_equal: bool
    pairs: list
    unmatched_generated: list
    unmatched_reference: list
    combined: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijection or self.span_equal

    def summary(self) -> str:
        if self.bijection:
            return f"bijection up to scalar multiples on {len(self.pairs)} equations"
        if self.span_equal:
            return (f"span equality; {len(self.pairs)} matched directly, "
                    f"{len(self.combined)} required linear combinations")
        gen = "; ".join(self.unmatched_generated) or "none"
        ref = "; ".join(self.unmatched_reference) or "none"
        return f"span mismatch; generated outside reference span: {gen}; reference outside generated span: {ref}"


def _vector(p: Polynomial) -> dict:
    return {m: Expression.const(c) for m, c in p.terms.items()}


def match_reference(equations, reference) -> MatchReport:
    """Match generated equations against ``reference`` ``[(label, Polynomial)]``.

    First tries a bijection up to nonzero scalar multiples; otherwise compares
    linear spans over the Gaussian rationals.
    """
    gen = [(e.label, e.poly) if isinstance(e, Equation) else e for e in equations]
    ref = list(reference)
    ref_keys: dict = {}
    for lab, p in ref:
        ref_keys.setdefault(p.content_normalized(), []).append(lab)
    pairs, left_gen = [], []
    used = set()
    for lab, p in gen:
        cands = [r for r in ref_keys.get(p.content_normalized(), []) if r not in used]
        if cands:
            used.add(cands[0])
            pairs.append((lab, cands[0]))
        else:
            left_gen.append((lab, p))
    left_ref = [(lab, p) for lab, p in ref if lab not in used]
    if not left_gen and not left_ref:
        return MatchReport(True, True, pairs, [], [])
    gv = [_vector(p) for _, p in gen]
    rv = [_vector(p) for _, p in ref]
    out_gen = [lab for lab, p in left_gen if solve(rv, _vector(p)) is None]
    out_ref = [lab for lab, p in left_ref if solve(gv, _vector(p)) is None]
    span_equal = not out_gen and not out_ref and rank(gv) == rank(rv)
    combined = [lab for lab, _ in left_gen] if span_equal else []
    return MatchReport(False, span_equal, pairs, out_gen, out_ref, combined)


REFERENCES = {
    ("2d", "phi"): "planar_first_order.txt",
    ("3d", "spin"): "spatial_spin_block.txt",
    ("3d", "phi"): "spatial_phi_block.txt",
    ("3d", "phi0"): "spatial_phi0_block.txt",
}


def load_reference(filename: str, mode: str) -> list:
    """Parse a reference file into ``[(label, Polynomial)]``.

    Lines are ``lhs = rhs`` or bare expressions; ``#`` starts a comment. Killing
    coefficients ``A0, B0, C0`` (3D) are replaced by their general solution.
    """
    ansatz = Ansatz(mode)
    ctx = ansatz.context()
    text = resources.files("superspin.data").joinpath(filename).read_text()
    subst = ansatz.killing_solution() if mode == "3d" else {}
    out = []
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            lhs, rhs = line.split("=", 1)
            e = parse_expr(lhs, ctx) - (parse_expr(rhs, ctx) if rhs.strip() else Expression())
        else:
            e = parse_expr(line, ctx)
        if subst:
            e = e.substitute(subst)
        num, _ = e.cleared()
        out.append((f"{filename}:{n}", num))
    return out


def reference_for(mode: str, block: str) -> list:
    return load_reference(REFERENCES[(mode, block)], mode)


def reference_comparison(mode: str) -> list:
    """``(block name, generated equations, reference)`` for every reference block."""
    if mode == "2d":
        first, zeroth = generate("2d", "first"), generate("2d", "zeroth")
        return [("phi+V0", first.block("phi") + zeroth.block("V0"), reference_for("2d", "phi"))]
    second, first = generate("3d", "second"), generate("3d", "first")
    return [
        ("spin", second.block("spin"), reference_for("3d", "spin")),
        ("phi", first.block("phi"), reference_for("3d", "phi")),
        ("phi0", first.block("phi0"), reference_for("3d", "phi0")),
    ]


# known solutions ------------------------------------------------------------


def extract_ansatz_bindings(X: PauliOperator, ansatz: Ansatz) -> dict:
    """Ansatz functions reproducing the first-order operator ``X``.

    The symmetrized term ``(f p + p f)/2`` contributes ``-i hbar f`` to the
    ``d_c`` coefficient and ``-i hbar f_c / 2`` to the zeroth-order one.
    """
    if X.order() > 1:
        raise ValueError("only first-order operators fit the ansatz")
    h = diffop.hbar_factor(ansatz.hbar)
    unit = (h * (-I)).inverse()
    out = {}
    n = len(ansatz.coords)
    for mu in range(4):
        comp = X[mu]
        if mu not in ansatz.components:
            if not comp.is_zero():
                raise ValueError(f"operator has a {SIGMA_NAMES[mu]} component outside the ansatz")
            continue
        k = ansatz.components[mu]
        correction = Expression()
        for j, (L, c) in enumerate(zip(ansatz.letters, ansatz.coords)):
            beta = tuple(1 if i == j else 0 for i in range(n))
            f = comp.coefficient(beta) * unit
            out[ansatz.jet(f"{L}{k}")] = f
            correction = correction + f.diff(c)
        phi = comp.coefficient((0,) * n) - correction * h * (-I) * Expression.const(1) / 2
        out[ansatz.jet(f"phi{k}")] = phi
    return out


def staged_parameters(ansatz: Ansatz, bindings: dict) -> dict:
    """Values of the Killing-solution parameters implied by bound ``A, B, C``."""
    zero = {coordinate(c): 0 for c in ansatz.coords}
    out = {}

    def at0(e):
        return e.substitute(zero)

    if ansatz.mode == "2d":
        for k in (0, 1):
            A = bindings[ansatz.jet(f"A{k}")]
            B = bindings[ansatz.jet(f"B{k}")]
            out[parameter(f"omega{k}")] = A.diff("y").substitute(zero)
            out[parameter(f"a{k}")] = at0(A)
            out[parameter(f"b{k}")] = at0(B)
        return out
    A0, B0, C0 = (bindings[ansatz.jet(n)] for n in ("A0", "B0", "C0"))
    out[parameter("b1")] = at0(A0)
    out[parameter("b2")] = at0(B0)
    out[parameter("b3")] = at0(C0)
    out[parameter("a1")] = C0.diff("y").substitute(zero)
    out[parameter("a2")] = A0.diff("z").substitute(zero)
    out[parameter("a3")] = B0.diff("x").substitute(zero)
    return out


def specialize_conditions(system: DeterminingSystem, v1=None) -> dict:
    """Consistency checks of the two solvability cases of the 3D first stage.

    Case ``translations``: ``b_i`` formal, ``V1 = 1/r^2`` (or ``v1``) and the
    ansatz functions of ``sum a_i J_i + b_i Pi_i + s_i S_i``.
    Case ``rotations``: ``b_i = 0``, ``V1`` a formal radial function and the
    functions of ``sum a_i J_i``.
    """
    from .catalog import superintegrable_3d_generators
    from .coeffring import radial_jet

    if system.mode != "3d" or system.stage != "first":
        raise ValueError("specialize_conditions expects the 3D first-stage system")
    ansatz = system.ansatz
    gens = superintegrable_3d_generators(ansatz.hbar)
    a = [_p(f"a{k}") for k in (1, 2, 3)]
    b = [_p(f"b{k}") for k in (1, 2, 3)]
    s = [_p(f"s{k}") for k in (1, 2, 3)]
    r2_inv = (_x("x") ** 2 + _x("y") ** 2 + _x("z") ** 2).inverse()
    h = diffop.hbar_factor(ansatz.hbar)
    results = {}

    X = PauliOperator(ansatz.coords)
    for k in range(3):
        X = X + gens[f"J{k + 1}"].left_mul(a[k]) + gens[f"Pi{k + 1}"].left_mul(b[k]) + gens[f"S{k + 1}"].left_mul(s[k])
    bind = extract_ansatz_bindings(X, ansatz)
    bind[ansatz.jet("V1")] = as_expression(v1) if v1 is not None else h * r2_inv
    bind = {k: v for k, v in bind.items() if k not in ansatz.killing_solution()}
    results["translations"] = check_solution(system, bind)

    X = PauliOperator(ansatz.coords)
    for k in range(3):
        X = X + gens[f"J{k + 1}"].left_mul(a[k])
    bind = extract_ansatz_bindings(X, ansatz)
    bind = {k: v for k, v in bind.items() if k not in ansatz.killing_solution()}
    bind[ansatz.jet("V1")] = Expression.sym(radial_jet("V1", ansatz.coords))
    for k in (1, 2, 3):
        bind[parameter(f"b{k}")] = Expression()
    results["rotations"] = check_solution(system, bind)
    return results
