"""Canonical rational expressions with restricted denominators.

An :class:`Expression` is ``num / prod(base_k ** e_k)`` where every base is a
registered irreducible polynomial (single coordinates and parameters are always
allowed; ``x^2+y^2`` and ``x^2+y^2+z^2`` are registered by default). No base in
the denominator divides the numerator, and bases are pairwise coprime, so the
representation is unique and equality is structural.
"""

from __future__ import annotations

from .errors import ExpressionClassError, PoleError, UnboundSymbolError
from .poly import Polynomial
from .scalars import ONE, ZERO, GaussianRational, as_scalar
from .symbols import COORDINATE, JET, PARAMETER, Symbol, coordinate, free_jet, jet_base

__all__ = [
    "Expression",
    "DEFAULT_BASES",
    "RHO2",
    "R2",
    "as_expression",
]


def _poly_key(p: Polynomial):
    return p.sort_key()


def _sq(name):
    return Polynomial.symbol(coordinate(name), 2)


RHO2 = _sq("x") + _sq("y")
R2 = RHO2 + _sq("z")
DEFAULT_BASES = (RHO2, R2)


class Expression:
    """Immutable canonical expression ``num / den``.

    ``den`` is a sorted tuple of ``(base, exponent)`` pairs with positive
    exponents; an empty tuple means a polynomial.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial | None = None, den: tuple = ()):
        self.num = num if num is not None else Polynomial()
        self.den = den
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def make(cls, num: Polynomial, den=None) -> Expression:
        """Build and cancel; ``den`` maps base polynomials to exponents."""
        if not num.terms:
            return cls()
        if not den:
            return cls(num)
        kept = []
        for base, e in den.items():
            while e > 0:
                q = num.exact_div(base)
                if q is None:
                    break
                num, e = q, e - 1
            if e > 0:
                kept.append((base, e))
        kept.sort(key=lambda t: _poly_key(t[0]))
        return cls(num, tuple(kept))

    @classmethod
    def const(cls, c) -> Expression:
        return cls(Polynomial.constant(c))

    @classmethod
    def sym(cls, s: Symbol, exp: int = 1) -> Expression:
        return cls(Polynomial.symbol(s, exp))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> Expression:
        return cls(p)

    @staticmethod
    def sum(items) -> Expression:
        """Sum many expressions with a single cancellation pass."""
        groups: dict = {}
        for it in items:
            it = as_expression(it)
            if not it.num.terms:
                continue
            g = groups.get(it.den)
            groups[it.den] = it.num if g is None else g + it.num
        if not groups:
            return Expression()
        if len(groups) == 1:
            (den, num), = groups.items()
            return Expression.make(num, dict(den))
        exps: dict = {}
        for den in groups:
            for b, e in den:
                if exps.get(b, 0) < e:
                    exps[b] = e
        total = Polynomial()
        for den, num in groups.items():
            have = dict(den)
            factor = None
            for b, e in exps.items():
                k = e - have.get(b, 0)
                if k:
                    f = b ** k
                    factor = f if factor is None else factor * f
            total = total + (num * factor if factor is not None else num)
        return Expression.make(total, exps)

    # predicates -------------------------------------------------------------

    def __bool__(self):
        return bool(self.num.terms)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_polynomial(self) -> bool:
        return not self.den

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"expression {self} is not constant")
        return self.num.constant_value()

    def __eq__(self, other):
        if not isinstance(other, Expression):
            try:
                other = as_expression(other)
            except TypeError:
                return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def symbols(self) -> set:
        out = self.num.symbols()
        for b, _ in self.den:
            out |= b.symbols()
        return out

    def jets(self) -> set:
        return {s for s in self.symbols() if s.kind == JET}

    def denominator(self) -> Polynomial:
        out = Polynomial.constant(1)
        for b, e in self.den:
            out = out * b**e
        return out

    def real_part(self) -> Expression:
        """Real part with all symbols real; denominators are real by construction."""
        return Expression.make(self.num.real_part(), dict(self.den))

    def imag_part(self) -> Expression:
        return Expression.make(self.num.imag_part(), dict(self.den))

    def cleared(self):
        """``(numerator, multiplier)`` with ``self * multiplier == numerator``."""
        return self.num, self.denominator()

    # arithmetic -------------------------------------------------------------

    def __add__(self, other) -> Expression:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            return Expression.make(self.num + other.num, dict(self.den))
        return Expression.sum((self, other))

    __radd__ = __add__

    def __neg__(self) -> Expression:
        return Expression(-self.num, self.den)

    def __sub__(self, other) -> Expression:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Expression:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> Expression:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.terms or not other.num.terms:
            return Expression()
        if not other.den and other.num.is_constant():
            return Expression(self.num.scale(other.num.constant_value()), self.den)
        if not self.den and self.num.is_constant():
            return Expression(other.num.scale(self.num.constant_value()), other.den)
        num = self.num * other.num
        if not self.den and not other.den:
            return Expression(num)
        den = dict(self.den)
        for b, e in other.den:
            den[b] = den.get(b, 0) + e
        return Expression.make(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Expression:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> Expression:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> Expression:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return Expression.const(1)
        num = self.num**n
        return Expression(num, tuple((b, e * n) for b, e in self.den))

    def inverse(self, bases=DEFAULT_BASES) -> Expression:
        """Multiplicative inverse; the numerator must factor over registered bases."""
        if not self.num.terms:
            raise PoleError("division by zero expression")
        factors, unit = factor_over_bases(self.num, bases)
        num = self.denominator().scale(unit.inverse())
        return Expression.make(num, factors)

    def conjugate(self) -> Expression:
        """Complex conjugate with all symbols real."""
        return Expression(self.num.conjugate(), self.den)

    # calculus ---------------------------------------------------------------

    def diff(self, c: str) -> Expression:
        """Partial derivative by the coordinate named ``c``."""
        dnum = self.num.diff(c)
        if not self.den:
            return Expression(dnum)
        bases = [b for b, _ in self.den]
        prod_all = Polynomial.constant(1)
        for b in bases:
            prod_all = prod_all * b
        top = dnum * prod_all
        for k, (b, e) in enumerate(self.den):
            db = b.diff(c)
            if not db.terms:
                continue
            others = Polynomial.constant(e)
            for j, bj in enumerate(bases):
                if j != k:
                    others = others * bj
            top = top - self.num * db * others
        den = {b: e + 1 for b, e in self.den}
        return Expression.make(top, den)

    # substitution and evaluation --------------------------------------------

    def substitute(self, bindings) -> Expression:
        """Simultaneous substitution ``symbol -> expression`` followed by normalization.

        Binding an underived jet also fixes all of its derivatives, obtained by
        differentiating the bound value.
        """
        resolver = BindingResolver(bindings)
        return resolver.apply(self)

    def evaluate(self, point=None, params=None) -> GaussianRational:
        """Exact value with coordinates and parameters bound to scalars."""
        values = {}
        for mapping in (point or {}, params or {}):
            for k, v in mapping.items():
                values[_as_symbol_key(k, values)] = as_scalar(v)
        missing = {s for s in self.symbols() if s not in values}
        if missing:
            raise UnboundSymbolError(missing)
        den = ONE
        for b, e in self.den:
            den = den * b.evaluate(values) ** e
        if not den:
            raise PoleError(f"pole of {self} at {_fmt_values(values)}")
        return self.num.evaluate(values) / den

    # printing ---------------------------------------------------------------

    def __str__(self):
        from .printer import format_expression

        return format_expression(self)

    def __repr__(self):
        return f"Expression({str(self)!r})"


def _fmt_values(values):
    return "{" + ", ".join(f"{s}={v}" for s, v in sorted(values.items())) + "}"


def _as_symbol_key(k, values):
    if isinstance(k, Symbol):
        return k
    if isinstance(k, str):
        kind = COORDINATE if k in ("x", "y", "z") else PARAMETER
        return Symbol(kind, k)
    raise TypeError(f"cannot bind {k!r}")


def _coerce(v):
    if isinstance(v, Expression):
        return v
    try:
        return Expression.const(as_scalar(v))
    except TypeError:
        if isinstance(v, Polynomial):
            return Expression(v)
        if isinstance(v, Symbol):
            return Expression.sym(v)
        return NotImplemented


def as_expression(v) -> Expression:
    out = _coerce(v)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(v).__name__} to Expression")
    return out


def _normalize_base(p: Polynomial) -> Polynomial:
    return p.content_normalized()


def factor_over_bases(p: Polynomial, bases=DEFAULT_BASES):
    """Write ``p = unit * prod(base ** e)``; raise if impossible.

    Single coordinates and parameters always count as bases, so monomials are
    handled directly; ``bases`` lists the registered non-monomial polynomials.
    """
    factors: dict = {}
    rem = p
    for b in bases:
        b = _normalize_base(b)
        if not (b.symbols() <= rem.symbols()):
            continue
        while True:
            q = rem.exact_div(b)
            if q is None:
                break
            factors[b] = factors.get(b, 0) + 1
            rem = q
    if len(rem.terms) != 1:
        raise ExpressionClassError(
            f"denominator {p} is not a product of registered bases"
        )
    (mono, unit), = rem.terms.items()
    for s, e in mono:
        if s.kind == JET:
            raise ExpressionClassError(
                f"denominator {p} contains the jet {s}; only coordinates, "
                "parameters and registered bases may divide"
            )
        base = Polynomial.symbol(s)
        factors[base] = factors.get(base, 0) + e
    return factors, unit


class BindingResolver:
    """Resolve symbol values for a simultaneous substitution, deriving jet derivatives."""

    def __init__(self, bindings):
        self.bindings = {}
        for k, v in bindings.items():
            if isinstance(k, str):
                k = _as_symbol_key(k, {})
            self.bindings[k] = as_expression(v)
        self._cache: dict = {}
        self._validate()

    def _validate(self):
        for s, v in self.bindings.items():
            if s.kind == JET and s.rule == "radial" and s.index == (0,):
                coords = s.arg
                for i in range(len(coords)):
                    for j in range(i + 1, len(coords)):
                        ci, cj = Expression.sym(coordinate(coords[i])), Expression.sym(coordinate(coords[j]))
                        ang = ci * v.diff(coords[j]) - cj * v.diff(coords[i])
                        if ang:
                            raise ExpressionClassError(
                                f"radial jet {s} bound to non-radial expression {v}"
                            )
            if s.kind == JET and s.rule == "antiderivative":
                of, c = s.arg
                target = free_jet(of, (c,))
                if target in self.bindings:
                    if v.diff(c) != self.bindings[target]:
                        raise ExpressionClassError(
                            f"antiderivative {s} = {v} is inconsistent with {target}"
                        )

    def value(self, s: Symbol):
        """Bound value of ``s`` or ``None`` when ``s`` stays free."""
        if s in self._cache:
            return self._cache[s]
        out = self.bindings.get(s)
        if out is None and s.kind == JET and s.rule in ("free", "radial"):
            base = jet_base(s)
            if base != s and base in self.bindings:
                out = self._derive(s, self.bindings[base])
        self._cache[s] = out
        return out

    def _derive(self, s: Symbol, v: Expression) -> Expression:
        if s.rule == "free":
            for c, n in zip(s.arg, s.index):
                for _ in range(n):
                    v = v.diff(c)
            return v
        c = s.arg[0]
        two_c = Expression.sym(coordinate(c)) * 2
        for _ in range(s.index[0]):
            v = v.diff(c) / two_c
        return v

    def apply_poly(self, p: Polynomial) -> Expression:
        free_part: dict = {}
        bound_parts = []
        for m, c in p.terms.items():
            factor = None
            rest = []
            for s, e in m:
                val = self.value(s)
                if val is None:
                    rest.append((s, e))
                else:
                    f = val**e
                    factor = f if factor is None else factor * f
            if factor is None:
                free_part[m] = c
            else:
                bound_parts.append(factor * Expression(Polynomial({tuple(rest): c})))
        return Expression.sum([Expression(Polynomial(free_part))] + bound_parts)

    def apply(self, e: Expression) -> Expression:
        num = self.apply_poly(e.num)
        if not e.den:
            return num
        keep = {}
        out = num
        for b, k in e.den:
            if any(self.value(s) is not None for s in b.symbols()):
                bv = self.apply_poly(b)
                if not bv:
                    raise PoleError(f"substitution makes denominator {b} vanish")
                out = out * (bv.inverse() ** k)
            else:
                keep[b] = k
        if keep:
            out = out * Expression.make(Polynomial.constant(1), keep)
        return out
