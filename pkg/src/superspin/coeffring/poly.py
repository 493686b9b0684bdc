"""Sparse multivariate polynomials over Q(i) in :class:`Symbol` variables.

A monomial is a tuple of ``(symbol, exponent)`` pairs sorted by symbol. The
monomial order used for leading terms and printing is graded; ties are broken
by comparing exponents symbol by symbol, a *larger* exponent of an earlier
symbol ranking lower. This is a valid monomial order (compatible with
multiplication), which is all exact division needs.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .scalars import ONE, ZERO, GaussianRational, as_scalar
from .symbols import COORDINATE, PARAMETER, Symbol, free_jet

__all__ = ["Polynomial", "mono_key", "mono_mul", "mono_div", "symbol_derivative"]

Monomial = tuple
_MISSING = object()


def mono_key(m: Monomial):
    return (sum(e for _, e in m), tuple((s, -e) for s, e in m))


def print_key(m: Monomial):
    return (-sum(e for _, e in m), tuple((s, -e) for s, e in m))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: Monomial, b: Monomial):
    """``a / b`` if ``b`` divides ``a``, else ``None``."""
    d = dict(a)
    for s, e in b:
        have = d.get(s, 0)
        if have < e:
            return None
        if have == e:
            del d[s]
        else:
            d[s] = have - e
    return tuple(sorted(d.items()))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomials to nonzero scalars."""

    __slots__ = ("terms", "_hash", "_iform", "_syms")

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}
        self._hash = None
        self._iform = None
        self._syms = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_dict(cls, terms) -> Polynomial:
        return cls({m: as_scalar(c) for m, c in terms.items() if c})

    @classmethod
    def constant(cls, c) -> Polynomial:
        c = as_scalar(c)
        return cls({(): c} if c else {})

    @classmethod
    def symbol(cls, s: Symbol, exp: int = 1) -> Polynomial:
        return cls({((s, exp),): ONE} if exp else {(): ONE})

    # predicates -------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), ZERO)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def symbols(self) -> set:
        if self._syms is None:
            out = set()
            for m in self.terms:
                out.update(s for s, _ in m)
            self._syms = frozenset(out)
        return set(self._syms)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in print order: higher degree first, then ``x`` before ``y``."""
        return sorted(self.terms.items(), key=lambda t: print_key(t[0]))

    def leading_term(self):
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    # arithmetic -------------------------------------------------------------

    def __add__(self, other: Polynomial) -> Polynomial:
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(out)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self.terms.items()})

    def scale(self, c) -> Polynomial:
        c = as_scalar(c)
        if not c:
            return Polynomial()
        if c == ONE:
            return self
        return Polynomial({m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c=ONE) -> Polynomial:
        return Polynomial({mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __mul__(self, other: Polynomial) -> Polynomial:
        if not self.terms or not other.terms:
            return Polynomial()
        if len(other.terms) == 1:
            (m, c), = other.terms.items()
            return self.mul_monomial(m, c) if m else self.scale(c)
        if len(self.terms) == 1:
            return other * self
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                v = out.get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return Polynomial({m: c for m, c in out.items() if c})

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Polynomial.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, d: Polynomial):
        """Quotient ``self / d`` if ``d`` divides ``self`` exactly, else ``None``."""
        if not d.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return self
        if len(d.terms) == 1:
            (dm, dc), = d.terms.items()
            inv = dc.inverse()
            out = {}
            for m, c in self.terms.items():
                q = mono_div(m, dm)
                if q is None:
                    return None
                out[q] = c * inv
            return Polynomial(out)
        lm, lc = d.leading_term()
        inv = lc.inverse()
        rem = dict(self.terms)
        quot = {}
        while rem:
            m = max(rem, key=mono_key)
            q = mono_div(m, lm)
            if q is None:
                return None
            c = rem[m] * inv
            quot[q] = c
            for dmono, dcoef in d.terms.items():
                t = mono_mul(q, dmono)
                v = rem.get(t, ZERO) - c * dcoef
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Polynomial(quot)

    # calculus and maps ------------------------------------------------------

    def diff(self, c: str) -> Polynomial:
        """Partial derivative by the coordinate named ``c``."""
        out = {}
        cache = {}
        for m, coef in self.terms.items():
            for k, (s, e) in enumerate(m):
                ds = cache.get(s, _MISSING)
                if ds is _MISSING:
                    ds = cache[s] = symbol_derivative(s, c)
                if ds is None:
                    continue
                rest = list(m)
                if e == 1:
                    del rest[k]
                else:
                    rest[k] = (s, e - 1)
                rest = tuple(rest)
                factor = coef * e
                for dm, dc in ds.terms.items():
                    t = mono_mul(rest, dm)
                    v = out.get(t)
                    out[t] = dc * factor if v is None else v + dc * factor
        return Polynomial({m: v for m, v in out.items() if v})

    def conjugate(self) -> Polynomial:
        """Complex conjugate, treating every symbol as real."""
        return Polynomial({m: c.conjugate() for m, c in self.terms.items()})

    def real_part(self) -> Polynomial:
        return Polynomial(
            {m: GaussianRational._raw(c.re, Fraction(0)) for m, c in self.terms.items() if c.re}
        )

    def imag_part(self) -> Polynomial:
        return Polynomial(
            {m: GaussianRational._raw(c.im, Fraction(0)) for m, c in self.terms.items() if c.im}
        )

    def content_normalized(self) -> Polynomial:
        """Scalar multiple with leading coefficient 1."""
        if not self.terms:
            return self
        _, lc = self.leading_term()
        return self.scale(lc.inverse())

    def map_coefficients(self, f) -> Polynomial:
        return Polynomial.from_dict({m: f(c) for m, c in self.terms.items()})

    def evaluate(self, values) -> GaussianRational:
        """Evaluate with every symbol bound in ``values`` (symbol -> scalar)."""
        syms = self.symbols()
        for s in syms:
            if s not in values:
                raise KeyError(s)
        if all(not values[s].im for s in syms):
            return self._evaluate_real(values)
        total = ZERO
        powers = {}
        for m, c in self.terms.items():
            t = c
            for s, e in m:
                p = powers.get((s, e))
                if p is None:
                    p = powers[(s, e)] = values[s] ** e
                t = t * p
            total = total + t
        return total

    def _integer_form(self):
        """``(L, [(monomial, L*re, L*im, degree)], max degree)`` with integer entries."""
        if self._iform is None:
            L = 1
            for c in self.terms.values():
                L = lcm(L, c.re.denominator, c.im.denominator)
            rows = [
                (m, int(c.re * L), int(c.im * L), sum(e for _, e in m))
                for m, c in self.terms.items()
            ]
            self._iform = (L, rows, max((r[3] for r in rows), default=0))
        return self._iform

    def _evaluate_real(self, values) -> GaussianRational:
        # all point values real: clear denominators and sum in integers
        L, rows, top = self._integer_form()
        syms = self._syms
        den = 1
        for s in syms:
            den = lcm(den, values[s].re.denominator)
        nums = {s: values[s].re.numerator * (den // values[s].re.denominator) for s in syms}
        powers: dict = {}
        scales = [den**k for k in range(top + 1)]
        re = im = 0
        for m, a, b, k in rows:
            p = scales[top - k]
            for s, e in m:
                q = powers.get((s, e))
                if q is None:
                    q = powers[(s, e)] = nums[s] ** e
                p *= q
            re += a * p
            im += b * p
        total = L * scales[top]
        return GaussianRational._raw(Fraction(re, total), Fraction(im, total))

    def sort_key(self):
        return tuple((print_key(m), c.re, c.im) for m, c in self.sorted_terms())

    def __repr__(self):
        from .printer import format_polynomial

        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        from .printer import format_polynomial

        return format_polynomial(self)


def symbol_derivative(s: Symbol, c: str):
    """``d s / d c`` as a polynomial, or ``None`` when it vanishes."""
    if s.kind == PARAMETER:
        return None
    if s.kind == COORDINATE:
        return Polynomial({(): ONE}) if s.name == c else None
    if s.rule == "free":
        if c not in s.arg:
            return None
        k = s.arg.index(c)
        idx = list(s.index)
        idx[k] += 1
        return Polynomial.symbol(s._replace(index=tuple(idx)))
    if s.rule == "radial":
        if c not in s.arg:
            return None
        nxt = s._replace(index=(s.index[0] + 1,))
        return Polynomial({tuple(sorted([(Symbol(COORDINATE, c), 1), (nxt, 1)])): as_scalar(2)})
    if s.rule == "antiderivative":
        of, coord = s.arg
        if c != coord:
            return None
        return Polynomial.symbol(free_jet(of, (coord,)))
    raise ValueError(f"unknown jet rule {s.rule!r}")

