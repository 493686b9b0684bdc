"""Recursive-descent parser for the expression grammar.

::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | IDENT | '(' expr ')'

``i`` is the imaginary unit; other identifiers resolve through a
:class:`Context`. Jet derivatives are written ``F_xy`` (free jets) or
``F_uu`` (radial jets, derivatives by ``u``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .errors import ExpressionClassError, ParseError
from .expr import DEFAULT_BASES, Expression
from .scalars import I
from .symbols import (
    Symbol,
    antiderivative_jet,
    coordinate,
    free_jet,
    parameter,
    radial_jet,
)

__all__ = ["Context", "parse_expr", "context_2d", "context_3d"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Context:
    """Declared symbols for parsing.

    ``functions`` holds underived jets; derivatives of those are recognised by
    suffix. ``aliases`` maps names to fixed expressions (``xi -> y/x``).
    """

    coords: tuple = ("x", "y", "z")
    parameters: tuple = ()
    functions: tuple = ()
    aliases: tuple = ()
    bases: tuple = DEFAULT_BASES
    declare_unknown: bool = False

    def with_parameters(self, *names) -> Context:
        return replace(self, parameters=self.parameters + tuple(n for n in names if n not in self.parameters))

    def with_functions(self, *jets) -> Context:
        names = {f.name for f in jets}
        kept = tuple(f for f in self.functions if f.name not in names)
        return replace(self, functions=kept + tuple(jets))

    def with_alias(self, name: str, value: Expression) -> Context:
        return replace(self, aliases=self.aliases + ((name, value),))

    def function(self, name: str):
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def resolve(self, name: str):
        """Expression for ``name`` or ``None`` if undeclared."""
        if name == "i":
            return Expression.const(I)
        for a, v in self.aliases:
            if a == name:
                return v
        if name in self.coords:
            return Expression.sym(coordinate(name))
        if name in self.parameters:
            return Expression.sym(parameter(name))
        f = self.function(name)
        if f is not None:
            return Expression.sym(f)
        if "_" in name:
            base, suffix = name.rsplit("_", 1)
            f = self.function(base)
            if f is not None and suffix:
                jet = _jet_with_suffix(f, suffix)
                if jet is not None:
                    return Expression.sym(jet)
        return None


def _jet_with_suffix(f: Symbol, suffix: str):
    if f.rule == "free":
        if any(ch not in f.arg for ch in suffix):
            return None
        return f._replace(index=tuple(suffix.count(c) for c in f.arg))
    if f.rule == "radial":
        if set(suffix) != {"u"}:
            return None
        return f._replace(index=(len(suffix),))
    return None


def context_2d(**extra) -> Context:
    coords = ("x", "y")
    funcs = [free_jet(n, coords) for n in ("V0", "V1", "A0", "A1", "B0", "B1", "phi0", "phi1")]
    params = ("gamma", "hbar", "omega0", "omega1", "a0", "a1", "b0", "b1")
    return Context(coords=coords, parameters=params, functions=tuple(funcs), **extra)


def context_3d(**extra) -> Context:
    coords = ("x", "y", "z")
    names = ["V0", "V1", "A0", "B0", "C0", "phi0"]
    names += [f"{L}{k}" for L in "ABC" for k in (1, 2, 3)]
    names += [f"phi{k}" for k in (1, 2, 3)]
    funcs = [free_jet(n, coords) for n in names]
    params = ("gamma", "hbar", "w", "a1", "a2", "a3", "b1", "b2", "b3")
    return Context(coords=coords, parameters=params, functions=tuple(funcs), **extra)


@dataclass
class _Parser:
    text: str
    ctx: Context
    tokens: list = field(default_factory=list)
    k: int = 0

    def __post_init__(self):
        pos = 0
        text = self.text
        end = len(text.rstrip())
        while pos < end:
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("ident", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
                self.tokens.append(("op", ch, m.start(3)))
            pos = m.end()
        self.tokens.append(("end", "", end))

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "end":
            raise ParseError(f"expected {value!r}", tok[2], self.text)
        return tok

    def parse(self) -> Expression:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], self.text)
        return e

    def expr(self) -> Expression:
        terms = [self.term()]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else -t)
        return Expression.sum(terms) if len(terms) > 1 else terms[0]

    def term(self) -> Expression:
        e = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            pos = self.peek()[2]
            f = self.factor()
            if op == "*":
                e = e * f
            else:
                try:
                    e = e * f.inverse(self.ctx.bases)
                except ExpressionClassError as exc:
                    raise ParseError(f"denominator outside registered class ({exc})", pos, self.text) from None
                except ZeroDivisionError:
                    raise ParseError("division by zero", pos, self.text) from None
        return e

    def factor(self) -> Expression:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            f = self.factor()
            return -f if tok[1] == "-" else f
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            neg = False
            if self.peek()[1] == "-" and self.peek()[0] == "op":
                self.take()
                neg = True
            t = self.take()
            if t[0] != "int":
                raise ParseError("exponent must be an integer literal", t[2], self.text)
            n = int(t[1])
            if neg:
                try:
                    return base.inverse(self.ctx.bases) ** n
                except ExpressionClassError as exc:
                    raise ParseError(f"denominator outside registered class ({exc})", t[2], self.text) from None
            return base**n
        return base

    def atom(self) -> Expression:
        tok = self.take()
        kind, value, pos = tok
        if kind == "int":
            return Expression.const(int(value))
        if kind == "ident":
            e = self.ctx.resolve(value)
            if e is None:
                if self.ctx.declare_unknown and "_" not in value:
                    return Expression.sym(parameter(value))
                raise ParseError(f"unknown identifier {value!r}", pos, self.text)
            return e
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected token {value!r}", pos, self.text)


def parse_expr(text: str, ctx: Context | None = None) -> Expression:
    """Parse ``text`` into a canonical :class:`Expression`.

    >>> str(parse_expr("(x+y)^2 - x^2 - 2*x*y - y^2"))
    '0'
    """
    return _Parser(text, ctx if ctx is not None else context_3d()).parse()


# re-exported helpers for building contexts
__all__ += ["antiderivative_jet", "radial_jet", "free_jet"]
