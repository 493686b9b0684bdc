"""Canonical text form of polynomials and expressions.

The output uses exactly the grammar accepted by :func:`parse_expr`, and the
term order is the fixed monomial order, so printed forms are stable across runs.
"""

from __future__ import annotations

from .scalars import GaussianRational
from .symbols import symbol_name


def format_scalar(c: GaussianRational) -> str:
    return str(c)


def format_monomial(m) -> str:
    parts = []
    for s, e in m:
        name = symbol_name(s)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _format_term(m, c: GaussianRational) -> str:
    if not m:
        return str(c)
    mono = format_monomial(m)
    if c.is_real():
        if c.re == 1:
            return mono
        if c.re == -1:
            return "-" + mono
        return f"{c.re}*{mono}"
    return f"{c}*{mono}"


def format_polynomial(p) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        t = _format_term(m, c)
        if not out:
            out.append(t)
        elif t.startswith("-"):
            out.append(" - " + t[1:])
        else:
            out.append(" + " + t)
    return "".join(out)


def _format_base(b, e) -> str:
    if len(b.terms) == 1:
        s = format_polynomial(b)
    else:
        s = f"({format_polynomial(b)})"
    return s if e == 1 else f"{s}^{e}"


def format_expression(e) -> str:
    num = format_polynomial(e.num)
    if not e.den:
        return num
    if len(e.num.terms) > 1:
        num = f"({num})"
    factors = [_format_base(b, k) for b, k in e.den]
    den = factors[0] if len(factors) == 1 else "(" + "*".join(factors) + ")"
    return f"{num}/{den}"
