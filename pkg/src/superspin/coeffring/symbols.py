"""Symbols of the coefficient ring.

A symbol is a coordinate, a parameter, or a *jet*: a formal unknown function
(or one of its derivatives). Symbols are plain tuples, so their natural tuple
order is the global symbol order: coordinates, then parameters, then jets,
each group alphabetical.

Jets carry a derivation rule:

``free``
    ``f(c1, ..., ck)`` of the listed coordinates; ``index`` is the derivative
    multi-index over those coordinates.
``radial``
    ``f(u)`` with ``u`` the sum of squares of the listed coordinates;
    ``index = (n,)`` is the order of ``d/du``.
``antiderivative``
    ``W`` with ``dW/dc = g`` for the single coordinate ``c``; ``arg`` is
    ``(g_name, c)`` and ``g`` is the free jet ``g(c)``.
"""

from __future__ import annotations

from typing import NamedTuple

__all__ = [
    "COORDINATE",
    "PARAMETER",
    "JET",
    "Symbol",
    "coordinate",
    "parameter",
    "free_jet",
    "radial_jet",
    "antiderivative_jet",
    "jet_base",
    "jet_suffix",
    "symbol_name",
]

COORDINATE = 0
PARAMETER = 1
JET = 2


class Symbol(NamedTuple):
    kind: int
    name: str
    index: tuple = ()
    rule: str = ""
    arg: tuple = ()

    @property
    def is_coordinate(self) -> bool:
        return self.kind == COORDINATE

    @property
    def is_parameter(self) -> bool:
        return self.kind == PARAMETER

    @property
    def is_jet(self) -> bool:
        return self.kind == JET

    def __str__(self):
        return symbol_name(self)

    def __repr__(self):
        return f"Symbol({symbol_name(self)!r})"


def coordinate(name: str) -> Symbol:
    return Symbol(COORDINATE, name)


def parameter(name: str) -> Symbol:
    return Symbol(PARAMETER, name)


def free_jet(name: str, coords, index=None) -> Symbol:
    coords = tuple(coords)
    if index is None:
        index = (0,) * len(coords)
    index = tuple(index)
    if len(index) != len(coords):
        raise ValueError(f"jet {name}: index {index} does not match {coords}")
    return Symbol(JET, name, index, "free", coords)


def radial_jet(name: str, coords, order: int = 0) -> Symbol:
    return Symbol(JET, name, (order,), "radial", tuple(coords))


def antiderivative_jet(name: str, of: str, coord: str) -> Symbol:
    return Symbol(JET, name, (), "antiderivative", (of, coord))


def jet_base(s: Symbol) -> Symbol:
    """The underived jet of the same function."""
    if s.rule == "free":
        return s._replace(index=(0,) * len(s.index))
    if s.rule == "radial":
        return s._replace(index=(0,))
    return s


def jet_suffix(s: Symbol) -> str:
    if s.rule == "free":
        return "".join(c * n for c, n in zip(s.arg, s.index))
    if s.rule == "radial":
        return "u" * s.index[0]
    return ""


def symbol_name(s: Symbol) -> str:
    if s.kind != JET:
        return s.name
    suffix = jet_suffix(s)
    return f"{s.name}_{suffix}" if suffix else s.name
