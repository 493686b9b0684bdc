"""Exact Gaussian elimination over expressions.

Entries are :class:`Expression` values that do not depend on coordinates
(constants, possibly with parameters). A pivot must be invertible inside the
expression class: a nonzero constant, or a single term in parameters.
Constant pivots are preferred.
"""

from __future__ import annotations

from .coeffring import Expression, ExpressionClassError

__all__ = ["solve", "null_vector", "rank", "in_span"]


def _pivot_rank(e: Expression):
    if not e:
        return None
    if e.is_constant():
        return 0
    if len(e.num.terms) == 1:
        return 1
    return None


def _reduce(rows, ncols):
    """Row echelon form in place; returns the list of ``(row index, pivot column)``."""
    pivots = []
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, len(rows)):
            k = _pivot_rank(rows[i][col])
            if k is not None and (best is None or k < best[1]):
                best = (i, k)
                if k == 0:
                    break
        if best is None:
            if any(rows[i][col] for i in range(r, len(rows))):
                raise ExpressionClassError(
                    f"no invertible pivot in column {col}; entries are not units of the expression class"
                )
            continue
        i = best[0]
        rows[r], rows[i] = rows[i], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for j in range(len(rows)):
            if j != r and rows[j][col]:
                f = rows[j][col]
                rows[j] = [a - f * b for a, b in zip(rows[j], rows[r])]
        pivots.append((r, col))
        r += 1
        if r == len(rows):
            break
    return pivots


def _matrix(columns, keys):
    zero = Expression()
    return [[c.get(k, zero) for c in columns] for k in keys]


def _keys(*vectors):
    keys = []
    seen = set()
    for v in vectors:
        for k in v:
            if k not in seen:
                seen.add(k)
                keys.append(k)
    return keys


def solve(columns, target):
    """Coefficients ``c`` with ``sum c_i columns[i] == target`` or ``None``.

    ``columns`` and ``target`` are sparse vectors (``dict`` key -> Expression).
    Free variables of a dependent system are set to zero.
    """
    keys = _keys(target, *columns)
    n = len(columns)
    rows = [row + [target.get(k, Expression())] for row, k in zip(_matrix(columns, keys), keys)]
    pivots = _reduce(rows, n)
    for row in rows[len(pivots):]:
        if row[n]:
            return None
    out = [Expression() for _ in range(n)]
    for r, col in pivots:
        out[col] = rows[r][n]
    return out


def null_vector(columns):
    """A nontrivial ``c`` with ``sum c_i columns[i] == 0`` or ``None`` if independent."""
    keys = _keys(*columns)
    n = len(columns)
    rows = _matrix(columns, keys)
    pivots = _reduce(rows, n) if rows else []
    pivot_cols = {c for _, c in pivots}
    free = [c for c in range(n) if c not in pivot_cols]
    if not free:
        return None
    f = free[0]
    out = [Expression() for _ in range(n)]
    out[f] = Expression.const(1)
    for r, col in pivots:
        out[col] = -rows[r][f]
    return out


def rank(vectors) -> int:
    keys = _keys(*vectors)
    if not keys:
        return 0
    rows = [[v.get(k, Expression()) for k in keys] for v in vectors]
    return len(_reduce(rows, len(keys)))


def in_span(vectors, v) -> bool:
    return solve(list(vectors), v) is not None
