"""Exact Gauss-Jordan elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    m = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncols):
        if r == len(m):
            break
        p = next((k for k in range(r, len(m)) if m[k][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][col]
        if piv != 1:
            m[r] = [v / piv for v in m[r]]
        for k in range(len(m)):
            if k != r and m[k][col] != 0:
                f = m[k][col]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def solve_affine(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int):
    """Solve ``a x = b``.

    Returns ``(x0, basis)`` with ``x0`` a particular solution and ``basis`` a
    list of vectors spanning the null space of ``a``, or ``None`` when the
    system is inconsistent.
    """
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    if not aug:
        x0 = [Fraction(0)] * ncols
        return x0, [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x0 = [Fraction(0)] * ncols
    for row, col in zip(red, pivots):
        x0[col] = row[ncols]
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, col in zip(red, pivots):
            v[col] = -row[f]
        basis.append(v)
    return x0, basis


def solve_unique(a, b, ncols: int):
    """Unique solution of ``a x = b`` or ``None`` (inconsistent or underdetermined)."""
    res = solve_affine(a, b, ncols)
    if res is None or res[1]:
        return None
    return res[0]
