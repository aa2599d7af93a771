"""Exact sparse linear algebra over Q.

Rows are ``{column: value}`` dicts.  Elimination is fraction-free: rows are
scaled to primitive integer vectors and combined with integer multipliers,
the pivot being the candidate entry of least absolute value.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Sequence, Tuple

Row = Dict[int, int]


def _int_row(row) -> Row:
    den = reduce(math.lcm, (Fraction(v).denominator for v in row.values()), 1)
    out = {c: int(Fraction(v) * den) for c, v in row.items() if v}
    return _prim(out)


def _prim(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(a: Row, pa: int, b: Row, pb: int) -> Row:
    """pa*a - pb*b with zero entries dropped."""
    out = {c: pa * v for c, v in a.items()} if pa != 1 else dict(a)
    for c, v in b.items():
        w = out.get(c, 0) - pb * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _prim(out)


def rref(rows: Sequence, ncols: int) -> Tuple[List[Tuple[int, Row]], List[int]]:
    """Reduced row echelon form scanning columns 0, 1, ..., ncols-1.

    Returns ``(pivots, free)`` where ``pivots`` lists ``(column, row)`` pairs
    (integer rows, every other pivot column cleared) and ``free`` the
    non-pivot columns.
    """
    pending = [r for r in (_int_row(r) for r in rows) if r]
    pivots: List[Tuple[int, Row]] = []
    free: List[int] = []
    for col in range(ncols):
        cand = [i for i, r in enumerate(pending) if col in r]
        if not cand:
            free.append(col)
            continue
        best = min(cand, key=lambda i: (abs(pending[i][col]), len(pending[i])))
        prow = pending.pop(best)
        pv = prow[col]
        if pv < 0:
            prow = {c: -v for c, v in prow.items()}
            pv = -pv
        nxt = []
        for r in pending:
            a = r.get(col)
            if a:
                g = math.gcd(a, pv)
                r = _combine(r, pv // g, prow, a // g)
                if r:
                    nxt.append(r)
            else:
                nxt.append(r)
        pending = nxt
        done = []
        for pc, r in pivots:
            a = r.get(col)
            if a:
                g = math.gcd(a, pv)
                r = _combine(r, pv // g, prow, a // g)
                if r[pc] < 0:
                    r = {c: -v for c, v in r.items()}
            done.append((pc, r))
        pivots = done
        pivots.append((col, prow))
    return pivots, free


def kernel(rows: Sequence, ncols: int) -> List[Dict[int, Fraction]]:
    """Basis of {v : row . v = 0 for every row}.

    One vector per free column j: v_j = 1, the other free coordinates 0.  With
    columns sorted increasingly by some order, the free column is the largest
    coordinate of its vector and occurs in no other basis vector.
    """
    pivots, free = rref(rows, ncols)
    out = []
    for j in free:
        v = {j: Fraction(1)}
        for pc, r in pivots:
            a = r.get(j)
            if a:
                v[pc] = Fraction(-a, r[pc])
        out.append(v)
    return out


def solve(rows: Sequence, rhs: Sequence, ncols: int):
    """One solution of ``rows . v = rhs`` (free unknowns set to 0), or None."""
    aug = []
    for r, b in zip(rows, rhs):
        r = dict(r)
        if b:
            r[ncols] = -Fraction(b)
        aug.append(r)
    # columns 0..ncols-1 are unknowns; column ncols carries -rhs
    pivots, _ = rref(aug, ncols + 1)
    sol = {}
    for pc, r in pivots:
        if pc == ncols:
            return None
        a = r.get(ncols)
        if a:
            sol[pc] = Fraction(-a, r[pc])
    return sol
