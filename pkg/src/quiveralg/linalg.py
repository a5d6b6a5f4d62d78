"""Small exact linear algebra on sparse vectors (dicts index -> Fraction)."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence


def _axpy(out: dict, c, vec: Mapping):
    if not c:
        return
    for t, v in vec.items():
        nv = out.get(t, 0) + c * v
        if nv:
            out[t] = nv
        else:
            del out[t]


class RowSpace:
    """Incrementally built reduced row echelon form.

    Pivots are chosen as the largest key of each row, so feeding vectors in
    a monomial order makes the pivots leading monomials.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot -> row with coefficient 1 at pivot

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        out = {k: Fraction(v) for k, v in vec.items() if v}
        # rows are fully reduced, so one pass clears every pivot
        for p in [k for k in out if k in self.rows]:
            c = out.get(p)
            if c:
                _axpy(out, -c, self.rows[p])
        return out

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = max(r)
        lc = r[p]
        r = {k: v / lc for k, v in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                _axpy(row, -c, r)
        self.rows[p] = r
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)


def nullspace(columns: Sequence[Mapping]) -> list[dict]:
    """Basis of {c : sum_j c_j columns[j] = 0}, as dicts j -> Fraction."""
    return solve(columns, {})[1]


def solve(columns: Sequence[Mapping], rhs: Mapping):
    """Solve sum_j c_j columns[j] = rhs.

    Returns ``(particular, kernel)``; ``particular`` is None when the system
    is inconsistent.  Free variables are set to zero in the particular
    solution.
    """
    n = len(columns)
    eqs: dict = {}
    for j, col in enumerate(columns):
        for t, v in col.items():
            if v:
                eqs.setdefault(t, {})[j] = Fraction(v)
    rhs_key = n  # augmented column
    for t, v in rhs.items():
        if v:
            eqs.setdefault(t, {})[rhs_key] = Fraction(v)
    pivots: dict = {}  # unknown -> row (coefficient 1 at unknown)
    for t in sorted(eqs, key=repr):
        row = eqs[t]
        for p in [k for k in row if k in pivots]:
            c = row.get(p)
            if c:
                _axpy(row, -c, pivots[p])
        unknowns = [k for k in row if k != rhs_key]
        if not unknowns:
            if row.get(rhs_key):
                return None, _kernel(pivots, n)
            continue
        p = min(unknowns)
        lc = row[p]
        row = {k: v / lc for k, v in row.items()}
        for q, other in pivots.items():
            c = other.get(p)
            if c:
                _axpy(other, -c, row)
        pivots[p] = row
    particular = {p: row.get(rhs_key, Fraction(0)) for p, row in pivots.items()}
    particular = {k: v for k, v in particular.items() if v}
    return particular, _kernel(pivots, n)


def _kernel(pivots: dict, n: int) -> list[dict]:
    free = [j for j in range(n) if j not in pivots]
    out = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                vec[p] = -c
        out.append(vec)
    return out


def rank(vectors: Sequence[Mapping]) -> int:
    rs = RowSpace()
    for v in vectors:
        rs.add(v)
    return len(rs)
