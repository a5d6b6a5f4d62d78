"""Pure-Python sparse exact row reduction (reference implementation).

Rows are dicts ``column -> coefficient``; a larger column index is a larger
monomial, so the pivot of a row is its largest column.  The echelon form is
kept fully reduced: ``nf[p]`` is the normal form of the pivot column ``p``
and only mentions non-pivot columns.
"""


class Echelon:
    __slots__ = ("nf", "occ")

    def __init__(self):
        self.nf = {}   # pivot column -> {standard column: coeff}
        self.occ = {}  # standard column -> set of pivots whose nf mentions it

    def __len__(self):
        return len(self.nf)

    def reduce(self, row):
        """Replace every pivot column of ``row`` by its normal form, in place."""
        nf = self.nf
        hits = [c for c in row if c in nf]
        for c in hits:
            coef = row.pop(c)
            for cc, v in nf[c].items():
                nv = row.get(cc, 0) + coef * v
                if nv:
                    row[cc] = nv
                else:
                    del row[cc]
        return row

    def insert(self, row):
        """Add a reduced nonzero row; returns its pivot column."""
        nf, occ = self.nf, self.occ
        lead = max(row)
        lc = row.pop(lead)
        tail = {c: -v / lc for c, v in row.items()}
        users = occ.pop(lead, None)
        if users:
            for p in users:
                target = nf[p]
                coef = target.pop(lead)
                for cc, v in tail.items():
                    nv = target.get(cc, 0) + coef * v
                    if nv:
                        if cc not in target:
                            occ.setdefault(cc, set()).add(p)
                        target[cc] = nv
                    else:
                        del target[cc]
                        s = occ.get(cc)
                        if s is not None:
                            s.discard(p)
        for cc in tail:
            occ.setdefault(cc, set()).add(lead)
        nf[lead] = tail
        return lead

    def add(self, row):
        """Reduce ``row`` and insert it if nonzero; returns the pivot or -1."""
        row = self.reduce(row)
        if not row:
            return -1
        return self.insert(row)


def build_ideal(ech, seeds, col_tgt, left, n_steps):
    """Span of all relation frames p·r·q, built degree by degree.

    ``seeds[d]`` are the rows r·q of generator degree d; ``left[v]`` lists
    ``(weight, table)`` for the arrows leaving vertex v, where ``table`` maps
    a column to the column of its left product with the arrow.  Each new row
    found at step d is multiplied on the left by every composable arrow and
    queued for step d + weight.
    """
    pending = [[] for _ in range(n_steps + 1)]
    for d in range(n_steps + 1):
        queue = pending[d]
        queue.extend(seeds[d])
        for row in queue:
            row = ech.reduce(dict(row))
            if not row:
                continue
            tgt = col_tgt[max(row)]
            for weight, table in left[tgt]:
                nd = d + weight
                if nd <= n_steps:
                    pending[nd].append({table[c]: v for c, v in row.items()})
            ech.insert(row)
        pending[d] = None
    return len(ech)


def lincomb(vec, table):
    """sum of c * table[k] over the entries k: c of ``vec``."""
    out = {}
    for k, c in vec.items():
        if not c:
            continue
        for t, v in table[k].items():
            nv = out.get(t, 0) + c * v
            if nv:
                out[t] = nv
            else:
                del out[t]
    return out
