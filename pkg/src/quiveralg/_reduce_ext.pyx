# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_reduce_py``: same API, same results.

Coefficients with denominator 1 are kept as ints so that the common integral
case avoids Fraction arithmetic; values compare and hash equal either way.
"""
from fractions import Fraction


cdef inline object _norm(object x):
    if type(x) is Fraction and (<object>x).denominator == 1:
        return int(x.numerator)
    return x


cdef class Echelon:
    cdef public dict nf
    cdef public dict occ

    def __init__(self):
        self.nf = {}
        self.occ = {}

    def __len__(self):
        return len(self.nf)

    cpdef dict reduce(self, dict row):
        cdef dict nf = self.nf
        cdef dict tail
        cdef list hits = [c for c in row if c in nf]
        cdef object c, cc, v, coef, nv
        for c in hits:
            coef = _norm(row.pop(c))
            tail = <dict>nf[c]
            for cc, v in tail.items():
                nv = row.get(cc, 0) + coef * v
                if nv:
                    row[cc] = nv
                else:
                    del row[cc]
        return row

    cpdef long insert(self, dict row):
        cdef dict nf = self.nf
        cdef dict occ = self.occ
        cdef dict tail, target
        cdef object lead, lc, users, p, cc, v, coef, nv, s
        lead = max(row)
        lc = row.pop(lead)
        if lc == 1:
            tail = {c: _norm(-v) for c, v in row.items()}
        elif lc == -1:
            tail = {c: _norm(v) for c, v in row.items()}
        else:
            tail = {c: _norm(-v / lc) for c, v in row.items()}
        users = occ.pop(lead, None)
        if users:
            for p in users:
                target = <dict>nf[p]
                coef = _norm(target.pop(lead))
                for cc, v in tail.items():
                    nv = target.get(cc, 0) + coef * v
                    if nv:
                        if cc not in target:
                            s = occ.get(cc)
                            if s is None:
                                s = set()
                                occ[cc] = s
                            (<set>s).add(p)
                        target[cc] = nv
                    else:
                        del target[cc]
                        s = occ.get(cc)
                        if s is not None:
                            (<set>s).discard(p)
        for cc in tail:
            s = occ.get(cc)
            if s is None:
                s = set()
                occ[cc] = s
            (<set>s).add(lead)
        nf[lead] = tail
        return lead

    cpdef long add(self, dict row):
        row = self.reduce(row)
        if not row:
            return -1
        return self.insert(row)


def build_ideal(Echelon ech, list seeds, list col_tgt, list left, int n_steps):
    cdef list pending = [[] for _ in range(n_steps + 1)]
    cdef list queue
    cdef dict row, table
    cdef int d, nd, weight
    cdef object raw, entry
    for d in range(n_steps + 1):
        queue = <list>pending[d]
        queue.extend(<list>seeds[d])
        for raw in queue:
            row = ech.reduce(dict(raw))
            if not row:
                continue
            for entry in <list>left[<int>col_tgt[max(row)]]:
                weight = entry[0]
                table = <dict>entry[1]
                nd = d + weight
                if nd <= n_steps:
                    (<list>pending[nd]).append({table[c]: v for c, v in row.items()})
            ech.insert(row)
        pending[d] = None
    return len(ech)


def lincomb(dict vec, dict table):
    cdef dict out = {}
    cdef dict img
    cdef object k, c, t, v, nv
    for k, c in vec.items():
        if not c:
            continue
        img = <dict>table[k]
        for t, v in img.items():
            nv = out.get(t, 0) + c * v
            if nv:
                out[t] = nv
            else:
                del out[t]
    return out
