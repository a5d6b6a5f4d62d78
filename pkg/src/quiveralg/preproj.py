"""Truncated models of path-algebra quotients, in particular of Pi^lambda(Q).

The quotient of the filtered piece F_N (paths of degree <= N) by

    R_N = span{ p·r·q : deg p + deg r + deg q <= N }

is described by its standard paths (the paths that are not leading
monomials, for a degree-first order compatible with concatenation) and by
left-multiplication tables: ``L[a][s]`` is the normal form of ``a·s`` for
every arrow a and standard path s with deg(a·s) <= N.  Normal forms of
arbitrary paths and products of elements come from applying these tables
arrow by arrow.

Two engines build the tables.

* ``frames`` row-reduces the span of all frames p·r·q over the space of all
  paths of degree <= N.  This is the definition of R_N; its cost grows with
  the number of paths.
* ``standard`` works one degree at a time over standard paths only.  In
  degree d the columns are the candidates a·s (s standard of degree
  d - deg a) and the rows are the rewritten r·q (q standard).  This agrees
  with ``frames`` as long as no combination of frames drops in degree; the
  engine detects that situation and raises InexactTruncation.

``auto`` tries ``standard`` first and falls back to ``frames``.
"""
from __future__ import annotations

import hashlib
import json
import logging
import random
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import kernel
from .exact import fmt_rational, rational
from .pathalg import AlgebraElement, Path, relation_components
from .quiver import DoubleQuiver, Quiver, QuiverError, Weight

log = logging.getLogger(__name__)

DEFAULT_CAP = 200_000
DEFAULT_N = 6
ORDER_VERSION = 2
ORDERS = ("deglex", "deglex-rev")
ENGINES = ("auto", "standard", "frames")


class ResourceLimitError(RuntimeError):
    pass


class DegreeOverflowError(ValueError):
    pass


class InexactTruncation(ArithmeticError):
    """A combination of frames drops in degree; the fast engine cannot model it."""


class DimensionTable(dict):
    """(source, target, degree) -> dimension of that graded layer."""

    def degrees(self) -> int:
        return max((d for (_, _, d) in self), default=-1)

    def layers(self, src: str, tgt: str) -> list[int]:
        return [self.get((src, tgt, d), 0) for d in range(self.degrees() + 1)]

    def corner(self, v: str) -> list[int]:
        return self.layers(v, v)

    def filtered(self, src: str, tgt: str) -> list[int]:
        out, acc = [], 0
        for x in self.layers(src, tgt):
            acc += x
            out.append(acc)
        return out

    def total(self) -> int:
        return sum(self.values())

    def first_difference(self, other: "DimensionTable"):
        for key in sorted(set(self) | set(other)):
            a, b = self.get(key, 0), other.get(key, 0)
            if a != b:
                return key, a, b
        return None

    def to_json(self) -> list:
        return [{"src": s, "tgt": t, "degree": d, "dim": n}
                for (s, t, d), n in sorted(self.items())]


def _axpy(out: dict, c, vec: Mapping):
    if not c:
        return
    for t, v in vec.items():
        nv = out.get(t, 0) + c * v
        if nv:
            out[t] = nv
        else:
            del out[t]


class TruncatedQuotient:
    """F_N / R_N for a quiver, a list of relations and a degree bound N.

    ``weights`` gives per-arrow degrees (default 1).  ``sources`` restricts
    the model to paths starting at the given vertices; this is enough for
    corner algebras at those vertices because every frame p·r·q keeps the
    source of q.
    """

    def __init__(self, quiver: Quiver, relations: Iterable[AlgebraElement], N: int, *,
                 weights: Mapping | None = None, sources: Sequence[str] | None = None,
                 order: str = "deglex", cap: int = DEFAULT_CAP, weight: Weight | None = None,
                 engine: str = "auto", backend: str | None = None):
        if N < 0:
            raise ValueError("N must be nonnegative")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}")
        self.quiver = quiver
        self.N = N
        self.order = order
        self.cap = cap
        self.lam = weight
        self.weights = {a.id: int((weights or {}).get(a.id, 1)) for a in quiver.arrows}
        if any(w < 1 for w in self.weights.values()):
            raise ValueError("arrow degrees must be positive")
        srcs = quiver.vertices if sources is None else sources
        for v in srcs:
            if v not in quiver.vertices:
                raise QuiverError(f"unknown source vertex {v!r}")
        self.sources = tuple(v for v in quiver.vertices if v in set(srcs))
        self.relations = [r for r in relations if r]
        for r in self.relations:
            if len({(p.src, p.tgt) for p in r.terms}) != 1:
                raise ValueError("relations must be split into (source, target) components")
        self._setup(backend)
        self.engine = None
        if engine in ("auto", "standard"):
            try:
                self._build_standard()
                self.engine = "standard"
            except InexactTruncation:
                if engine == "standard":
                    raise
                log.info("degree drop detected; switching to the frames engine")
        if self.engine is None:
            self._build_frames()
            self.engine = "frames"

    def _setup(self, backend):
        mod = kernel.module(backend)
        self._Ech, self._build_ideal, self._lincomb = mod.Echelon, mod.build_ideal, mod.lincomb
        ids = [a.id for a in self.quiver.arrows]
        if self.order == "deglex-rev":
            ids = ids[::-1]
        arank = {a: k for k, a in enumerate(ids)}
        vrank = {v: k for k, v in enumerate(self.quiver.vertices)}
        self._key = lambda p: (self.path_degree(p), tuple(arank[a] for a in p.arrows), vrank[p.src])
        self._src_of = {a.id: a.src for a in self.quiver.arrows}
        self._nf_cache = {}

    # -- helpers -----------------------------------------------------------
    def path_degree(self, p: Path) -> int:
        w = self.weights
        return sum(w[a] for a in p.arrows)

    def _relation_degree(self, r: AlgebraElement) -> int:
        return max(self.path_degree(p) for p in r.terms)

    def _set_standard(self, std: list[Path]):
        if len(std) > self.cap:
            raise ResourceLimitError(f"standard basis exceeds the cap of {self.cap}; lower N or raise the cap")
        self.standard = std
        self.std_index = {p: k for k, p in enumerate(std)}
        self.std_degree = [self.path_degree(p) for p in std]
        self.std_tgt = [p.tgt for p in std]

    # -- engine: degree by degree over standard paths ----------------------
    def _build_standard(self):
        q, N, W = self.quiver, self.N, self.weights
        std: list[Path] = []
        std_deg: list[int] = []
        std_tgt: list[str] = []
        L = {a.id: {} for a in q.arrows}
        by_deg = defaultdict(list)
        rel_deg = [(r, self._relation_degree(r), next(iter(r.terms)).src) for r in self.relations]
        srcs = set(self.sources)

        for d in range(N + 1):
            M = len(std)
            ech = self._Ech()
            if d == 0:
                cands = [Path.trivial(v) for v in self.sources]
                origin = [None] * len(cands)
                for r, dr, rs in rel_deg:
                    if dr == 0 and rs in srcs:
                        c = sum(r.terms.values())
                        if c:
                            ech.add({cands.index(Path.trivial(rs)): c})
            else:
                pairs = []
                for a in q.arrows:
                    w = W[a.id]
                    if w > d:
                        continue
                    for s in by_deg.get(d - w, ()):
                        p = std[s]
                        if p.tgt == a.src:
                            pairs.append((Path(p.src, a.tgt, (a.id,) + p.arrows), (a.id, s)))
                pairs.sort(key=lambda t: self._key(t[0]))
                cands = [p for p, _ in pairs]
                origin = [o for _, o in pairs]
                col = {o: M + k for k, o in enumerate(origin)}

                def step(vec, aid):
                    """a·x for x over (standard ids < M); top-degree products become candidate columns."""
                    out = {}
                    src, w, table = self._src_of[aid], W[aid], L[aid]
                    for s, c in vec.items():
                        if std_tgt[s] != src:
                            continue
                        if std_deg[s] + w == d:
                            img = {col[(aid, s)]: 1}
                        else:
                            img = table[s]
                        _axpy(out, c, img)
                    return out

                for r, dr, rs in rel_deg:
                    if dr > d:
                        continue
                    if dr == 0:
                        c = sum(r.terms.values())
                        for k, p in enumerate(cands):
                            if c and p.tgt == rs:
                                ech.add({M + k: c})
                        continue
                    for qi in by_deg.get(d - dr, ()):
                        if std_tgt[qi] != rs:
                            continue
                        row = {}
                        for p, c in r.terms.items():
                            vec = {qi: Fraction(1)}
                            for aid in reversed(p.arrows):
                                vec = step(vec, aid)
                                if not vec:
                                    break
                            _axpy(row, c, vec)
                        piv = ech.add(row)
                        if 0 <= piv < M:
                            raise InexactTruncation(f"a frame of degree {d} drops below degree {d}")
            pivots = ech.nf
            remap = {}
            base = M if d else 0
            for k, p in enumerate(cands):
                if base + k not in pivots:
                    remap[base + k] = len(std)
                    by_deg[d].append(len(std))
                    std.append(p)
                    std_deg.append(d)
                    std_tgt.append(p.tgt)
                    if len(std) > self.cap:
                        raise ResourceLimitError(
                            f"standard basis exceeds the cap of {self.cap}; lower N or raise the cap")
            if d == 0:
                continue
            for k in range(len(cands)):
                c = M + k
                if c in pivots:
                    img = {remap.get(t, t): v for t, v in pivots[c].items()}
                else:
                    img = {remap[c]: Fraction(1)}
                aid, s = origin[k]
                L[aid][s] = img
        self._set_standard(std)
        self.L = L

    # -- engine: all frames over all paths ---------------------------------
    def _build_frames(self):
        q, N, W = self.quiver, self.N, self.weights
        out_arrows = defaultdict(list)
        for a in q.arrows:
            out_arrows[a.src].append(a)
        by_deg = defaultdict(list)
        for v in self.sources:
            by_deg[0].append(Path.trivial(v))
        total = len(self.sources)
        for d in range(N + 1):
            for p in by_deg[d]:
                for a in out_arrows[p.tgt]:
                    nd = d + W[a.id]
                    if nd <= N:
                        by_deg[nd].append(Path(p.src, a.tgt, (a.id,) + p.arrows))
                        total += 1
                        if total > self.cap:
                            raise ResourceLimitError(
                                f"more than {self.cap} paths of degree <= {N}; lower N or raise the cap")
        paths = sorted((p for d in by_deg for p in by_deg[d]), key=self._key)
        index = {p: k for k, p in enumerate(paths)}
        degs = [self.path_degree(p) for p in paths]
        vid = {v: k for k, v in enumerate(q.vertices)}
        col_tgt = [vid[p.tgt] for p in paths]
        by_tgt_deg = defaultdict(list)
        for k, p in enumerate(paths):
            by_tgt_deg[(p.tgt, degs[k])].append(k)

        left = [[] for _ in q.vertices]
        for a in q.arrows:
            w = W[a.id]
            table = {}
            for k, p in enumerate(paths):
                if p.tgt == a.src and degs[k] + w <= N:
                    table[k] = index[Path(p.src, a.tgt, (a.id,) + p.arrows)]
            left[vid[a.src]].append((w, table))

        seeds = [[] for _ in range(N + 1)]
        for r in self.relations:
            rs = next(iter(r.terms)).src
            dr = self._relation_degree(r)
            for dq in range(0, N - dr + 1):
                for k in by_tgt_deg.get((rs, dq), ()):
                    qp = paths[k]
                    row = {}
                    for p, c in r.terms.items():
                        cc = index[Path(qp.src, p.tgt, p.arrows + qp.arrows)]
                        row[cc] = row.get(cc, 0) + c
                    row = {cc: v for cc, v in row.items() if v}
                    if row:
                        seeds[dr + dq].append(row)

        ech = self._Ech()
        self._build_ideal(ech, seeds, col_tgt, left, N)
        nf = ech.nf
        std = [p for k, p in enumerate(paths) if k not in nf]
        self._set_standard(std)
        col_to_std = {index[p]: k for k, p in enumerate(std)}
        L = {a.id: {} for a in q.arrows}
        for a in q.arrows:
            w = W[a.id]
            for s, p in enumerate(std):
                if p.tgt == a.src and self.std_degree[s] + w <= N:
                    c = index[Path(p.src, a.tgt, (a.id,) + p.arrows)]
                    if c in nf:
                        L[a.id][s] = {col_to_std[t]: v for t, v in nf[c].items()}
                    else:
                        L[a.id][s] = {col_to_std[c]: Fraction(1)}
        self.L = L
        log.debug("frames engine N=%d: %d paths, %d standard", N, len(paths), len(std))

    # -- vectors over the standard basis -----------------------------------
    def arrow_apply(self, aid: str, vec: Mapping) -> dict:
        """Standard coordinates of a·x."""
        src = self._src_of[aid]
        w = self.weights[aid]
        part = {}
        for s, c in vec.items():
            if self.std_tgt[s] == src:
                if self.std_degree[s] + w > self.N:
                    raise DegreeOverflowError(f"a product exceeds the degree budget N={self.N}")
                part[s] = c
        if not part:
            return {}
        return self._lincomb(part, self.L[aid])

    def path_apply(self, p: Path, vec: Mapping) -> dict:
        """Standard coordinates of p·x."""
        out = {s: c for s, c in vec.items() if self.std_tgt[s] == p.src}
        for aid in reversed(p.arrows):
            if not out:
                break
            out = self.arrow_apply(aid, out)
        return out

    def path_vec(self, p: Path) -> dict:
        k = self.std_index.get(p)
        if k is not None:
            return {k: Fraction(1)}
        hit = self._nf_cache.get(p)
        if hit is None:
            if self.path_degree(p) > self.N:
                raise DegreeOverflowError(f"path {p} has degree above N={self.N}")
            if p.src not in self.sources:
                raise DegreeOverflowError(f"path {p} starts outside the modelled sources")
            e = self.std_index.get(Path.trivial(p.src))
            hit = {} if e is None else self.path_apply(p, {e: Fraction(1)})
            self._nf_cache[p] = hit
        return hit

    def to_vec(self, x: AlgebraElement) -> dict:
        out: dict = {}
        for p, c in x.terms.items():
            _axpy(out, c, self.path_vec(p))
        return out

    def from_vec(self, v: Mapping) -> AlgebraElement:
        std = self.standard
        return AlgebraElement._wrap({std[k]: Fraction(c) for k, c in v.items() if c})

    def vec_degree(self, v: Mapping) -> int:
        return max((self.std_degree[k] for k in v), default=-1)

    def mul_vec(self, x: Mapping, y: Mapping) -> dict:
        """Standard coordinates of x·y."""
        if self.vec_degree(x) + self.vec_degree(y) > self.N:
            raise DegreeOverflowError("product exceeds the degree budget")
        out: dict = {}
        std = self.standard
        for s, c in x.items():
            _axpy(out, c, self.path_apply(std[s], y))
        return out

    # -- element level -----------------------------------------------------
    def element_degree(self, x: AlgebraElement) -> int:
        if not x.terms:
            return -1
        return max(self.path_degree(p) for p in x.terms)

    def normal_form(self, x: AlgebraElement) -> AlgebraElement:
        return self.from_vec(self.to_vec(x))

    def is_zero(self, x: AlgebraElement) -> bool:
        return not self.to_vec(x)

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        if self.element_degree(x) + self.element_degree(y) > self.N:
            raise DegreeOverflowError("product exceeds the degree budget")
        return self.from_vec(self.mul_vec(self.to_vec(x), self.to_vec(y)))

    def is_standard(self, p: Path) -> bool:
        return p in self.std_index

    def standard_paths(self) -> list[Path]:
        return list(self.standard)

    def identity(self) -> AlgebraElement:
        return AlgebraElement({Path.trivial(v): 1 for v in self.sources})

    def dimension_table(self) -> DimensionTable:
        table = DimensionTable()
        for s in self.sources:
            for t in self.quiver.vertices:
                for d in range(self.N + 1):
                    table[(s, t, d)] = 0
        for p, d in zip(self.standard, self.std_degree):
            table[(p.src, p.tgt, d)] += 1
        return table

    def corner_algebra(self, v: str) -> "CornerAlgebra":
        if v not in self.sources:
            raise QuiverError(f"vertex {v!r} is not among the modelled sources")
        return CornerAlgebra(self, v)

    def random_vec(self, rng: random.Random, src: str, tgt: str, max_degree: int,
                   min_degree: int = 0, bound: int = 5) -> dict:
        """Random rational combination of standard paths src -> tgt with degree in range."""
        out = {}
        for k, (p, d) in enumerate(zip(self.standard, self.std_degree)):
            if p.src == src and p.tgt == tgt and min_degree <= d <= max_degree:
                c = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
                if c:
                    out[k] = c
        return out

    # -- persistence -------------------------------------------------------
    def fingerprint(self) -> dict:
        return fingerprint(self.quiver, self.relations, self.N, weights=self.weights,
                           sources=self.sources, order=self.order)

    def cache_key(self) -> str:
        blob = json.dumps(self.fingerprint(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "fingerprint": self.fingerprint(),
            "quiver_hash": self.quiver.digest(),
            "lambda": self.lam.to_json() if self.lam is not None else None,
            "engine": self.engine,
            "standard": [[p.src, list(p.arrows)] for p in self.standard],
            "tables": {aid: [[s, [[t, fmt_rational(v)] for t, v in sorted(img.items())]]
                             for s, img in sorted(tab.items())]
                       for aid, tab in sorted(self.L.items())},
        }

    @classmethod
    def from_json(cls, data: dict, relations: Sequence[AlgebraElement],
                  weight: Weight | None = None, quiver: Quiver | None = None) -> "TruncatedQuotient":
        """Rebuild from persisted tables without recomputing anything.

        Pass ``quiver`` to keep a richer object (e.g. a DoubleQuiver) than
        the plain Quiver stored in the fingerprint.
        """
        fp = data["fingerprint"]
        obj = object.__new__(cls)
        obj.quiver = Quiver.from_json(fp["quiver"]) if quiver is None else quiver
        obj.N = fp["N"]
        obj.order = fp["order"]
        obj.cap = DEFAULT_CAP
        obj.lam = weight
        obj.weights = dict(fp["weights"])
        obj.sources = tuple(fp["sources"])
        obj.relations = [r for r in relations if r]
        obj.engine = data["engine"]
        obj._setup(None)
        std = []
        for src, arrows in data["standard"]:
            arrows = tuple(arrows)
            tgt = obj.quiver.arrow(arrows[0]).tgt if arrows else src
            std.append(Path(src, tgt, arrows))
        obj._set_standard(std)
        obj.L = {aid: {int(s): {int(t): rational(v) for t, v in img} for s, img in rows}
                 for aid, rows in data["tables"].items()}
        for a in obj.quiver.arrows:
            obj.L.setdefault(a.id, {})
        if json.loads(json.dumps(obj.fingerprint(), sort_keys=True)) != json.loads(json.dumps(fp, sort_keys=True)):
            raise ValueError("persisted truncation does not match its fingerprint")
        return obj

    def same_tables(self, other: "TruncatedQuotient") -> bool:
        return self.standard == other.standard and self.L == other.L


def fingerprint(quiver: Quiver, relations: Sequence[AlgebraElement], N: int, *,
                weights: Mapping | None = None, sources: Sequence[str] | None = None,
                order: str = "deglex") -> dict:
    """Everything that determines the tables of a truncation."""
    srcs = set(quiver.vertices if sources is None else sources)
    return {
        "quiver": quiver.to_json(),
        "relations": [r.to_json() for r in relations if r],
        "weights": dict(sorted((a.id, int((weights or {}).get(a.id, 1))) for a in quiver.arrows)),
        "N": N,
        "sources": [v for v in quiver.vertices if v in srcs],
        "order": order,
        "order_version": ORDER_VERSION,
    }


class CornerAlgebra:
    """e_v F_N e_v with the truncated multiplication."""

    def __init__(self, tq: TruncatedQuotient, v: str):
        self.parent = tq
        self.vertex = v
        self.ids = [k for k, p in enumerate(tq.standard) if p.src == v and p.tgt == v]
        self.basis = [tq.standard[k] for k in self.ids]
        self.basis_degrees = [tq.std_degree[k] for k in self.ids]

    @property
    def N(self):
        return self.parent.N

    def __len__(self):
        return len(self.basis)

    def unit(self) -> AlgebraElement:
        return AlgebraElement.idempotent(self.vertex)

    def ids_of_degree(self, d: int) -> list[int]:
        return [k for k, e in zip(self.ids, self.basis_degrees) if e == d]

    def basis_of_degree(self, d: int) -> list[Path]:
        return [p for p, k in zip(self.basis, self.basis_degrees) if k == d]

    def basis_up_to(self, d: int) -> list[Path]:
        return [p for p, k in zip(self.basis, self.basis_degrees) if k <= d]

    def layer_dims(self) -> list[int]:
        out = [0] * (self.N + 1)
        for k in self.basis_degrees:
            out[k] += 1
        return out

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        return self.parent.multiply(x, y)

    def normal_form(self, x: AlgebraElement) -> AlgebraElement:
        return self.parent.normal_form(x)

    def degree(self, x: AlgebraElement) -> int:
        return self.parent.element_degree(x)


def build_truncation(dq: DoubleQuiver, w: Weight | Mapping | None, N: int, *,
                     sources: Sequence[str] | None = None, order: str = "deglex",
                     cap: int = DEFAULT_CAP, engine: str = "auto",
                     backend: str | None = None) -> TruncatedQuotient:
    """Truncated model of Pi^lambda(Q) = CQbar / (sum [a, a*] - lambda)."""
    w = Weight(w or {}, dq.vertices)
    comps = relation_components(dq, w)
    rels = [comps[v] for v in dq.vertices]
    if _CACHE is not None and engine == "auto" and backend is None and cap == DEFAULT_CAP:
        return _CACHE.fetch(dq, rels, N, w, sources=sources, order=order)
    return TruncatedQuotient(dq, rels, N, sources=sources,
                             order=order, cap=cap, weight=w, engine=engine, backend=backend)


_CACHE = None


def use_cache(cache):
    """Route build_truncation through ``cache`` (anything with a ``fetch`` method); None disables."""
    global _CACHE
    _CACHE = cache


def normal_form(t: TruncatedQuotient, x: AlgebraElement) -> AlgebraElement:
    return t.normal_form(x)


def quotient_multiply(t: TruncatedQuotient, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return t.multiply(x, y)


def dimension_table(t: TruncatedQuotient) -> DimensionTable:
    return t.dimension_table()


def corner_algebra(t: TruncatedQuotient, v: str) -> CornerAlgebra:
    return t.corner_algebra(v)


def lambda_independence_check(dq: DoubleQuiver, N: int, samples: Sequence, *,
                              sources: Sequence[str] | None = None, order: str = "deglex",
                              engine: str = "auto") -> dict:
    """Compare the dimension table of every sampled weight with the lambda = 0 table."""
    base = build_truncation(dq, None, N, sources=sources, order=order, engine=engine).dimension_table()
    report = {"N": N, "samples": [], "equal": True, "first_discrepancy": None}
    for w in samples:
        w = Weight(w, dq.vertices)
        table = build_truncation(dq, w, N, sources=sources, order=order, engine=engine).dimension_table()
        diff = table.first_difference(base)
        report["samples"].append({"lambda": w.to_json(), "equal": diff is None})
        if diff is not None and report["equal"]:
            report["equal"] = False
            (s, t, d), a, b = diff
            report["first_discrepancy"] = {"lambda": w.to_json(), "src": s, "tgt": t,
                                           "degree": d, "dim": a, "dim_at_zero": b}
    return report
