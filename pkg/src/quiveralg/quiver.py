"""Quivers, their doubles, weights, and the extended Dynkin catalog."""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import networkx as nx

from .exact import fmt_rational, rational


class QuiverError(ValueError):
    pass


class Arrow(NamedTuple):
    id: str
    src: str
    tgt: str


class Quiver:
    """A directed multigraph with string vertex and arrow ids."""

    def __init__(self, vertices: Iterable[str], arrows: Iterable = ()):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        vset = set(self.vertices)
        arrs = []
        seen = set()
        for a in arrows:
            a = Arrow(*a) if not isinstance(a, Arrow) else a
            if a.id in seen:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            if a.src not in vset or a.tgt not in vset:
                raise QuiverError(f"arrow {a.id!r} has an undeclared endpoint")
            seen.add(a.id)
            arrs.append(a)
        self.arrows = tuple(arrs)
        self._by_id = {a.id: a for a in self.arrows}

    def arrow(self, aid: str) -> Arrow:
        return self._by_id[aid]

    def __contains__(self, aid):
        return aid in self._by_id

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Quiver":
        return cls(data["vertices"], [Arrow(a["id"], a["src"], a["tgt"]) for a in data["arrows"]])

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def undirected(self) -> nx.Graph:
        """Underlying graph; parallel edges collapse into a ``mult`` attribute."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for a in self.arrows:
            if g.has_edge(a.src, a.tgt):
                g[a.src][a.tgt]["mult"] += 1
            else:
                g.add_edge(a.src, a.tgt, mult=1)
        return g


class DoubleQuiver(Quiver):
    """The double of ``base``: every arrow a gets a reverse partner a*."""

    def __init__(self, base: Quiver):
        ids = {a.id for a in base.arrows}
        arrows = []
        star = {}
        for a in base.arrows:
            sid = a.id + "*"
            if sid in ids:
                raise QuiverError(f"arrow id {sid!r} collides with the star of {a.id!r}")
            arrows.append(a)
            arrows.append(Arrow(sid, a.tgt, a.src))
            star[a.id] = sid
            star[sid] = a.id
        super().__init__(base.vertices, arrows)
        self.base = base
        self.star = star

    def is_starred(self, aid: str) -> bool:
        return aid not in self.base

    def __repr__(self):
        return f"DoubleQuiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def double(q: Quiver) -> DoubleQuiver:
    return DoubleQuiver(q)


class Weight(dict):
    """lambda as a map vertex id -> Fraction."""

    def __init__(self, entries: Mapping = (), vertices: Sequence[str] | None = None):
        super().__init__((str(k), rational(v)) for k, v in dict(entries).items())
        if vertices is not None:
            if set(self) - set(vertices):
                raise QuiverError(f"weight has entries outside the vertex set: {sorted(set(self) - set(vertices))}")
            for v in vertices:
                self.setdefault(v, Fraction(0))

    @classmethod
    def zero(cls, q: Quiver) -> "Weight":
        return cls({}, q.vertices)

    def on(self, q: Quiver) -> "Weight":
        if set(self) != set(q.vertices):
            raise QuiverError("weight is not defined on exactly the quiver's vertices")
        return self

    def to_json(self) -> dict:
        return {v: fmt_rational(x) for v, x in self.items()}

    def scaled(self, t) -> "Weight":
        t = rational(t)
        return Weight({v: t * x for v, x in self.items()})

    def is_zero(self) -> bool:
        return not any(self.values())


def pairing(w: Mapping, d: Mapping) -> Fraction:
    if set(w) != set(d):
        raise QuiverError("vertex-set mismatch in pairing")
    return sum((rational(w[v]) * d[v] for v in w), Fraction(0))


# -- star quivers and polynomial weights ------------------------------------

def star_vertex(i: int, j: int) -> str:
    return "c" if j == 0 else f"{i}.{j}"


def star_arrow(i: int, j: int) -> str:
    return f"a{i}.{j}"


def star_quiver(degrees: Sequence[int]) -> Quiver:
    """Arms of length deg-1 attached to the centre ``c``, arrows pointing inward."""
    vertices = ["c"]
    arrows = []
    for i, deg in enumerate(degrees, start=1):
        if deg < 2:
            raise QuiverError(f"arm {i} has degree {deg} < 2")
        for j in range(1, deg):
            vertices.append(star_vertex(i, j))
            arrows.append(Arrow(star_arrow(i, j), star_vertex(i, j), star_vertex(i, j - 1)))
    return Quiver(vertices, arrows)


def lambda_from_polynomials(roots: Sequence[Sequence], mu) -> Weight:
    """Weight on star_quiver(len(r) for r in roots): lambda_(i,j) = alpha_(i,j-1) - alpha_(i,j)."""
    entries = {"c": rational(mu)}
    for i, alphas in enumerate(roots, start=1):
        alphas = [rational(a) for a in alphas]
        if not alphas or alphas[0] != 0:
            raise QuiverError(f"roots of P_{i} must start with 0 (P_{i}(0) = 0)")
        if len(alphas) < 2:
            raise QuiverError(f"P_{i} must have degree >= 2")
        for j in range(1, len(alphas)):
            entries[star_vertex(i, j)] = alphas[j - 1] - alphas[j]
    return Weight(entries)


# -- extended Dynkin catalog ----------------------------------------------

@dataclass(frozen=True)
class DynkinModel:
    label: str
    quiver: Quiver
    delta: dict = field(hash=False)
    extending: str = "0"

    def vertex(self, name: str) -> str:
        """Resolve aliases: ``extending`` and ``center`` (the unique vertex of largest delta)."""
        if name in self.quiver.vertices:
            return name
        if name == "extending":
            return self.extending
        if name in ("center", "centre"):
            top = max(self.delta.values())
            cands = [v for v, d in self.delta.items() if d == top]
            if len(cands) != 1:
                raise QuiverError(f"{self.label} has no unique center vertex")
            return cands[0]
        raise QuiverError(f"unknown vertex {name!r} for {self.label}")

    def harmonic_defect(self) -> dict:
        """2 delta_i - sum of neighbour deltas, per vertex (all zero for affine types)."""
        out = {v: 2 * self.delta[v] for v in self.quiver.vertices}
        for a in self.quiver.arrows:
            out[a.src] -= self.delta[a.tgt]
            out[a.tgt] -= self.delta[a.src]
        return out


def _tree_model(label: str, edges: list[tuple[str, str]], delta: dict) -> DynkinModel:
    """Orient each edge of a tree toward vertex "0" and number arrows in BFS order."""
    g = nx.Graph(edges)
    order = list(nx.bfs_tree(g, "0"))
    parent = dict(nx.bfs_predecessors(g, "0"))
    arrows = []
    for v in order[1:]:
        arrows.append(Arrow(f"a{len(arrows)}", v, parent[v]))
    verts = sorted(g.nodes, key=int)
    return DynkinModel(label, Quiver(verts, arrows), dict(delta), "0")


_LABEL = re.compile(r"^\s*([ADE])\s*~\s*(\d+)\s*$")


def dynkin_catalog(label: str) -> DynkinModel:
    """Extended Dynkin diagrams ``A~n`` (n>=1), ``D~n`` (n>=4), ``E~6``, ``E~7``, ``E~8``."""
    m = _LABEL.match(label)
    if not m:
        raise QuiverError(f"unknown Dynkin label {label!r}")
    kind, n = m.group(1), int(m.group(2))
    name = f"{kind}~{n}"
    if kind == "A":
        if n == 0:
            raise QuiverError("A~0 (one vertex with a loop) is not supported")
        verts = [str(k) for k in range(n + 1)]
        arrows = [Arrow(f"a{k}", str(k), str((k + 1) % (n + 1))) for k in range(n + 1)]
        return DynkinModel(name, Quiver(verts, arrows), {v: 1 for v in verts}, "0")
    if kind == "D":
        if n < 4:
            raise QuiverError("D~n needs n >= 4")
        chain = [str(k) for k in range(2, n - 1)]
        edges = [("0", chain[0]), ("1", chain[0])]
        edges += list(zip(chain, chain[1:]))
        edges += [(chain[-1], str(n - 1)), (chain[-1], str(n))]
        delta = {"0": 1, "1": 1, str(n - 1): 1, str(n): 1}
        delta.update({c: 2 for c in chain})
        return _tree_model(name, edges, delta)
    if kind == "E" and n == 6:
        edges = [("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("2", "5"), ("5", "6")]
        delta = {"0": 1, "1": 2, "2": 3, "3": 2, "4": 1, "5": 2, "6": 1}
        return _tree_model(name, edges, delta)
    if kind == "E" and n == 7:
        edges = [("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "6"), ("3", "7")]
        delta = {"0": 1, "1": 2, "2": 3, "3": 4, "4": 3, "5": 2, "6": 1, "7": 2}
        return _tree_model(name, edges, delta)
    if kind == "E" and n == 8:
        edges = [("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"),
                 ("5", "6"), ("6", "7"), ("5", "8")]
        delta = {"0": 1, "1": 2, "2": 3, "3": 4, "4": 5, "5": 6, "6": 4, "7": 2, "8": 3}
        return _tree_model(name, edges, delta)
    raise QuiverError(f"unknown Dynkin label {label!r}")


def graph_isomorphism(q1: Quiver, q2: Quiver, attrs1: Mapping | None = None,
                      attrs2: Mapping | None = None) -> dict | None:
    """Vertex bijection q1 -> q2 of the underlying multigraphs respecting the
    given vertex attributes, or None."""
    g1, g2 = q1.undirected(), q2.undirected()
    if attrs1 is not None:
        nx.set_node_attributes(g1, dict(attrs1), "tag")
    if attrs2 is not None:
        nx.set_node_attributes(g2, dict(attrs2), "tag")
    matcher = nx.isomorphism.GraphMatcher(
        g1, g2,
        node_match=lambda a, b: a.get("tag") == b.get("tag"),
        edge_match=lambda a, b: a["mult"] == b["mult"])
    for mapping in matcher.isomorphisms_iter():
        return dict(sorted(mapping.items()))
    return None


def match_star_quiver(degrees: Sequence[int]) -> DynkinModel | None:
    """The catalog entry whose diagram is star_quiver(degrees), if it is affine."""
    q = star_quiver(degrees)
    candidates = []
    degs = sorted(degrees)
    k = len(degs)
    if k == 4 and degs == [2, 2, 2, 2]:
        candidates.append("D~4")
    if k == 3:
        candidates += {(3, 3, 3): ["E~6"], (2, 4, 4): ["E~7"], (2, 3, 6): ["E~8"]}.get(tuple(degs), [])
    for label in candidates:
        model = dynkin_catalog(label)
        if graph_isomorphism(q, model.quiver) is not None:
            return model
    return None


def identify_affine(q: Quiver, label: str | None = None) -> DynkinModel | None:
    """``q`` as an affine model: delta and the extending vertex carried over
    from the isomorphic catalog diagram (or the one named by ``label``)."""
    n = len(q.vertices) - 1
    labels = [label] if label else [f"A~{n}", f"D~{n}", f"E~{n}"]
    for lab in labels:
        try:
            model = dynkin_catalog(lab)
        except QuiverError:
            continue
        iso = graph_isomorphism(model.quiver, q)
        if iso is not None:
            return DynkinModel(model.label, q, {iso[v]: d for v, d in model.delta.items()},
                               iso[model.extending])
    return None
