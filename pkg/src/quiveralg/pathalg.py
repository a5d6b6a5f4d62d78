"""The path algebra of a (double) quiver over Q.

Composition is right to left: the path ``(a_k, ..., a_1)`` first traverses
a_1.  ``concat(p, q)`` is "first q, then p" and is zero unless
``tgt(q) == src(p)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .exact import fmt_rational, rational
from .quiver import DoubleQuiver, Quiver, Weight


class Path(NamedTuple):
    src: str
    tgt: str
    arrows: tuple = ()

    @classmethod
    def trivial(cls, v: str) -> "Path":
        return cls(v, v, ())

    @classmethod
    def of(cls, q: Quiver, *aids: str) -> "Path":
        """Path from arrow ids written left to right as a product, e.g. ``of(q, "a", "a*")``."""
        if not aids:
            raise ValueError("use Path.trivial for the empty path")
        arrows = [q.arrow(a) for a in aids]
        for left, right in zip(arrows, arrows[1:]):
            if right.tgt != left.src:
                raise ValueError(f"{left.id} cannot follow {right.id}")
        return cls(arrows[-1].src, arrows[0].tgt, tuple(aids))

    @property
    def length(self) -> int:
        return len(self.arrows)

    def is_cycle(self) -> bool:
        return self.src == self.tgt

    def __str__(self):
        return "·".join(self.arrows) if self.arrows else f"e_{self.src}"


def concat(p: Path, q: Path) -> Path | None:
    """p·q: first q then p; None encodes the zero path."""
    if q.tgt != p.src:
        return None
    return Path(q.src, p.tgt, p.arrows + q.arrows)


class AlgebraElement:
    """Finite Q-linear combination of paths; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for p, c in items:
            c = Fraction(c)
            if c:
                v = acc.get(p, 0) + c
                if v:
                    acc[p] = v
                else:
                    del acc[p]
        self.terms = acc

    @classmethod
    def _wrap(cls, terms: dict) -> "AlgebraElement":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def path(cls, p: Path, c=1) -> "AlgebraElement":
        return cls({p: c})

    @classmethod
    def idempotent(cls, v: str) -> "AlgebraElement":
        return cls({Path.trivial(v): 1})

    @classmethod
    def unit(cls, q: Quiver) -> "AlgebraElement":
        return cls({Path.trivial(v): 1 for v in q.vertices})

    @classmethod
    def arrow(cls, q: Quiver, aid: str, c=1) -> "AlgebraElement":
        return cls({Path.of(q, aid): c})

    @classmethod
    def word(cls, q: Quiver, *aids: str) -> "AlgebraElement":
        return cls({Path.of(q, *aids): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        acc = dict(self.terms)
        for p, c in other.terms.items():
            v = acc.get(p, 0) + c
            if v:
                acc[p] = v
            else:
                acc.pop(p, None)
        return AlgebraElement._wrap(acc)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._wrap({p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        if not c:
            return AlgebraElement._wrap({})
        return AlgebraElement._wrap({p: c * v for p, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        acc: dict = {}
        for p, c in self.terms.items():
            for q, d in other.terms.items():
                if q.tgt != p.src:
                    continue
                r = Path(q.src, p.tgt, p.arrows + q.arrows)
                v = acc.get(r, 0) + c * d
                if v:
                    acc[r] = v
                else:
                    acc.pop(r, None)
        return AlgebraElement._wrap(acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 1:
            raise ValueError("use an explicit identity for the zeroth power")
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def degree(self, weights: Mapping | None = None) -> int:
        """Largest path degree occurring; -1 for the zero element."""
        if not self.terms:
            return -1
        if weights is None:
            return max(len(p.arrows) for p in self.terms)
        return max(sum(weights.get(a, 1) for a in p.arrows) for p in self.terms)

    def homogeneous(self, d: int) -> "AlgebraElement":
        return AlgebraElement._wrap({p: c for p, c in self.terms.items() if len(p.arrows) == d})

    def coefficient(self, p: Path) -> Fraction:
        return self.terms.get(p, Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for p in sorted(self.terms, key=lambda p: (len(p.arrows), p.arrows, p.src)):
            c = self.terms[p]
            parts.append(f"{fmt_rational(c)}*{p}")
        return " + ".join(parts)

    def to_json(self) -> list:
        out = []
        for p in sorted(self.terms, key=lambda p: (len(p.arrows), p.arrows, p.src)):
            item = {"path": list(p.arrows)} if p.arrows else {"e": p.src}
            item["coeff"] = fmt_rational(self.terms[p])
            out.append(item)
        return out

    @classmethod
    def from_json(cls, q: Quiver, data: list) -> "AlgebraElement":
        terms = []
        for item in data:
            if "e" in item:
                p = Path.trivial(item["e"])
            else:
                p = Path.of(q, *item["path"])
            terms.append((p, rational(item["coeff"])))
        return cls(terms)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def corner(x: AlgebraElement, i: str, j: str) -> AlgebraElement:
    """e_i · x · e_j: the terms ending at i and starting at j."""
    return AlgebraElement._wrap({p: c for p, c in x.terms.items() if p.tgt == i and p.src == j})


def relation_components(dq: DoubleQuiver, w: Weight) -> dict:
    """Vertex components e_i r e_i of r = sum_a (a a* - a* a) - sum_i lambda_i e_i."""
    comps = {v: {} for v in dq.vertices}
    for a in dq.base.arrows:
        s = dq.star[a.id]
        # a a* is a cycle at tgt(a); a* a at src(a)
        p = Path(a.tgt, a.tgt, (a.id, s))
        q = Path(a.src, a.src, (s, a.id))
        comps[a.tgt][p] = comps[a.tgt].get(p, 0) + 1
        comps[a.src][q] = comps[a.src].get(q, 0) - 1
    for v in dq.vertices:
        lam = Fraction(w.get(v, 0))
        if lam:
            e = Path.trivial(v)
            comps[v][e] = comps[v].get(e, 0) - lam
    return {v: AlgebraElement(t) for v, t in comps.items()}


def preprojective_relation(dq: DoubleQuiver, w: Weight) -> AlgebraElement:
    out = AlgebraElement()
    for comp in relation_components(dq, w).values():
        out = out + comp
    return out


def count_paths(q: Quiver, length: int) -> dict:
    """Number of paths of the given length per (src, tgt), by enumeration."""
    out = {}
    layer = {Path.trivial(v) for v in q.vertices}
    for _ in range(length):
        nxt = set()
        for p in layer:
            for a in q.arrows:
                if a.src == p.tgt:
                    nxt.add(Path(p.src, a.tgt, (a.id,) + p.arrows))
        layer = nxt
    for p in layer:
        out[(p.src, p.tgt)] = out.get((p.src, p.tgt), 0) + 1
    return out
