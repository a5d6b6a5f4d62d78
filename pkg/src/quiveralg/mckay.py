"""Finite subgroups of SL(2), their characters, McKay graphs and the
character-theoretic dimension oracle.

Groups are generated as explicit 2x2 matrices over cyclotomic fields.
Character tables are not transcribed: the irreducibles are found by
splitting off known constituents from characters we can always write down
(linear characters, tensor products with V, Galois conjugates) until the
squares of the degrees add up to the group order.  Every table is then
validated by exact orthonormality.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import deque
from fractions import Fraction

from .exact import Cyclotomic, NotRationalError, fmt_rational
from .quiver import Arrow, DynkinModel, Quiver, dynkin_catalog, graph_isomorphism

FAMILIES = ("cyclic", "binary-dihedral", "binary-tetrahedral",
            "binary-octahedral", "binary-icosahedral")


class GroupError(ValueError):
    pass


class CharacterDataError(ArithmeticError):
    """A character computation produced a value that cannot be right."""


# -- 2x2 matrices over cyclotomics ------------------------------------------

def _c(x, m):
    return x if isinstance(x, Cyclotomic) else Cyclotomic.from_rational(x, m)


def mat(a, b, c, d, m):
    return tuple(_c(x, m) for x in (a, b, c, d))


def mat_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(x):
    a, b, c, d = x
    return a * d - b * c


def mat_inv_sl2(x):
    a, b, c, d = x
    return (d, -b, -c, a)


def mat_trace(x):
    return x[0] + x[3]


def _quaternion(a, b, c, d, m):
    """a + bi + cj + dk as an SU(2) matrix; i = zeta_4."""
    i = Cyclotomic.zeta(4).lift(m)
    a, b, c, d = (_c(t, m) for t in (a, b, c, d))
    return (a + b * i, c + d * i, -c + d * i, a - b * i)


def _golden(m):
    # (1 + sqrt 5) / 2 = -(zeta_5^2 + zeta_5^3) in Q(zeta_5)
    z = Cyclotomic.zeta(5)
    return (-(z ** 2 + z ** 3)).lift(m)


def _sqrt2(m):
    z = Cyclotomic.zeta(8)
    return (z + z ** 7).lift(m)


def _generators(family: str, n: int | None):
    if family == "cyclic":
        if n is None or n < 2:
            raise GroupError("cyclic groups need order n >= 2 (the trivial group is out of scope)")
        z = Cyclotomic.zeta(n)
        return n, [mat(z, 0, 0, z ** (n - 1), n)]
    if family == "binary-dihedral":
        if n is None or n < 2:
            raise GroupError("binary dihedral groups need n >= 2 (order 4n)")
        m = 2 * n if n % 2 == 0 else 4 * n
        z = Cyclotomic.zeta(2 * n).lift(m)
        return m, [mat(z, 0, 0, z ** (2 * n - 1), m), mat(0, 1, -1, 0, m)]
    if n is not None:
        raise GroupError(f"{family} takes no parameter")
    half = Fraction(1, 2)
    if family == "binary-tetrahedral":
        m = 4
        return m, [_quaternion(0, 1, 0, 0, m), _quaternion(0, 0, 1, 0, m),
                   _quaternion(half, half, half, half, m)]
    if family == "binary-octahedral":
        m = 8
        r = _sqrt2(m) * Fraction(1, 2)
        return m, [_quaternion(half, half, half, half, m), _quaternion(r, r, 0, 0, m)]
    if family == "binary-icosahedral":
        m = 20
        phi = _golden(m)
        return m, [_quaternion(half, half, half, half, m),
                   _quaternion(phi * half, (phi - 1) * half, half, 0, m)]
    raise GroupError(f"unknown group family {family!r}")


def _closure(gens, identity):
    seen = {identity: 0}
    elems = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(g, x)
            if y not in seen:
                seen[y] = len(elems)
                elems.append(y)
                queue.append(y)
                if len(elems) > 10_000:
                    raise GroupError("generated group is unexpectedly large")
    return elems, seen


def _element_order(x, identity):
    k, y = 1, x
    while y != identity:
        y = mat_mul(y, x)
        k += 1
    return k


# -- class functions --------------------------------------------------------

class GroupData:
    """A finite subgroup of SL(2) with validated character table.

    ``classes`` holds one representative matrix per conjugacy class and
    ``sizes`` the class sizes; ``irreps[k][c]`` is the value of the k-th
    irreducible character on class c.  ``irreps[0]`` is trivial.
    """

    def __init__(self, family: str, param: int | None, name: str, conductor: int, gens):
        self.family = family
        self.param = param
        self.name = name
        self.gens = gens
        one = Cyclotomic.from_rational(1, conductor)
        zero = Cyclotomic.from_rational(0, conductor)
        self.identity = (one, zero, zero, one)
        self.elements, self._index = _closure(gens, self.identity)
        self.order = len(self.elements)
        self._classes()
        self.chi_V = [mat_trace(r) for r in self.classes]
        self._sym = []
        self.irreps = _split_irreducibles(self)
        self.trivial = 0
        self.validate()

    def _classes(self):
        cls_of = {}
        classes, sizes, members = [], [], []
        inv = [mat_inv_sl2(g) for g in self.gens]
        for x in self.elements:
            if x in cls_of:
                continue
            k = len(classes)
            orbit = [x]
            cls_of[x] = k
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for g, gi in zip(self.gens, inv):
                    z = mat_mul(mat_mul(g, y), gi)
                    if z not in cls_of:
                        cls_of[z] = k
                        orbit.append(z)
                        queue.append(z)
            classes.append(x)
            sizes.append(len(orbit))
            members.append(orbit)
        self.classes = classes
        self.sizes = sizes
        self.class_of = cls_of
        self.class_orders = [_element_order(r, self.identity) for r in classes]
        self.exponent = math.lcm(*self.class_orders)

    # inner products ---------------------------------------------------
    def inner(self, f, g) -> Cyclotomic:
        tot = Cyclotomic.from_rational(0)
        for s, a, b in zip(self.sizes, f, g):
            tot = tot + a * b.conj() * s
        return tot * Fraction(1, self.order)

    def inner_int(self, f, g) -> int:
        v = self.inner(f, g)
        try:
            q = v.to_rational()
        except NotRationalError:
            raise CharacterDataError(f"non-rational inner product {v!r}") from None
        if q.denominator != 1 or q < 0:
            raise CharacterDataError(f"inner product {fmt_rational(q)} is not a nonnegative integer")
        return int(q)

    @property
    def dims(self) -> list[int]:
        return [int(chi[0].to_rational()) for chi in self.irreps]

    def sym_power(self, n: int) -> list:
        """Character of Sym^n V: sum of a^(n-2k) over eigenvalues a, a^-1,
        evaluated by the recurrence s_n = tr(g) s_(n-1) - s_(n-2)."""
        return list(_sym_table(self, n)[n])

    def validate(self):
        if sum(self.sizes) != self.order:
            raise CharacterDataError("class sizes do not add up to the group order")
        one = Cyclotomic.from_rational(1)
        for g in self.gens:
            if mat_det(g) != one:
                raise CharacterDataError("a generator is not in SL(2)")
        if any(x != x.conj() for x in self.chi_V):
            raise CharacterDataError("chi_V is not real")
        if sum(d * d for d in self.dims) != self.order:
            raise CharacterDataError("squares of irreducible degrees do not add up to |G|")
        for a, b in itertools.combinations_with_replacement(range(len(self.irreps)), 2):
            want = 1 if a == b else 0
            if self.inner(self.irreps[a], self.irreps[b]) != Cyclotomic.from_rational(want):
                raise CharacterDataError(f"characters {a}, {b} are not orthonormal")

    def conductor_of_values(self) -> int:
        """Smallest d such that every character value lies in Q(zeta_d)."""
        vals = [x for chi in self.irreps for x in chi]
        for d in sorted(k for k in range(1, 2 * self.exponent + 1) if (2 * self.exponent) % k == 0):
            if all(x.lies_in(d) for x in vals):
                return d
        return 2 * self.exponent

    def to_json(self) -> dict:
        return {
            "group": self.name,
            "order": self.order,
            "classes": [{"representative": [x.to_json() for x in r], "size": s, "element_order": o}
                        for r, s, o in zip(self.classes, self.sizes, self.class_orders)],
            "dims": self.dims,
            "characters": [[x.to_json() for x in chi] for chi in self.irreps],
        }


def _sym_table(g: GroupData, n: int):
    table = g._sym
    if not table:
        table.append([Cyclotomic.from_rational(1)] * len(g.classes))
        table.append(list(g.chi_V))
    while len(table) <= n:
        a, b = table[-1], table[-2]
        table.append([t * x - y for t, x, y in zip(g.chi_V, a, b)])
    return table


def _linear_characters(g: GroupData):
    """All homomorphisms G -> C^*, by extending generator images along the Cayley graph."""
    L = g.exponent
    gen_orders = [_element_order(x, g.identity) for x in g.gens]
    out = []
    for images in itertools.product(*[range(0, L, L // o) for o in gen_orders]):
        expo = {g.identity: 0}
        queue = deque([g.identity])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for gen, e in zip(g.gens, images):
                y = mat_mul(gen, x)
                v = (expo[x] + e) % L
                if y in expo:
                    if expo[y] != v:
                        ok = False
                        break
                else:
                    expo[y] = v
                    queue.append(y)
        if ok:
            out.append([Cyclotomic.zeta(L, expo[r]) for r in g.classes])
    return out


def _galois_units(g: GroupData):
    M = 2 * g.exponent
    return [k for k in range(2, M) if math.gcd(k, M) == 1]


def _split_irreducibles(g: GroupData) -> list:
    found: list = []

    def residual(chi):
        r = list(chi)
        for psi in found:
            c = g.inner(chi, psi)
            if c:
                r = [a - c * b for a, b in zip(r, psi)]
        return r

    def offer(chi) -> bool:
        r = residual(chi)
        if g.inner(r, r) == Cyclotomic.from_rational(1) and r[0].is_rational() and r[0].to_rational() > 0:
            found.append(r)
            return True
        return False

    def complete():
        return sum(int(chi[0].to_rational()) ** 2 for chi in found) == g.order

    for chi in _linear_characters(g):
        offer(chi)
    offer(g.chi_V)
    units = _galois_units(g)
    progress = True
    while not complete() and progress:
        progress = False
        for psi in list(found):
            if offer([v * x for v, x in zip(g.chi_V, psi)]):
                progress = True
        for psi in list(found):
            for k in units:
                if offer([x.galois(k) for x in psi]):
                    progress = True
        for a, b in itertools.combinations_with_replacement(list(found), 2):
            if offer([x * y for x, y in zip(a, b)]):
                progress = True
    if not complete():
        raise CharacterDataError(f"could not split the irreducible characters of {g.name}")
    # trivial first, then by degree; discovery order breaks ties
    triv = [chi for chi in found if all(x == Cyclotomic.from_rational(1) for x in chi)]
    rest = [chi for chi in found if chi is not triv[0]]
    rest.sort(key=lambda chi: chi[0].to_rational())
    return triv + rest


_GROUP_RE = re.compile(r"^\s*([a-z-]+)\s*(?::\s*(-?\d+))?\s*$")


def parse_group(desc: str) -> tuple[str, int | None]:
    m = _GROUP_RE.match(desc)
    if not m:
        raise GroupError(f"cannot parse group {desc!r}")
    fam = m.group(1)
    aliases = {"quaternion": ("binary-dihedral", 2), "2T": ("binary-tetrahedral", None)}
    if fam in aliases and m.group(2) is None:
        return aliases[fam]
    if fam not in FAMILIES:
        raise GroupError(f"unknown group family {fam!r}; expected one of {', '.join(FAMILIES)}")
    return fam, (int(m.group(2)) if m.group(2) is not None else None)


_GROUPS: dict = {}


def group_catalog(family: str, param: int | None = None) -> GroupData:
    """Validated group data; ``family`` may also be a full name like ``cyclic:5``."""
    if param is None and ":" in family:
        family, param = parse_group(family)
    elif family not in FAMILIES:
        family, p = parse_group(family)
        param = p if param is None else param
    key = (family, param)
    if key not in _GROUPS:
        conductor, gens = _generators(family, param)
        name = family if param is None else f"{family}:{param}"
        _GROUPS[key] = GroupData(family, param, name, conductor, gens)
    return _GROUPS[key]


def expected_dynkin(g: GroupData) -> str:
    if g.family == "cyclic":
        return f"A~{g.param - 1}"
    if g.family == "binary-dihedral":
        return f"D~{g.param + 2}"
    return {"binary-tetrahedral": "E~6", "binary-octahedral": "E~7",
            "binary-icosahedral": "E~8"}[g.family]


def group_for_dynkin(label: str) -> str | None:
    """Group name whose McKay graph is the catalog diagram ``label``."""
    kind, n = label.split("~")
    n = int(n)
    if kind == "A" and n >= 1:
        return f"cyclic:{n + 1}"
    if kind == "D" and n >= 4:
        return f"binary-dihedral:{n - 2}"
    return {"E~6": "binary-tetrahedral", "E~7": "binary-octahedral",
            "E~8": "binary-icosahedral"}.get(label)


# -- McKay graph ------------------------------------------------------------

def tensor_multiplicity(g: GroupData, i: int, j: int) -> int:
    """Multiplicity of V_j in V (x) V_i."""
    n = len(g.irreps)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("irreducible index out of range")
    prod = [v * x for v, x in zip(g.chi_V, g.irreps[i])]
    return g.inner_int(prod, g.irreps[j])


class McKayGraph:
    def __init__(self, group: GroupData, matrix: list, dims: list, match: DynkinModel | None,
                 vertex_map: dict | None):
        self.group = group
        self.matrix = matrix
        self.dims = dims
        self.match = match
        self.vertex_map = vertex_map  # irrep index -> catalog vertex

    def quiver(self) -> Quiver:
        n = len(self.dims)
        arrows = []
        for i in range(n):
            for j in range(i, n):
                for k in range(self.matrix[i][j] if i != j else self.matrix[i][i] // 2):
                    arrows.append(Arrow(f"m{i}.{j}.{k}", str(i), str(j)))
        return Quiver([str(i) for i in range(n)], arrows)

    def is_symmetric(self) -> bool:
        return all(self.matrix[i][j] == self.matrix[j][i]
                   for i in range(len(self.dims)) for j in range(len(self.dims)))

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "multiplicities": self.matrix,
            "delta": self.dims,
            "dynkin": self.match.label if self.match else None,
            "vertex_map": {str(k): v for k, v in sorted(self.vertex_map.items())} if self.vertex_map else None,
        }


def mckay_graph(g: GroupData) -> McKayGraph:
    n = len(g.irreps)
    matrix = [[tensor_multiplicity(g, i, j) for j in range(n)] for i in range(n)]
    dims = g.dims
    graph = McKayGraph(g, matrix, dims, None, None)
    if not graph.is_symmetric():
        raise CharacterDataError("McKay multiplicities are not symmetric")
    model = dynkin_catalog(expected_dynkin(g))
    q = graph.quiver()
    mine = {str(i): (dims[i], i == g.trivial) for i in range(n)}
    theirs = {v: (model.delta[v], v == model.extending) for v in model.quiver.vertices}
    iso = graph_isomorphism(q, model.quiver, mine, theirs)
    if iso is None:
        raise CharacterDataError(f"McKay graph of {g.name} does not match {model.label}")
    graph.match = model
    graph.vertex_map = {int(k): v for k, v in iso.items()}
    return graph


# -- dimension oracle -------------------------------------------------------

def graded_dim_oracle(g: GroupData, i: int, j: int, n: int) -> int:
    """dim Hom_G(V_j, Sym^n V (x) V_i)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    s = _sym_table(g, n)[n]
    prod = [a * b for a, b in zip(s, g.irreps[i])]
    return g.inner_int(prod, g.irreps[j])


def oracle_table(g: GroupData, max_degree: int) -> dict:
    """(i, j, n) -> graded_dim_oracle for all irreducible pairs."""
    k = len(g.irreps)
    return {(i, j, n): graded_dim_oracle(g, i, j, n)
            for i in range(k) for j in range(k) for n in range(max_degree + 1)}


# -- explicit model for cyclic groups ---------------------------------------
#
# G = <diag(z, z^-1)>, coordinates u, v on V.  The monomial u^p v^q is an
# equivariant map V_i -> V_j exactly when p - q = j - i (mod n).  The symplectic
# form is omega(x, y) = x1 y2 - x2 y1, i.e. omega = u(x)v - v(x)u in V* (x) V*,
# and iota: V* -> V with f(x) = omega(iota f, x) gives iota(u) = -e2, iota(v) = e1.

def cyclic_equivariant_model(n: int, i: int, j: int, d: int) -> list[tuple[int, int]]:
    """Exponent pairs (p, q) with u^p v^q a basis of equivariant degree-d maps V_i -> V_j."""
    if n < 2:
        raise GroupError("cyclic groups need order n >= 2")
    if d < 0:
        return []
    return [(p, d - p) for p in range(d, -1, -1) if (p - (d - p) - (j - i)) % n == 0]


def _iota(f: str):
    return {"u": (0, -1), "v": (1, 0)}[f]


def _eval_linear(f: str, x):
    return x[0] if f == "u" else x[1]


class CyclicPhi:
    """phi on the double quiver of A~(n-1): a_k: k -> k+1 goes to u, a_k* to c v.

    Values are noncommutative words in u, v (elements of the tensor algebra
    of V*) with rational coefficients.  The scale c is fixed by the trace
    condition tr((iota (x) 1) phi(a*) phi(a)) = dim V_i dim V_j.
    """

    def __init__(self, n: int):
        if n < 2:
            raise GroupError("cyclic groups need order n >= 2")
        self.n = n
        # (iota (x) 1)(v (x) u) = u(iota v) = u(e1) = 1, so c * 1 = 1
        pairing = Fraction(_eval_linear("u", _iota("v")))
        self.c = Fraction(1) / pairing
        self.images = {}
        for k in range(n):
            self.images[f"a{k}"] = {("u",): Fraction(1)}
            self.images[f"a{k}*"] = {("v",): self.c}

    def trace_condition(self) -> Fraction:
        (w, c), = self.images["a0*"].items()
        (w2, c2), = self.images["a0"].items()
        return c * c2 * _eval_linear(w2[0], _iota(w[0]))

    def moment_map(self) -> dict:
        """Vertex k -> sum over arrows of phi(a)phi(a*) - phi(a*)phi(a), as words."""
        out = {}
        n = self.n
        for k in range(n):
            acc: dict = {}
            # arrows into k: a_(k-1) (k-1 -> k); a a* is a cycle at k
            a_in, a_out = f"a{(k - 1) % n}", f"a{k}"
            for (w1, c1), (w2, c2) in itertools.product(self.images[a_in].items(),
                                                        self.images[a_in + "*"].items()):
                acc[w1 + w2] = acc.get(w1 + w2, 0) + c1 * c2
            for (w1, c1), (w2, c2) in itertools.product(self.images[a_out + "*"].items(),
                                                        self.images[a_out].items()):
                acc[w1 + w2] = acc.get(w1 + w2, 0) - c1 * c2
            out[k] = {w: c for w, c in acc.items() if c}
        return out

    def check_moment_map(self) -> bool:
        """Property: the moment map equals delta_k omega = u (x) v - v (x) u at every vertex."""
        omega = {("u", "v"): Fraction(1), ("v", "u"): Fraction(-1)}
        return all(m == omega for m in self.moment_map().values())


def generic_point_evaluation(n: int, i: int, x, d: int) -> dict:
    """Values at x of the equivariant maps V -> End(V_i) of degrees 1..d."""
    x = (Fraction(x[0]), Fraction(x[1]))
    values = []
    for deg in range(1, d + 1):
        for p, q in cyclic_equivariant_model(n, i, i, deg):
            values.append(((p, q), x[0] ** p * x[1] ** q))
    span = 1 if any(v for _, v in values) else 0
    return {
        "n": n, "vertex": i, "point": [fmt_rational(t) for t in x], "max_degree": d,
        "values": [{"monomial": list(m), "value": fmt_rational(v)} for m, v in values],
        "span_dim": span, "full": span == 1,
    }
