import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from oracles import frames_dimensions

from quiveralg import kernel
from quiveralg.pathalg import AlgebraElement, Path, relation_components
from quiveralg.preproj import (DegreeOverflowError, InexactTruncation, ResourceLimitError,
                               TruncatedQuotient, build_truncation, corner_algebra,
                               dimension_table, lambda_independence_check, normal_form,
                               quotient_multiply)
from quiveralg.quiver import (Arrow, Quiver, QuiverError, Weight, double, dynkin_catalog,
                              lambda_from_polynomials, star_quiver)
from quiveralg.theorems import a_side_quotient

ONE = double(Quiver(["1", "2"], [Arrow("a", "1", "2")]))


def table_of(tq):
    return {k: v for k, v in tq.dimension_table().items()}


def test_single_arrow_n2():
    tq = build_truncation(ONE, None, 2)
    # e_1, e_2, a, a*; both a a* and a* a are vertex components of the relation
    assert len(tq.standard) == 4
    assert tq.is_zero(AlgebraElement.word(ONE, "a", "a*"))
    assert tq.is_zero(AlgebraElement.word(ONE, "a*", "a"))


def test_single_arrow_against_frames_oracle():
    for N in (2, 3, 4):
        rels = list(relation_components(ONE, Weight.zero(ONE)).values())
        tq = build_truncation(ONE, None, N)
        assert table_of(tq) == frames_dimensions(ONE, rels, N)


@pytest.mark.parametrize("label,w,N", [
    ("A~1", {"0": 1, "1": -1}, 5),
    ("A~1", {"0": 2, "1": 3}, 4),
    ("A~2", {"0": Fraction(1, 2), "1": -2, "2": 0}, 4),
    ("D~4", {"2": 1, "0": -3}, 4),
])
def test_tables_match_frames_oracle(label, w, N):
    dq = double(dynkin_catalog(label).quiver)
    w = Weight(w, dq.vertices)
    rels = list(relation_components(dq, w).values())
    assert table_of(build_truncation(dq, w, N)) == frames_dimensions(dq, rels, N)


def test_zero_algebra_instance_against_frames_oracle():
    # one arm, roots (0, 1, 2), mu = 5: the relations force 1 = 0 at every vertex
    q = star_quiver([3])
    dq = double(q)
    w = lambda_from_polynomials([[0, 1, 2]], 5)
    rels = list(relation_components(dq, w).values())
    tq = build_truncation(dq, w, 6)
    assert table_of(tq) == frames_dimensions(dq, rels, 6)
    assert tq.dimension_table().corner("c") == [0] * 7


def test_n0_is_idempotents():
    for label in ("A~2", "D~4"):
        dq = double(dynkin_catalog(label).quiver)
        tq = build_truncation(dq, None, 0)
        assert len(tq.standard) == len(dq.vertices)
        for v in dq.vertices:
            assert len(tq.corner_algebra(v)) == 1


def test_d4_center_layers():
    d4 = dynkin_catalog("D~4")
    tq = build_truncation(double(d4.quiver), None, 6)
    c = d4.vertex("center")
    assert tq.dimension_table().corner(c)[:3] == [1, 0, 3]


def test_normal_form_examples():
    dq = double(dynkin_catalog("A~2").quiver)
    w = Weight({"0": 1, "1": -1}, dq.vertices)
    tq = build_truncation(dq, w, 4)
    comps = relation_components(dq, w)
    for v in dq.vertices:
        e = AlgebraElement.idempotent(v)
        assert normal_form(tq, e) == e
        assert not normal_form(tq, comps[v])
    a = AlgebraElement.arrow(dq, "a0")
    assert quotient_multiply(tq, a, AlgebraElement.idempotent("0")) == a


def test_pivot_choice_is_stable():
    # under the default order the larger word a* a ... is rewritten; both orders give the same dimensions
    dq = double(dynkin_catalog("A~1").quiver)
    t1 = build_truncation(dq, None, 4)
    t2 = build_truncation(dq, None, 4, order="deglex-rev")
    assert t1.dimension_table() == t2.dimension_table()
    assert [str(p) for p in t1.standard] == [str(p) for p in build_truncation(dq, None, 4).standard]


def test_theorem1_example_relations():
    q = star_quiver([2, 2, 2])
    dq = double(q)
    tq = build_truncation(dq, lambda_from_polynomials([[0, 1]] * 3, Fraction(3, 2)), 6, sources=["c"])
    xs = [AlgebraElement.word(dq, f"a{i}.1", f"a{i}.1*") for i in (1, 2, 3)]
    for x in xs:
        assert tq.normal_form(x * x) == tq.normal_form(x)
    total = xs[0] + xs[1] + xs[2] - AlgebraElement.idempotent("c").scale(Fraction(3, 2))
    assert tq.is_zero(total)


def test_degree_overflow_and_sources():
    dq = double(dynkin_catalog("A~1").quiver)
    tq = build_truncation(dq, None, 2, sources=["0"])
    long = AlgebraElement.word(dq, "a0", "a1", "a0")
    with pytest.raises(DegreeOverflowError):
        tq.normal_form(long)
    with pytest.raises(DegreeOverflowError):
        tq.normal_form(AlgebraElement.arrow(dq, "a1"))
    with pytest.raises(QuiverError):
        tq.corner_algebra("1")


def test_resource_cap():
    dq = double(dynkin_catalog("D~4").quiver)
    with pytest.raises(ResourceLimitError):
        build_truncation(dq, None, 8, cap=20)


MODELS = {label: double(dynkin_catalog(label).quiver) for label in ("A~1", "A~2", "A~3", "D~4", "E~6")}


@pytest.mark.parametrize("label", sorted(MODELS))
@pytest.mark.parametrize("lam", [0, 1])
def test_engines_agree(label, lam):
    dq = MODELS[label]
    w = Weight({v: (k - 1) * lam for k, v in enumerate(dq.vertices)}, dq.vertices)
    N = 6 if label == "E~6" else 7
    a = build_truncation(dq, w, N, engine="standard")
    b = build_truncation(dq, w, N, engine="frames")
    assert a.same_tables(b)


def test_standard_engine_detects_degree_drop():
    q = star_quiver([2, 2, 2])
    w = lambda_from_polynomials([[0, 1]] * 3, Fraction(3, 2))
    with pytest.raises(InexactTruncation):
        build_truncation(double(q), w, 6, engine="standard")
    tq = build_truncation(double(q), w, 6)
    assert tq.engine == "frames"


@pytest.mark.skipif(kernel.BACKEND != "cython", reason="compiled kernel not built")
@pytest.mark.parametrize("engine", ["standard", "frames"])
def test_backends_agree(engine):
    dq = MODELS["D~4"]
    w = Weight({"2": 1, "0": -2}, dq.vertices)
    a = build_truncation(dq, w, 6, engine=engine, backend="python")
    b = build_truncation(dq, w, 6, engine=engine, backend="cython")
    assert a.same_tables(b)


def _random_element(tq, rng, deg):
    vec = {}
    for v in tq.sources:
        for t in tq.quiver.vertices:
            for k, c in tq.random_vec(rng, v, t, deg).items():
                if rng.random() < 0.3:
                    vec[k] = c
    return vec


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_quotient_associativity(seed):
    rng = random.Random(seed)
    tq = _TQ
    x, y, z = (_random_element(tq, rng, 2) for _ in range(3))
    assert tq.mul_vec(tq.mul_vec(x, y), z) == tq.mul_vec(x, tq.mul_vec(y, z))


_TQ = build_truncation(MODELS["D~4"], Weight({"2": 1, "1": -2}, MODELS["D~4"].vertices), 6)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_normal_form_idempotent(seed):
    rng = random.Random(seed)
    dq = MODELS["D~4"]
    terms = {}
    for _ in range(5):
        v = rng.choice(dq.vertices)
        p = Path.trivial(v)
        for _ in range(rng.randint(0, 6)):
            a = rng.choice([a for a in dq.arrows if a.src == p.tgt])
            p = Path(p.src, a.tgt, (a.id,) + p.arrows)
        terms[p] = rng.randint(-4, 4)
    x = AlgebraElement(terms)
    nf = _TQ.normal_form(x)
    assert _TQ.normal_form(nf) == nf
    assert all(_TQ.is_standard(p) for p in nf.terms)


def test_two_sided_ideal_membership():
    dq = MODELS["A~2"]
    w = Weight({"0": 2, "1": -1, "2": 3}, dq.vertices)
    N = 5
    tq = build_truncation(dq, w, N)
    comps = relation_components(dq, w)
    from oracles import all_paths
    paths, _ = all_paths(dq, N - 2)
    for v, r in comps.items():
        for p in paths:
            if p.src != v:
                continue
            for q in paths:
                if q.tgt != v or len(p.arrows) + len(q.arrows) + 2 > N:
                    continue
                frame = AlgebraElement.path(p) * r * AlgebraElement.path(q)
                assert tq.is_zero(frame)


def test_json_round_trip():
    tq = build_truncation(MODELS["A~2"], Weight({"0": 1, "1": -1}, MODELS["A~2"].vertices), 5)
    back = TruncatedQuotient.from_json(tq.to_json(), tq.relations, tq.lam)
    assert back.same_tables(tq)
    assert back.cache_key() == tq.cache_key()


def test_order_independence():
    for label in ("A~2", "D~4"):
        dq = MODELS[label]
        a = build_truncation(dq, None, 6)
        b = build_truncation(dq, None, 6, order="deglex-rev")
        assert a.dimension_table() == b.dimension_table()


def test_lambda_independence_examples():
    dq = MODELS["A~1"]
    rep = lambda_independence_check(dq, 6, [Weight.zero(dq), {"0": 1, "1": -1}])
    assert rep["equal"] and rep["first_discrepancy"] is None
    q = star_quiver([2, 2, 2, 2])
    rep = lambda_independence_check(double(q), 6, [lambda_from_polynomials([[0, 1]] * 4, 2)])
    assert rep["equal"]


def test_first_difference():
    # one loop: x^2 and x^2 - 1 have the same filtered dimensions, but adding x - 1 collapses it
    q = Quiver(["e"], [Arrow("x", "e", "e")])
    relations0 = [AlgebraElement({Path("e", "e", ("x", "x")): 1})]
    relations1 = [AlgebraElement({Path("e", "e", ("x", "x")): 1, Path.trivial("e"): -1})]
    a = TruncatedQuotient(q, relations0, 4)
    b = TruncatedQuotient(q, relations1, 4)
    assert a.dimension_table().first_difference(b.dimension_table()) is None
    c = TruncatedQuotient(q, [AlgebraElement({Path("e", "e", ("x",)): 1, Path.trivial("e"): -1}),
                              AlgebraElement({Path("e", "e", ("x", "x")): 1})], 4)
    assert a.dimension_table().first_difference(c.dimension_table()) is not None


def test_corner_algebra_api():
    d4 = dynkin_catalog("D~4")
    tq = build_truncation(double(d4.quiver), None, 4)
    c = corner_algebra(tq, "0")
    assert c.layer_dims() == dimension_table(tq).corner("0")
    assert c.unit() == AlgebraElement.idempotent("0")
    for p in c.basis_of_degree(4):
        assert c.degree(AlgebraElement.path(p)) == 4
    x = AlgebraElement.path(c.basis_of_degree(2)[0]) if c.basis_of_degree(2) else c.unit()
    assert c.multiply(c.unit(), x) == c.normal_form(x)


def test_weighted_presentation_side():
    tq = a_side_quotient([[0, 1]] * 3, Fraction(3, 2), 6)
    assert tq.dimension_table().filtered("e", "e") == [1, 1, 3, 3, 4, 4, 4]
