import cmath
from fractions import Fraction

import pytest

from quiveralg.exact import Cyclotomic
from quiveralg.mckay import (CyclicPhi, GroupError, cyclic_equivariant_model, expected_dynkin,
                             generic_point_evaluation, graded_dim_oracle, group_catalog,
                             group_for_dynkin, mckay_graph, parse_group, tensor_multiplicity)
from quiveralg.quiver import dynkin_catalog

GROUPS = ["cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "binary-dihedral:2",
          "binary-dihedral:3", "binary-dihedral:4", "binary-tetrahedral", "binary-octahedral",
          "binary-icosahedral"]


def numeric(x: Cyclotomic) -> complex:
    z = cmath.exp(2j * cmath.pi / x.m)
    return sum(complex(float(c)) * z ** k for k, c in enumerate(x.coeffs))


def test_cyclic2_data():
    g = group_catalog("cyclic", 2)
    assert g.order == 2 and len(g.classes) == 2
    assert g.dims == [1, 1]
    minus = [k for k, o in enumerate(g.class_orders) if o == 2][0]
    assert g.chi_V[minus] == Cyclotomic.from_rational(-2)


def test_quaternion_data():
    g = group_catalog("binary-dihedral:2")
    assert g.order == 8
    assert sorted(g.dims) == [1, 1, 1, 1, 2]


def test_icosahedral_data():
    g = group_catalog("binary-icosahedral")
    assert g.order == 120 and len(g.irreps) == 9


@pytest.mark.parametrize("desc,orders", [("binary-tetrahedral", 24), ("binary-octahedral", 48)])
def test_exceptional_orders(desc, orders):
    g = group_catalog(desc)
    assert g.order == orders
    assert sum(d * d for d in g.dims) == g.order


def test_conductors():
    assert group_catalog("binary-tetrahedral").conductor_of_values() == 3
    assert group_catalog("binary-octahedral").conductor_of_values() == 8
    assert group_catalog("binary-icosahedral").conductor_of_values() == 5


def test_bad_groups():
    for desc in ("cyclic:0", "cyclic:1", "binary-dihedral:1", "binary-tetrahedral:3", "klein"):
        with pytest.raises(GroupError):
            group_catalog(desc)
    assert parse_group("quaternion") == ("binary-dihedral", 2)


@pytest.mark.parametrize("desc", GROUPS)
def test_orthonormality_and_sl2(desc):
    g = group_catalog(desc)
    g.validate()
    one = Cyclotomic.from_rational(1)
    zero = Cyclotomic.from_rational(0)
    for a, chi in enumerate(g.irreps):
        for b, psi in enumerate(g.irreps):
            assert g.inner(chi, psi) == (one if a == b else zero)


@pytest.mark.parametrize("desc", GROUPS)
def test_mckay_graph_matches_catalog(desc):
    g = group_catalog(desc)
    graph = mckay_graph(g)
    assert graph.is_symmetric()
    model = dynkin_catalog(expected_dynkin(g))
    assert graph.match.label == model.label
    for k, v in graph.vertex_map.items():
        assert model.delta[v] == g.dims[k]
    assert graph.vertex_map[g.trivial] == model.extending
    assert group_for_dynkin(model.label) in (desc, g.name)


@pytest.mark.parametrize("desc", GROUPS)
def test_sym_characters_against_numeric_eigenvalues(desc):
    g = group_catalog(desc)
    for c, rep in enumerate(g.classes):
        m = [[numeric(x) for x in rep[:2]], [numeric(x) for x in rep[2:]]]
        tr = m[0][0] + m[1][1]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        disc = cmath.sqrt(tr * tr - 4 * det)
        a, b = (tr + disc) / 2, (tr - disc) / 2
        for n in range(6):
            want = sum(a ** (n - k) * b ** k for k in range(n + 1))
            assert abs(numeric(g.sym_power(n)[c]) - want) < 1e-8


@pytest.mark.parametrize("desc", GROUPS)
def test_oracle_degree_one_is_adjacency(desc):
    g = group_catalog(desc)
    n = len(g.irreps)
    for i in range(n):
        assert graded_dim_oracle(g, i, i, 0) == 1
        assert sum(graded_dim_oracle(g, i, j, 1) * g.dims[j] for j in range(n)) == 2 * g.dims[i]
        for j in range(n):
            assert graded_dim_oracle(g, i, j, 1) == tensor_multiplicity(g, i, j)


def test_oracle_examples():
    c2 = group_catalog("cyclic:2")
    assert graded_dim_oracle(c2, 0, 0, 4) == 5
    q = group_catalog("binary-dihedral:2")
    two = q.dims.index(2)
    assert graded_dim_oracle(q, two, two, 2) == 3
    assert graded_dim_oracle(q, 0, 1, 0) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cyclic_model_matches_oracle(n):
    g = group_catalog("cyclic", n)
    # irreps of the cyclic group: identify each by its value on the generator class
    gen = [k for k, r in enumerate(g.classes) if r[0] == Cyclotomic.zeta(n)][0]
    label = {}
    for k, chi in enumerate(g.irreps):
        label[k] = [e for e in range(n) if chi[gen] == Cyclotomic.zeta(n, e)][0]
    for i in range(n):
        for j in range(n):
            for d in range(9):
                model = cyclic_equivariant_model(n, label[i], label[j], d)
                assert len(model) == graded_dim_oracle(g, i, j, d)


def test_cyclic_model_examples():
    assert sorted(cyclic_equivariant_model(2, 0, 0, 2)) == [(0, 2), (1, 1), (2, 0)]
    for n in (2, 3, 7):
        assert cyclic_equivariant_model(n, 1, 1, 0) == [(0, 0)]
    assert len(cyclic_equivariant_model(3, 1, 0, 1)) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_moment_map_property(n):
    phi = CyclicPhi(n)
    assert phi.trace_condition() == 1
    assert phi.check_moment_map()


def test_generic_point_evaluation():
    assert generic_point_evaluation(2, 0, (1, 1), 2)["full"]
    assert generic_point_evaluation(2, 0, (0, 0), 4)["span_dim"] == 0
    for i in range(3):
        assert generic_point_evaluation(3, i, (1, 2), 3)["full"]
    with pytest.raises(GroupError):
        CyclicPhi(1)
