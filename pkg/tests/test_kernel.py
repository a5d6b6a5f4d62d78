import json
import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from quiveralg import _reduce_py, kernel

BACKENDS = [_reduce_py]
try:
    from quiveralg import _reduce_ext
    BACKENDS.append(_reduce_ext)
except ImportError:
    _reduce_ext = None


def random_rows(seed, n=30, cols=25):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        row = {}
        for _ in range(rng.randint(1, 5)):
            c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            if c:
                row[rng.randrange(cols)] = c
        if row:
            rows.append(row)
    return rows


def dense_rank(rows, cols):
    # textbook Gaussian elimination as an oracle
    m = [[r.get(c, Fraction(0)) for c in range(cols)] for r in rows]
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("seed", range(10))
def test_echelon_rank_and_normal_forms(mod, seed):
    rows = random_rows(seed)
    ech = mod.Echelon()
    for r in rows:
        ech.add(dict(r))
    assert len(ech) == dense_rank(rows, 25)
    for r in rows:
        assert not ech.reduce(dict(r))
    for p, nf in ech.nf.items():
        assert all(c < p and c not in ech.nf for c in nf)


@pytest.mark.skipif(_reduce_ext is None, reason="compiled kernel not built")
@pytest.mark.parametrize("seed", range(10))
def test_backends_identical(seed):
    rows = random_rows(seed, n=40, cols=30)
    a, b = _reduce_py.Echelon(), _reduce_ext.Echelon()
    for r in rows:
        assert a.add(dict(r)) == b.add(dict(r))
    assert a.nf == b.nf
    table = {k: {k + 1: Fraction(1, k + 1), 0: Fraction(-1)} for k in range(30)}
    vec = {k: Fraction(k, 3) for k in range(0, 30, 3)}
    assert _reduce_py.lincomb(vec, table) == _reduce_ext.lincomb(vec, table)


def test_module_lookup():
    assert kernel.module("python") is _reduce_py
    assert kernel.module() in BACKENDS
    with pytest.raises(ValueError):
        kernel.module("fortran")


def test_pure_python_override():
    env = dict(os.environ, QUIVERALG_PURE_PYTHON="1")
    res = subprocess.run([sys.executable, "-c", "from quiveralg import BACKEND; print(BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert res.stdout.strip() == "python"


@pytest.mark.skipif(_reduce_ext is None, reason="extension not built")
def test_backends_serialize_identically():
    from quiveralg.preproj import build_truncation
    from quiveralg.quiver import double, dynkin_catalog
    dq = double(dynkin_catalog("A~2").quiver)
    lam = {"0": 1, "1": Fraction(-1, 2), "2": Fraction(-1, 2)}
    a = build_truncation(dq, lam, 6, engine="frames", backend="cython")
    b = build_truncation(dq, lam, 6, engine="frames", backend="python")
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


@pytest.mark.skipif(_reduce_ext is None, reason="extension not built")
def test_benchmark_quick(capsys):
    root = os.path.join(os.path.dirname(__file__), "..", "benchmarks")
    sys.path.insert(0, root)
    try:
        import bench_reduce
    finally:
        sys.path.remove(root)
    assert bench_reduce.main(["--quick", "--repeat", "1"]) == 0
    assert "speedup" in capsys.readouterr().out
