"""Command-line front end.

    quiveralg mckay --group cyclic:5 --emit graph --max-degree 8
    quiveralg verify pi-degree --catalog D~4 --vertex center --lambda 0 -N 6

Reports are JSON with sorted keys and carry the full run configuration, so
two runs with the same arguments produce identical bytes.  Wall-clock
timings are only included with ``--timings``.

Exit codes: 0 holds, 3 inconclusive, 4 fails, 2 invalid input or a refused
precondition (a diagnostic JSON object is printed).
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from fractions import Fraction

from . import __version__, mckay, preproj, theorems
from .cache import CacheMismatch, TruncationCache
from .exact import NotRationalError, fmt_rational, rational
from .quiver import (Quiver, QuiverError, Weight, double, dynkin_catalog, graph_isomorphism,
                     identify_affine, lambda_from_polynomials, pairing, star_quiver)

EXIT = {theorems.HOLDS: 0, theorems.INCONCLUSIVE: 3, theorems.FAILS: 4}
EXIT_INVALID = 2
VERBS = ("theorem1", "center", "pi-degree", "kleinian", "chain", "dims", "lambda-independence")

log = logging.getLogger("quiveralg")


class UsageError(ValueError):
    pass


# -- input parsing ------------------------------------------------------------

def parse_weight(text: str | None, vertices) -> Weight | None:
    """A JSON map ``{"v": "p/q"}``, a comma list in vertex order, or one value for every vertex."""
    if text is None:
        return None
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"bad weight JSON: {e}") from None
        return Weight(data, vertices)
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        return Weight({v: parts[0] for v in vertices}, vertices)
    if len(parts) != len(vertices):
        raise UsageError(f"weight has {len(parts)} entries but the quiver has {len(vertices)} vertices "
                         f"(order: {', '.join(vertices)})")
    return Weight(dict(zip(vertices, parts)), vertices)


def parse_list(text: str) -> list[Fraction]:
    text = text.strip()
    if text.startswith("["):
        return [rational(x) for x in json.loads(text)]
    return [rational(x) for x in text.split(",") if x.strip()]


def parse_roots(text: str) -> list[list[Fraction]]:
    """Arms separated by ';' (or a JSON list of lists).  Each arm needs the root 0.

    Roots are put in a canonical order: one 0 first, the rest ascending.
    """
    text = text.strip()
    if text.startswith("["):
        arms = [[rational(x) for x in arm] for arm in json.loads(text)]
    else:
        arms = [parse_list(arm) for arm in text.split(";") if arm.strip()]
    if not arms:
        raise UsageError("no roots given")
    out = []
    for i, arm in enumerate(arms, start=1):
        if 0 not in arm:
            raise UsageError(f"arm {i}: 0 must be a root (P_{i}(0) = 0)")
        rest = list(arm)
        rest.remove(0)
        out.append([Fraction(0)] + sorted(rest))
    return out


# -- run configuration ------------------------------------------------------------

class RunConfig:
    FIELDS = ("command", "verb", "group", "emit", "max_degree", "catalog", "quiver_file",
              "roots", "mu", "lambda_", "lambdas", "vertex", "N", "seed", "trials",
              "cache_dir", "out", "verify_cache")

    def __init__(self, args):
        for f in self.FIELDS:
            setattr(self, f, getattr(args, f, None))

    def to_json(self) -> dict:
        out = {}
        for f in self.FIELDS:
            val = getattr(self, f)
            if val is not None and val is not False:
                out[f.rstrip("_")] = val
        return out


class Instance:
    def __init__(self, desc: dict, quiver: Quiver, model, default_weight=None, roots=None, mu=None):
        self.desc = desc
        self.quiver = quiver
        self.model = model
        self.default_weight = default_weight
        self.roots = roots
        self.mu = mu


def resolve_instance(cfg: RunConfig, required: bool = True) -> Instance | None:
    given = [x for x in (cfg.catalog, cfg.quiver_file, cfg.roots) if x]
    if len(given) > 1:
        raise UsageError("give only one of --catalog, --quiver-file, --roots")
    if cfg.catalog:
        model = dynkin_catalog(cfg.catalog)
        return Instance({"catalog": model.label}, model.quiver, model)
    if cfg.quiver_file:
        try:
            with open(cfg.quiver_file) as fh:
                q = Quiver.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
            raise UsageError(f"cannot read quiver file: {e}") from None
        model = identify_affine(q)
        return Instance({"quiver": q.to_json(), "digest": q.digest(),
                         "affine_type": model.label if model else None}, q, model)
    if cfg.roots:
        if cfg.mu is None:
            raise UsageError("--roots needs --mu")
        roots = parse_roots(cfg.roots)
        mu = rational(cfg.mu)
        q = star_quiver([len(r) for r in roots])
        model = identify_affine(q)
        w = lambda_from_polynomials(roots, mu)
        return Instance({"roots": [[fmt_rational(a) for a in r] for r in roots], "mu": fmt_rational(mu),
                         "affine_type": model.label if model else None},
                        q, model, default_weight=w, roots=roots, mu=mu)
    if required:
        raise UsageError("an instance is required: --catalog, --quiver-file or --roots")
    return None


def instance_weight(cfg: RunConfig, inst: Instance) -> Weight:
    w = parse_weight(cfg.lambda_, inst.quiver.vertices)
    if w is None:
        w = inst.default_weight or Weight.zero(inst.quiver)
    return w


def hyperplane_echo(model, w: Weight) -> dict | None:
    if model is None:
        return None
    val = pairing(w, model.delta)
    return {"delta": dict(sorted(model.delta.items())), "delta_dot_lambda": fmt_rational(val),
            "on_hyperplane": val == 0}


def _n(cfg: RunConfig, default: int) -> int:
    return default if cfg.N is None else cfg.N


def need_model(inst: Instance, verb: str):
    if inst.model is None:
        raise UsageError(f"'{verb}' needs an extended Dynkin quiver; this instance is not one")
    return inst.model


# -- verbs ------------------------------------------------------------------------

def _verify_theorem1(cfg, inst, w):
    if inst.roots is None:
        raise UsageError("theorem1 needs --roots and --mu")
    res = theorems.verify_theorem1(inst.roots, inst.mu, _n(cfg, 6))
    witnesses = [c for c in res["checks"] if c["zero"] is False]
    return res, res["N"], witnesses


def _verify_center(cfg, inst, w):
    model = need_model(inst, "center")
    res = theorems.center_dimensions(model, w, cfg.vertex or "center", _n(cfg, 8), seed=cfg.seed)
    return res, res["N"], None


def _verify_pi(cfg, inst, w):
    model = need_model(inst, "pi-degree")
    rep = theorems.verify_pi_degree(model, w, cfg.vertex or "center", _n(cfg, 6),
                                    trials=cfg.trials, seed=cfg.seed)
    res = rep.to_json()
    witnesses = {"failure": res["failure"],
                 "minimality": res["minimality"] and res["minimality"]["witness"]}
    return res, res["N"], witnesses


def _verify_kleinian(cfg, inst, w):
    model = need_model(inst, "kleinian")
    N = _n(cfg, 8)
    pres = theorems.kleinian_relation(model, w, N)
    res = {"theorem": "kleinian", "quiver": model.label, "lambda": w.to_json(), "N": N,
           "presentation": pres.to_json() if pres else None, "shape": None, "deformation": None}
    if pres is None:
        res["verdict"] = theorems.INCONCLUSIVE
        return res, N, None
    ok = pres.minimal
    if model.label.startswith("A~"):
        base = pres if w.is_zero() else theorems.kleinian_relation(model, None, N)
        if base is None:
            ok = None
        else:
            res["shape"] = theorems.kleinian_shape(base, len(model.quiver.vertices))
            ok = ok and res["shape"]["ok"]
    if not w.is_zero() and ok is not None:
        dcheck = theorems.kleinian_deformation_check(model, w, N)
        res["deformation"] = {k: v for k, v in dcheck.items() if k not in ("deformed", "undeformed")}
        if dcheck["verdict"] == theorems.INCONCLUSIVE:
            ok = None
        else:
            ok = ok and dcheck["verdict"] == theorems.HOLDS
    res["verdict"] = theorems.INCONCLUSIVE if ok is None else (theorems.HOLDS if ok else theorems.FAILS)
    return res, N, pres.to_json()["relation"]


def _verify_chain(cfg, inst, w):
    text = cfg.lambdas if cfg.lambdas is not None else cfg.lambda_
    if text is None:
        raise UsageError("chain needs --lambdas l1,...,l(n-1)")
    lam = parse_list(text)
    res = theorems.chain_min_poly(lam, cfg.N)
    return res, res.get("N"), {"computed": res.get("computed_str")}


def _oracle_check(model, table: preproj.DimensionTable, N: int):
    desc = mckay.group_for_dynkin(model.label)
    if desc is None:
        return None
    g = mckay.group_catalog(desc)
    graph = mckay.mckay_graph(g)
    # translate irreducible indices to vertices of this quiver
    cat = dynkin_catalog(model.label)
    m = graph_isomorphism(cat.quiver, model.quiver,
                          {v: (d, v == cat.extending) for v, d in cat.delta.items()},
                          {v: (d, v == model.extending) for v, d in model.delta.items()})
    to_inst = {k: m[v] for k, v in graph.vertex_map.items()}
    mismatch = None
    for i, vi in sorted(to_inst.items()):
        for j, vj in sorted(to_inst.items()):
            want = [mckay.graded_dim_oracle(g, i, j, n) for n in range(N + 1)]
            got = table.layers(vi, vj)
            if got != want and mismatch is None:
                mismatch = {"src": vi, "tgt": vj, "computed": got, "oracle": want}
    return {"group": g.name, "equal": mismatch is None, "first_mismatch": mismatch}


def _verify_dims(cfg, inst, w):
    N = cfg.N if cfg.N is not None else preproj.DEFAULT_N
    tq = preproj.build_truncation(double(inst.quiver), w, N)
    table = tq.dimension_table()
    res = {"theorem": "dims", "lambda": w.to_json(), "N": N, "engine": tq.engine,
           "standard_paths": len(tq.standard), "table": table.to_json(), "oracle": None}
    verdict = theorems.HOLDS
    if inst.model is not None and w.is_zero():
        res["oracle"] = _oracle_check(inst.model, table, N)
        if res["oracle"] is not None and not res["oracle"]["equal"]:
            verdict = theorems.FAILS
    res["verdict"] = verdict
    return res, N, res["oracle"] and res["oracle"]["first_mismatch"]


def _random_weight(rng: random.Random, vertices) -> Weight:
    return Weight({v: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for v in vertices}, vertices)


def _verify_lambda_independence(cfg, inst, w):
    N = cfg.N if cfg.N is not None else preproj.DEFAULT_N
    rng = random.Random(cfg.seed)
    samples = [Weight.zero(inst.quiver)]
    if not w.is_zero():
        samples.append(w)
    samples += [_random_weight(rng, inst.quiver.vertices) for _ in range(2)]
    res = preproj.lambda_independence_check(double(inst.quiver), N, samples)
    res["theorem"] = "lambda-independence"
    res["verdict"] = theorems.HOLDS if res["equal"] else theorems.FAILS
    return res, N, res["first_discrepancy"]


VERIFY = {
    "theorem1": _verify_theorem1, "center": _verify_center, "pi-degree": _verify_pi,
    "kleinian": _verify_kleinian, "chain": _verify_chain, "dims": _verify_dims,
    "lambda-independence": _verify_lambda_independence,
}


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    inst = resolve_instance(cfg, required=cfg.verb != "chain")
    if inst is None:
        w, echo, desc = None, None, {"chain": True}
    else:
        w = instance_weight(cfg, inst)
        echo = hyperplane_echo(inst.model, w)
        desc = inst.desc
    try:
        res, N, witnesses = VERIFY[cfg.verb](cfg, inst, w)
    except theorems.PreconditionError as e:
        raise Refused(str(e), {"instance": desc, "hyperplane": echo}) from None
    except (preproj.ResourceLimitError, preproj.DegreeOverflowError) as e:
        res, N, witnesses = {"theorem": cfg.verb, "error": str(e),
                             "verdict": theorems.INCONCLUSIVE}, cfg.N, None
    report = {
        "theorem": cfg.verb, "instance": desc, "N": N, "verdict": res["verdict"],
        "witnesses": witnesses, "seed": cfg.seed, "hyperplane": echo, "result": res,
    }
    return report, EXIT[res["verdict"]]


def cmd_mckay(cfg: RunConfig) -> tuple[dict, int]:
    g = mckay.group_catalog(cfg.group)
    graph = mckay.mckay_graph(g)
    emit = cfg.emit
    report = {"command": "mckay", "group": g.name, "order": g.order,
              "dynkin": graph.match.label, "orthonormal": True}
    delta_ok = all(graph.match.delta[v] == graph.dims[k] for k, v in graph.vertex_map.items())
    report["delta_equals_dims"] = delta_ok
    if emit in ("graph", "all"):
        report["graph"] = graph.to_json()
        if g.family == "cyclic":
            phi = mckay.CyclicPhi(g.param)
            report["moment_map"] = {"scale": fmt_rational(phi.c),
                                    "trace_condition": fmt_rational(phi.trace_condition()),
                                    "equals_delta_omega": phi.check_moment_map()}
    if emit in ("chartable", "all"):
        report["character_table"] = g.to_json()
    if emit in ("dims", "all"):
        table = mckay.oracle_table(g, cfg.max_degree)
        k = len(g.irreps)
        report["oracle"] = {
            "max_degree": cfg.max_degree,
            "entries": [{"i": i, "j": j, "vertices": [graph.vertex_map[i], graph.vertex_map[j]],
                         "dims": [table[(i, j, n)] for n in range(cfg.max_degree + 1)]}
                        for i in range(k) for j in range(k)],
        }
    ok = delta_ok and report.get("moment_map", {}).get("equals_delta_omega", True)
    report["verdict"] = theorems.HOLDS if ok else theorems.FAILS
    return report, EXIT[report["verdict"]]


class Refused(Exception):
    def __init__(self, message: str, context: dict | None = None):
        super().__init__(message)
        self.context = context or {}


# -- output -----------------------------------------------------------------------

def _default(obj):
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiveralg", description="Exact computations with deformed "
                                "preprojective algebras and McKay graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
        sp.add_argument("-v", "--verbose", action="store_true")

    m = sub.add_parser("mckay", help="character table, McKay graph and dimension oracle of a group")
    m.add_argument("--group", required=True,
                   help="cyclic:n, binary-dihedral:n, binary-tetrahedral, binary-octahedral, binary-icosahedral")
    m.add_argument("--emit", choices=("graph", "chartable", "dims", "all"), default="all")
    m.add_argument("--max-degree", type=int, default=6)
    common(m)

    v = sub.add_parser("verify", help="run one verification")
    v.add_argument("verb", choices=VERBS)
    v.add_argument("--catalog", help="extended Dynkin label: A~n, D~n, E~6, E~7, E~8")
    v.add_argument("--quiver-file", help='JSON {"vertices": [...], "arrows": [{"id","src","tgt"}]}')
    v.add_argument("--roots", help="star-quiver roots, arms separated by ';', e.g. '0,1;0,1;0,1'")
    v.add_argument("--mu", help="weight at the centre of the star quiver")
    v.add_argument("--lambda", dest="lambda_",
                   help="weight: JSON map, comma list in vertex order, or one value for all vertices")
    v.add_argument("--lambdas", help="chain weights l1,...,l(n-1)")
    v.add_argument("--vertex", help="vertex id, 'center' or 'extending'")
    v.add_argument("-N", type=int, dest="N", help="truncation degree")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cache-dir", help="persist truncation tables here")
    v.add_argument("--verify-cache", action="store_true",
                   help="rebuild every cached truncation and compare bit for bit")
    common(v)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig(args)
    cache = None
    t0 = time.perf_counter()
    try:
        if cfg.N is not None and cfg.N < 0:
            raise UsageError("-N must be nonnegative")
        if cfg.command == "mckay" and cfg.max_degree < 0:
            raise UsageError("--max-degree must be nonnegative")
        if getattr(args, "cache_dir", None):
            cache = TruncationCache(args.cache_dir, verify=args.verify_cache)
            preproj.use_cache(cache)
        if cfg.command == "mckay":
            report, code = cmd_mckay(cfg)
        else:
            report, code = cmd_verify(cfg)
    except (UsageError, QuiverError, NotRationalError, mckay.GroupError, ValueError,
            mckay.CharacterDataError, CacheMismatch, Refused) as e:
        kind = {Refused: "precondition", CacheMismatch: "cache",
                mckay.CharacterDataError: "character-data"}.get(type(e), "invalid-input")
        diag = {"error": kind, "message": str(e), "config": cfg.to_json()}
        if isinstance(e, Refused):
            diag.update(e.context)
        sys.stdout.write(dumps(diag))
        return EXIT_INVALID
    finally:
        preproj.use_cache(None)
    report["config"] = cfg.to_json()
    report["timings"] = None
    if args.timings:
        report["timings"] = {"total_seconds": round(time.perf_counter() - t0, 3),
                             "cache": cache.events if cache else None}
    emit(dumps(report), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
