"""Command-line entry point: one subcommand per operation, each run leaves a manifest.

Exit codes: 0 success, 1 bipartite outcome of find-odd-cycle, 2 stage or
threshold failure, 3 input error.  Randomness comes from numpy's PCG64
generator seeded with the ``--seed`` integer.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .certificates import BipartiteCert, FailureReport, inputs_hash
from .constants import derive_constants, derive_constants_c2l
from .constructor import ConstructorConfig, find_odd_cycle, peel_bipartize
from .errors import InputError, PreconditionError, StageFailure
from .extremal import (ExtremalRecord, SmoothnessParams, check_quasi_smooth, kst_family, turan, verify_record,
                       write_z_table, zarankiewicz)
from .forbidden import FamilySpec, cycle_spectrum, girth, is_family_free
from .generators import incidence_graph, polarity_graph, random_mindeg_graph, random_theta_free
from .graph import Graph, diameter, read_graph, write_graph
from .lemmas import bipartize, c2l_ball, c2l_reach, expansion_cert, robust_reach
from .suites import SUITES, run_suite

INPUT_FLAGS = ("graph", "family", "config")
EXIT_OK, EXIT_BIPARTITE, EXIT_FAILURE, EXIT_INPUT = 0, 1, 2, 3


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"not serialisable: {type(x).__name__}")


def _finite(x):
    return "infinite" if x == math.inf else int(x)


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- argument grammar -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bipcert", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"bipcert {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--out", type=Path, default=None, help="output directory (default runs/<command>)")
        return p

    def family_args(p):
        p.add_argument("--family", help="FamilySpec JSON file")
        p.add_argument("--kst", nargs=2, type=int, metavar=("S", "T"), help="shorthand for {K_{s,t}}")

    def graph_arg(p):
        p.add_argument("--graph", required=True, help="graph file in the text format")

    def smooth_args(p, required=False):
        p.add_argument("--alpha", type=float, required=required)
        p.add_argument("--beta", type=float, required=required)
        p.add_argument("--rho", type=float, required=required)
        p.add_argument("--C", dest="bigC", type=float, default=1.0)

    p = cmd("zarankiewicz", help="exact or heuristic z(m,n,F)")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--table", type=int, metavar="MAX_TOTAL", help="all 1<=m<=n with m+n<=MAX_TOTAL")
    family_args(p)
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    smooth_args(p)
    p.add_argument("--rho0", type=float, default=1.0)

    p = cmd("turan", help="exact or heuristic ex(n,F)")
    p.add_argument("--n", type=int, required=True)
    family_args(p)
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)

    p = cmd("check-free", help="F-freeness with a witness")
    graph_arg(p)
    family_args(p)

    p = cmd("bipartize", help="connected spanning bipartite subgraph keeping half of every degree")
    graph_arg(p)

    p = cmd("expansion", help="two consecutive large BFS layers")
    graph_arg(p)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    smooth_args(p, required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--no-min-degree", action="store_true", help="report, do not enforce, the degree floor")

    p = cmd("reach", help="robust reachability path family")
    graph_arg(p)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--ell-max", type=int, required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--target", type=int)
    p.add_argument("--strict", action="store_true")

    p = cmd("c2l-ball", help="ball size in a C_2l-free bipartite graph")
    graph_arg(p)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = cmd("c2l-reach", help="tree-shaped path family in a C_2l-free bipartite graph")
    graph_arg(p)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=100)

    p = cmd("find-odd-cycle", help="odd cycle through a same-side edge, or a bipartition")
    graph_arg(p)
    p.add_argument("--config", help="ConstructorConfig JSON file")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--relaxed", action="store_true", help="set enforce=false")

    p = cmd("peel", help="delete low-degree vertices and test the rest for bipartiteness")
    graph_arg(p)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = cmd("constants", help="derived constants (ell0, gamma, mu, L, k0)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--ell", type=int)
    p.add_argument("--delta", type=float, required=True)

    p = cmd("construct", help="generate a graph")
    p.add_argument("kind", choices=["incidence", "polarity", "theta-free", "mindeg"])
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--model", default="matchings", choices=["matchings", "gnp"])
    p.add_argument("--seed", type=int, default=0)

    p = cmd("spectrum", help="cycle lengths up to a bound, and the girth")
    graph_arg(p)
    p.add_argument("--max-len", type=int, required=True)

    p = cmd("diameter", help="diameter and girth")
    graph_arg(p)

    p = cmd("verify-lemma", help="run an invariant suite over generated instances")
    p.add_argument("lemma", choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("rerun", help="replay a run from its manifest and compare outputs")
    p.add_argument("manifest", type=Path)
    p.add_argument("--out", type=Path, required=True)
    return ap


# -- helpers ----------------------------------------------------------------------------------------


class Outputs:
    """Files produced by one run, written in sorted order with the manifest last."""

    def __init__(self):
        self.files: dict[str, str] = {}

    def add(self, name: str, text: str) -> None:
        self.files[name] = text


def _load_graph(args) -> Graph:
    return read_graph(args.inputs["graph"])


def _load_family(args) -> FamilySpec:
    if args.family is not None and args.kst is not None:
        raise InputError("give --family or --kst, not both")
    if args.kst is not None:
        return kst_family(*args.kst)
    if args.family is None:
        raise InputError("a family is required (--family FILE or --kst S T)")
    return FamilySpec.from_json(args.inputs["family"])


def _cached(kind: str, compute, *key):
    """Memoise exact extremal records under $EXTREMAL_CACHE_DIR."""
    root = os.environ.get("EXTREMAL_CACHE_DIR")
    if not root:
        return compute()
    path = Path(root) / ("_".join([kind, *map(str, key)]) + ".json")
    if path.exists():
        obj = json.loads(path.read_text())
        rec = ExtremalRecord(obj["kind"], obj["m"], obj["n"], FamilySpec.from_json(obj["family"]),
                             obj["value"], read_graph(obj["witness"]), obj["exact"])
        if verify_record(rec):
            return rec
    rec = compute()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(rec.to_json()))
    return rec


# -- subcommands: each returns (result json, exit code) and may add files ----------------------------


def run_zarankiewicz(args, out: Outputs):
    family = _load_family(args)
    if args.table is not None:
        records = [
            _cached("z", lambda m=m, n=n: zarankiewicz(m, n, family, jobs=args.jobs), m, n, family.digest())
            for m in range(1, args.table) for n in range(m, args.table - m + 1)
        ] if args.table >= 2 else []
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = write_z_table(records, Path(tmp))
            for f in sorted(Path(tmp).iterdir()):
                out.add(f.name, f.read_text())
        result = {"kind": "z_table", "family": family.to_json(), "family_hash": family.digest(),
                  "rows": [{"m": r.m, "n": r.n, "value": r.value, "exact": r.exact} for r in records],
                  "csv": csv_path.name}
        if args.alpha is not None:
            params = SmoothnessParams(args.alpha, args.beta, args.rho, args.bigC, args.rho0)
            result["quasi_smooth"] = check_quasi_smooth(records, params).to_json()
        return result, EXIT_OK
    if args.m is None or args.n is None:
        raise InputError("--m and --n are required unless --table is given")
    if args.heuristic:
        rec = zarankiewicz(args.m, args.n, family, exact=False, seed=args.seed, restarts=args.restarts)
    else:
        rec = _cached("z", lambda: zarankiewicz(args.m, args.n, family, jobs=args.jobs),
                      args.m, args.n, family.digest())
    out.add("witness.txt", write_graph(rec.witness))
    return rec.to_json(), EXIT_OK


def run_turan(args, out: Outputs):
    family = _load_family(args)
    if args.heuristic:
        rec = turan(args.n, family, exact=False, seed=args.seed, restarts=args.restarts)
    else:
        rec = _cached("ex", lambda: turan(args.n, family, jobs=args.jobs), args.n, family.digest())
    out.add("witness.txt", write_graph(rec.witness))
    return rec.to_json(), EXIT_OK


def run_check_free(args, out: Outputs):
    g, family = _load_graph(args), _load_family(args)
    free, w = is_family_free(g, family)
    return {"kind": "freeness", "free": free, "witness": None if w is None else w.to_json(),
            "family": family.to_json(), "inputs_hash": inputs_hash(g, family=family.to_json())}, EXIT_OK


def run_bipartize(args, out: Outputs):
    g = _load_graph(args)
    res = bipartize(g)
    out.add("H.txt", write_graph(Graph(res.h.n, res.h.adj)))
    return {"kind": "bipartization", "inputs_hash": inputs_hash(g), "sides": [sorted(s) for s in res.sides],
            "edges_before": g.m, "edges_after": res.h.m, "cut_history": list(res.cut_history)}, EXIT_OK


def run_expansion(args, out: Outputs):
    g = _load_graph(args)
    params = SmoothnessParams(args.alpha, args.beta, args.rho, args.bigC, args.rho)
    res = expansion_cert(g, args.root, args.delta, params, threshold=args.threshold,
                         enforce_min_degree=not args.no_min_degree)
    return res.to_json(), EXIT_FAILURE if isinstance(res, FailureReport) else EXIT_OK


def run_reach(args, out: Outputs):
    g = _load_graph(args)
    return robust_reach(g, args.root, args.ell_max, args.cap, args.target, strict=args.strict).to_json(), EXIT_OK


def run_c2l_ball(args, out: Outputs):
    g = _load_graph(args)
    try:
        size = c2l_ball(g, args.root, args.ell, args.d)
    except PreconditionError as exc:
        if hasattr(exc.payload, "to_json"):
            return {"kind": "failure", "stage": "c2l_ball", "message": str(exc),
                    "data": {"witness": exc.payload.to_json()}, "inputs_hash": inputs_hash(g)}, EXIT_INPUT
        raise
    floor = (args.d / (4 * args.ell)) ** args.ell
    return {"kind": "c2l_ball", "inputs_hash": inputs_hash(g, root=args.root, ell=args.ell, d=args.d),
            "root": args.root, "size": size, "floor": floor}, EXIT_OK


def run_c2l_reach(args, out: Outputs):
    g = _load_graph(args)
    pf = c2l_reach(g, args.root, args.ell, args.d, args.seed, retries=args.retries)
    return pf.to_json(), EXIT_OK


def run_find_odd_cycle(args, out: Outputs):
    g = _load_graph(args)
    obj = json.loads(args.inputs["config"]) if args.config else {}
    if not isinstance(obj, dict):
        raise InputError("config must be a JSON object")
    for key in ("k", "seed"):
        if getattr(args, key) is not None:
            obj[key] = getattr(args, key)
    if args.relaxed:
        obj["enforce"] = False
    if "k" not in obj:
        raise InputError("k is required (config or --k)")
    cfg = ConstructorConfig.from_json(obj)
    res = find_odd_cycle(g, cfg)
    result = res.to_json()
    result["config"] = cfg.to_json()
    if isinstance(res, BipartiteCert):
        return result, EXIT_BIPARTITE
    if isinstance(res, FailureReport):
        return result, EXIT_FAILURE
    return result, EXIT_OK


def run_peel(args, out: Outputs):
    g = _load_graph(args)
    rep = peel_bipartize(g, args.delta, args.alpha)
    out.add("H.txt", write_graph(Graph(rep.h.n, rep.h.adj)))
    return rep.to_json(), EXIT_OK


def run_constants(args, out: Outputs):
    if args.ell is not None:
        c = derive_constants_c2l(args.ell, args.delta)
    else:
        if None in (args.alpha, args.beta, args.rho):
            raise InputError("need --alpha, --beta, --rho (or --ell)")
        c = derive_constants(args.alpha, args.beta, args.rho, args.delta)
    return {"kind": "constants", **c.to_json()}, EXIT_OK


def run_construct(args, out: Outputs):
    def need(*names):
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise InputError(f"construct {args.kind} needs --{', --'.join(missing)}")

    report = {"kind": "construct", "generator": args.kind}
    if args.kind in ("incidence", "polarity"):
        need("q")
        g = incidence_graph(args.q) if args.kind == "incidence" else polarity_graph(args.q)
        report.update(q=args.q)
    elif args.kind == "theta-free":
        need("m", "n", "t", "ell")
        g, rep = random_theta_free(args.m, args.n, args.t, args.ell, args.seed)
        report["theta"] = rep.to_json()
    else:
        need("n", "d")
        g = random_mindeg_graph(args.n, args.d, args.seed, args.model)
        report.update(d=args.d, model=args.model, seed=args.seed)
    text = write_graph(g)
    out.add("graph.txt", text)
    report.update(vertices=g.n, edges=g.m, min_degree=g.min_degree() if g.n else 0, graph_sha256=sha256(text))
    return report, EXIT_OK


def run_spectrum(args, out: Outputs):
    g = _load_graph(args)
    return {"kind": "spectrum", "inputs_hash": inputs_hash(g, max_len=args.max_len),
            "lengths": sorted(cycle_spectrum(g, args.max_len)), "girth": _finite(girth(g)),
            "max_len": args.max_len}, EXIT_OK


def run_diameter(args, out: Outputs):
    g = _load_graph(args)
    return {"kind": "diameter", "inputs_hash": inputs_hash(g), "diameter": _finite(diameter(g)),
            "girth": _finite(girth(g)), "min_degree": g.min_degree() if g.n else 0, "vertices": g.n}, EXIT_OK


def run_verify_lemma(args, out: Outputs):
    rep = run_suite(args.lemma, args.trials, args.seed, args.jobs)
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_FAILURE


RUNNERS = {
    "zarankiewicz": run_zarankiewicz, "turan": run_turan, "check-free": run_check_free,
    "bipartize": run_bipartize, "expansion": run_expansion, "reach": run_reach, "c2l-ball": run_c2l_ball,
    "c2l-reach": run_c2l_reach, "find-odd-cycle": run_find_odd_cycle, "peel": run_peel,
    "constants": run_constants, "construct": run_construct, "spectrum": run_spectrum,
    "diameter": run_diameter, "verify-lemma": run_verify_lemma,
}


# -- manifests --------------------------------------------------------------------------------------


def canonical_argv(argv: list[str]) -> list[str]:
    """argv with --out dropped and input paths replaced by @name placeholders."""
    out, skip = [], False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        flag, eq, _ = tok.partition("=")
        name = flag[2:] if flag.startswith("--") else None
        if name == "out":
            skip = not eq
            continue
        if name in INPUT_FLAGS:
            out += [flag, f"@{name}"]
            skip = not eq
            continue
        out.append(tok)
    return out


def _config_of(args) -> dict:
    skip = {"out", "inputs", "command"} | set(INPUT_FLAGS)
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def execute(argv: list[str], inputs_override: dict[str, str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "rerun":
        return rerun(args.manifest, args.out)
    out_dir = args.out or Path("runs") / args.command
    outputs = Outputs()
    args.inputs = {}
    try:
        for name in INPUT_FLAGS:
            path = getattr(args, name, None)
            if path is None:
                continue
            if inputs_override and name in inputs_override:
                args.inputs[name] = inputs_override[name]
            else:
                try:
                    args.inputs[name] = Path(path).read_text(encoding="utf-8")
                except OSError as exc:
                    raise InputError(f"cannot read --{name} {path}: {exc.strerror}") from None
        result, code = RUNNERS[args.command](args, outputs)
    except StageFailure as exc:
        result = {"kind": "failure", "stage": exc.stage, "message": exc.message, "data": exc.data,
                  "inputs_hash": ""}
        code = EXIT_FAILURE
    except InputError as exc:
        result = {"kind": "error", "message": str(exc)}
        if isinstance(exc, PreconditionError) and exc.payload is not None:
            result["payload"] = exc.payload.to_json() if hasattr(exc.payload, "to_json") else exc.payload
        code = EXIT_INPUT
        print(f"bipcert: error: {exc}", file=sys.stderr)
    outputs.add("result.json", dumps(result))
    manifest = {
        "tool": "bipcert",
        "version": __version__,
        "subcommand": args.command,
        "argv": canonical_argv(argv),
        "config": _config_of(args),
        "seed": getattr(args, "seed", None),
        "inputs": {k: {"sha256": sha256(v), "text": v} for k, v in sorted(args.inputs.items())},
        "outputs": {k: sha256(v) for k, v in sorted(outputs.files.items())},
        "outcome": {"exit_code": code, "kind": result.get("kind")},
        "rng": "numpy PCG64",
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(outputs.files.items()):
        (out_dir / name).write_text(text, encoding="utf-8")
    (out_dir / "manifest.json").write_text(dumps(manifest), encoding="utf-8")
    sys.stdout.write(outputs.files["result.json"])
    return code


def rerun(manifest_path: Path, out_dir: Path) -> int:
    """Replay a manifest into ``out_dir``; exit 0 iff every artifact is byte-identical."""
    try:
        old = json.loads(Path(manifest_path).read_text())
        argv = list(old["argv"])
        texts = {k: v["text"] for k, v in old["inputs"].items()}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"bipcert: error: unreadable manifest: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for k, text in texts.items():
        if sha256(text) != old["inputs"][k]["sha256"]:
            print(f"bipcert: error: input {k} does not match its recorded hash", file=sys.stderr)
            return EXIT_INPUT
    execute(argv + ["--out", str(out_dir)], inputs_override=texts)
    new = json.loads((Path(out_dir) / "manifest.json").read_text())
    same = new["outputs"] == old["outputs"]
    status = "identical" if same else "DIFFERENT"
    print(f"rerun: {len(new['outputs'])} artifacts {status}", file=sys.stderr)
    return EXIT_OK if same else EXIT_FAILURE


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return execute(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code not in (0, None) else 0


if __name__ == "__main__":
    sys.exit(main())
