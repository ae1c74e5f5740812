"""Experiment runner: config ingestion, verification campaigns, dumps.

Subcommands:
    run   --config cfg.json [--out DIR] [--seed N] [--workers K] [--only NAME]
    list  [--json]
    dump  tensor|flow|ode ...

Exit codes: 0 all asserted checks pass, 1 a numerical check failed,
2 config or usage violation.
"""

from __future__ import annotations

import argparse
import graphlib
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema

from . import catalog, checks, corpus, reporting, tensor_io
from .projective import ProjectiveMap, ode_invariance_check

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer"},
        "profile": {"enum": ["quick", "full"]},
        "budgets": {
            "type": "object",
            "properties": {"c_d": {"type": "number", "exclusiveMinimum": 0}},
            "additionalProperties": False,
        },
        "catalog": {"type": "object"},
        "experiments": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "kind"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "kind": {"enum": ["transform", "solve", "verify", "sweep"]},
                    "checks": {"type": "array", "items": {"type": "string"}},
                    "flow": {"type": "string"},
                    "tensor": {"type": "string"},
                    "n": {"type": "integer", "minimum": 8},
                    "alphas": {"type": "array", "items": {"type": "number"}},
                    "check": {"type": "string"},
                    "parameter": {"type": "string"},
                    "values": {"type": "array"},
                    "depends_on": {"type": "array", "items": {"type": "string"}},
                },
                "additionalProperties": False,
            },
        },
    },
    "required": ["experiments"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


def load_config(path: str) -> dict:
    text = Path(path).read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: at {loc}: {exc.message}") from exc
    names = [e["name"] for e in cfg["experiments"]]
    if len(set(names)) != len(names):
        raise ConfigError(f"{path}: duplicate experiment names")
    deps = {e["name"]: e.get("depends_on", []) for e in cfg["experiments"]}
    for name, ds in deps.items():
        for dep in ds:
            if dep not in deps:
                raise ConfigError(f"{path}: experiment {name!r} depends on "
                                  f"unknown {dep!r}")
    try:
        tuple(graphlib.TopologicalSorter(deps).static_order())
    except graphlib.CycleError as exc:
        raise ConfigError(f"{path}: dependency cycle: {exc.args[1]}") from exc
    return cfg


def _experiment_seed(global_seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{global_seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:4], "little")


def _flow_cache_path(out_dir: Path, name: str, n: int) -> Path:
    return out_dir / "cache" / f"flow_{name}_{n}.bin"


def _run_solve(exp: dict, cfg: dict, out_dir: Path) -> dict:
    name = exp["flow"]
    n = exp.get("n", 256)
    path = _flow_cache_path(out_dir, name, n)
    if path.exists():
        header, _ = tensor_io.load_arrays_binary(path)
        if header.get("flow") == name and header.get("n") == n:
            return {"name": exp["name"], "group": "solve", "passed": True,
                    "data": {"flow": name, "n": n, "cached": True}}
    flow = corpus.corpus_flow(name, n)
    path.parent.mkdir(parents=True, exist_ok=True)
    f = flow.functionals
    arrays = {"t": f.t, "M": f.M, "E": f.E, "I": f.I, "pi": f.pi,
              "extra": f.extra, "p_int": f.p_int,
              "rho0": flow.rho[0], "rho_end": flow.rho[-1]}
    tensor_io.save_arrays_binary(path, {"kind": "flow_summary", "flow": name,
                                        "n": n, "gamma": flow.gamma}, arrays)
    return {"name": exp["name"], "group": "solve", "passed": True,
            "data": {"flow": name, "n": n, "cached": False,
                     "mass": float(f.M[0]), "energy": float(f.E[0])}}


def _run_transform(exp: dict, cfg: dict, out_dir: Path) -> dict:
    from .projective import push_forward
    from .tensor_field import discrete_divergence, measure_norm
    name = exp.get("tensor", "cofactor")
    n = exp.get("n", 64)
    alphas = exp.get("alphas", [0.5, 1.0])
    S = corpus.corpus_tensor(name, n)
    norms = {}
    for alpha in alphas:
        Sb = push_forward(S, ProjectiveMap(alpha))
        norms[f"alpha_{alpha:g}"] = measure_norm(discrete_divergence(Sb), Sb.grid)
        dump = out_dir / f"{exp['name']}_alpha{alpha:g}.csv"
        tensor_io.save_field_csv(dump, Sb, rank_tag=f"pushforward:{name}")
    return {"name": exp["name"], "group": "transform", "passed": True,
            "data": {"tensor": name, "divergence_l1": norms}}


def _run_verify(exp: dict, cfg: dict, out_dir: Path) -> dict:
    ctx = checks.CheckContext(
        seed=_experiment_seed(cfg.get("seed", 0), exp["name"]),
        profile=cfg.get("profile", "quick"),
        budget=cfg.get("budgets", {}).get("c_d", 10.0),
    )
    results = checks.run_checks(exp.get("checks", ["paper-suite"]), ctx)
    return {"name": exp["name"], "group": "verify",
            "passed": all(r.passed for r in results),
            "data": {"n_checks": len(results),
                     "failed": [r.name for r in results if not r.passed]},
            "subrecords": [r.to_dict() for r in results]}


def _run_sweep(exp: dict, cfg: dict, out_dir: Path) -> dict:
    # rerun one check while varying the context budget or profile knobs
    ctx = checks.CheckContext(
        seed=_experiment_seed(cfg.get("seed", 0), exp["name"]),
        profile=cfg.get("profile", "quick"),
    )
    values = exp.get("values", [])
    parameter = exp.get("parameter", "budget")
    sub = []
    for v in values:
        if parameter == "budget":
            ctx.budget = float(v)
        result = checks.run_checks([exp["check"]], ctx)[0]
        sub.append({"value": v, "passed": result.passed, "data": result.to_dict()["data"]})
    return {"name": exp["name"], "group": "sweep",
            "passed": all(s["passed"] for s in sub),
            "data": {"check": exp.get("check"), "parameter": parameter,
                     "count": len(values)},
            "subrecords": sub}


_RUNNERS = {"solve": _run_solve, "transform": _run_transform,
            "verify": _run_verify, "sweep": _run_sweep}


def _run_experiment(args):
    exp, cfg, out_dir = args
    try:
        return _RUNNERS[exp["kind"]](exp, cfg, Path(out_dir))
    except Exception as exc:  # recorded as a failure, not a crash
        return {"name": exp["name"], "group": exp["kind"], "passed": False,
                "data": {"error": f"{type(exc).__name__}: {exc}"}}


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg["seed"] = args.seed
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    experiments = cfg["experiments"]
    if args.only:
        keep = set(args.only)
        experiments = [e for e in experiments if e["name"] in keep]
        if not experiments:
            # --only may also name an individual check: wrap it
            known = set(checks.check_names())
            wanted = sorted(keep & known)
            if not wanted:
                print(f"--only matched no experiments or checks", file=sys.stderr)
                return 2
            experiments = [{"name": f"only-{c}", "kind": "verify", "checks": [c]}
                           for c in wanted]

    deps = {e["name"]: [d for d in e.get("depends_on", [])
                        if any(x["name"] == d for x in experiments)]
            for e in experiments}
    by_name = {e["name"]: e for e in experiments}
    sorter = graphlib.TopologicalSorter(deps)
    sorter.prepare()
    records = []
    while sorter.is_active():
        ready = list(sorter.get_ready())
        batch = [(by_name[nm], cfg, str(out_dir)) for nm in ready]
        if args.workers > 1 and len(batch) > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                outs = list(pool.map(_run_experiment, batch))
        else:
            outs = [_run_experiment(b) for b in batch]
        for nm, rec in zip(ready, outs):
            records.append(rec)
            sorter.done(nm)

    records.sort(key=lambda r: r["name"])
    flat = []
    for rec in records:
        flat.append({k: v for k, v in rec.items() if k != "subrecords"})
        flat.extend(rec.get("subrecords", []))
    provenance = {"config_sha256": hashlib.sha256(
        json.dumps(cfg, sort_keys=True).encode()).hexdigest(),
        "seed": cfg.get("seed", 0), "profile": cfg.get("profile", "quick")}
    reporting.write_json_report(out_dir / "report.json", flat, provenance)
    reporting.write_csv_summary(out_dir / "summary.csv", flat)

    failed = [r["name"] for r in records if not r["passed"]]
    for rec in records:
        mark = "PASS" if rec["passed"] else "FAIL"
        print(f"[{mark}] {rec['name']}")
    if failed:
        print(f"{len(failed)} experiment(s) failed: {', '.join(failed)}",
              file=sys.stderr)
        return 1
    return 0


def cmd_list(args) -> int:
    user = {}
    if args.config:
        try:
            user = load_config(args.config).get("catalog", {})
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    entries = catalog.list_entries(user)
    entries["checks"] = checks.check_names()
    entries["corpus_tensors"] = list(corpus.TENSOR_NAMES)
    entries["corpus_flows"] = list(corpus.FLOW_NAMES)
    if args.json:
        entries["config_schema"] = CONFIG_SCHEMA
        print(json.dumps(entries, sort_keys=True, indent=1))
        return 0
    for section, items in entries.items():
        print(f"{section}:")
        if isinstance(items, dict):
            for name, params in sorted(items.items()):
                suffix = f"  ({', '.join(params)})" if params else ""
                print(f"  {name}{suffix}")
        else:
            for name in items:
                print(f"  {name}")
    return 0


def cmd_dump(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.what == "tensor":
        S = corpus.corpus_tensor(args.name, args.n)
        if args.format == "csv":
            tensor_io.save_field_csv(out, S, rank_tag=f"corpus:{args.name}")
        else:
            tensor_io.save_field_binary(out, S, rank_tag=f"corpus:{args.name}")
    elif args.what == "flow":
        flow = corpus.corpus_flow(args.name, args.n)
        f = flow.functionals
        tensor_io.save_arrays_binary(out, {"kind": "flow_summary",
                                           "flow": args.name, "n": args.n,
                                           "gamma": flow.gamma},
                                     {"t": f.t, "M": f.M, "E": f.E, "I": f.I,
                                      "pi": f.pi, "extra": f.extra,
                                      "p_int": f.p_int})
    elif args.what == "ode":
        res = ode_invariance_check(
            ("calogero_moser", 1.0) if args.name == "calogero-moser" else args.name,
            ([1.0, 0.0], [0.0, 1.0]), ProjectiveMap(args.alpha), 2.0)
        dim = res["transformed"].shape[1]
        with open(out, "w") as fh:
            fh.write("t,s," + ",".join(f"y{i}" for i in range(dim))
                     + ",deviation\n")
            for t, s, y, dv in zip(res["t"], res["s"], res["transformed"],
                                   res["deviation"]):
                fh.write(",".join(repr(float(v)) for v in (t, s, *y, dv)) + "\n")
    else:
        print(f"unknown dump target {args.what!r}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divfree",
                                description="Projective tensor toolkit runner")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a campaign config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default="out")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--only", action="append", default=None,
                     help="restrict to named experiments or checks")
    run.set_defaults(func=cmd_run)

    lst = sub.add_parser("list", help="list catalog entries and checks")
    lst.add_argument("--json", action="store_true")
    lst.add_argument("--config", default=None,
                     help="merge user catalog entries from a config")
    lst.set_defaults(func=cmd_list)

    dump = sub.add_parser("dump", help="write corpus artifacts")
    dump.add_argument("what", choices=["tensor", "flow", "ode"])
    dump.add_argument("name")
    dump.add_argument("--n", type=int, default=64)
    dump.add_argument("--alpha", type=float, default=1.0)
    dump.add_argument("--format", choices=["csv", "binary"], default="csv")
    dump.add_argument("--out", required=True)
    dump.set_defaults(func=cmd_dump)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
