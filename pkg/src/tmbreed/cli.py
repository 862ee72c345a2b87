"""Command-line entry point.

Machine-readable result documents go to stdout, one JSON document per
invocation; human summaries go to stderr. Every command that consumes
randomness prints its effective seed inside the output document, so any run
can be replayed byte for byte afterwards.

Exit codes: 0 success, 2 validation or usage errors, 3 file I/O errors,
4 server or client errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .breeder import (
    Pool,
    SearchParams,
    generate_pool,
    load_champions,
    load_pool,
    save_pool,
    write_history_csv,
)
from .catalog import STATUS_ACTIVE, CatalogStore, InvalidStatusTransition
from .client import ClientError, GameClient, run_worker
from .intelligence import (
    RunSample,
    estimate_iq_eq,
    fit_power_law,
    sweep,
    tables_to_doc,
    write_samples_csv,
    write_tables_csv,
)
from .machine import MachineParseError, load_collection
from .orchestra import (
    breed_to_doc,
    enumerate_runs,
    load_breed,
    orchestrate,
    write_results_csv,
)
from .rand import fresh_seed

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_SERVER = 4


def _print_doc(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill options the command line left unset from the config document."""
    path = getattr(args, "config", None)
    if not path:
        return args
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("config document must be a JSON object")
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, "\0missing") is None:
            setattr(args, attr, value)
    return args


def _pick_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    seed = fresh_seed()
    _note(f"seed not given, using {seed}")
    return seed


def _load_machines(path) -> list:
    """Accept either a pool document or a plain machine collection."""
    with open(path) as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and doc.get("format", "").startswith("pool/"):
        return Pool.from_doc(doc).machines()
    from .machine import collection_from_doc

    return collection_from_doc(doc)


def cmd_run(args) -> int:
    breed = load_breed(args.breed)
    seed = _pick_seed(args)
    max_steps = args.max_steps if args.max_steps is not None else 100_000
    rr = orchestrate(breed, seed, max_steps)
    doc = rr.to_doc()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _print_doc(doc)
    dim = "none" if rr.dimension is None else f"{rr.dimension:.6f}"
    _note(f"n_steps={rr.n_steps} o2_floor={rr.o2_floor} dimension={dim} "
          f"termination={rr.termination} seed={seed}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    breed = load_breed(args.breed)
    max_steps = args.max_steps if args.max_steps is not None else 6
    outcomes = enumerate_runs(breed, max_steps)
    distinct = {r.outcome() for _, r in outcomes}
    doc = {
        "format": "enumeration/1",
        "max_steps": max_steps,
        "path_count": len(outcomes),
        "distinct_outcome_count": len(distinct),
        "outcomes": [
            {"choices": list(choices), "result": r.to_doc()}
            for choices, r in outcomes
        ],
    }
    _print_doc(doc)
    _note(f"{len(outcomes)} paths, {len(distinct)} distinct outcomes")
    return EXIT_OK


def cmd_sweep(args) -> int:
    machines = _load_machines(args.pool)
    seed = _pick_seed(args)
    max_steps = args.max_steps if args.max_steps is not None else 100_000
    size_min = args.size_min if args.size_min is not None else 2
    size_max = args.size_max if args.size_max is not None else 4
    samples, results = sweep(machines, args.runs, (size_min, size_max),
                             max_steps, seed, threads=args.threads or 1)
    if args.samples_csv:
        write_samples_csv(args.samples_csv, samples)
    if args.results_csv:
        write_results_csv(args.results_csv, results)
    doc = {
        "format": "sweep-report/1",
        "seed": seed,
        "runs": args.runs,
        "max_steps": max_steps,
        "breed_size_min": size_min,
        "breed_size_max": size_max,
        "sample_count": len(samples),
        "terminated_count": sum(1 for s in samples if s.terminated),
    }
    terminated = [s for s in samples if s.terminated]
    if terminated:
        table = estimate_iq_eq(samples)
        doc.update(tables_to_doc(table))
        if args.tables_csv:
            write_tables_csv(args.tables_csv, table)
        try:
            doc["fit"] = fit_power_law(table).to_doc()
            doc["fit_error"] = None
        except ValueError as exc:
            doc["fit"] = None
            doc["fit_error"] = str(exc)
    else:
        doc.update({"iq": {}, "eq": {}, "sample_count": len(samples),
                    "fit": None, "fit_error": "no terminated samples"})
    _print_doc(doc)
    _note(f"{len(samples)} samples, {doc['terminated_count']} terminated, "
          f"seed={seed}")
    return EXIT_OK


def cmd_pool(args) -> int:
    if args.verify:
        pool = load_pool(args.verify)
        bad = pool.verify()
        checked = sum(1 for e in pool.entries if e.tag == "random")
        doc = {
            "format": "pool-verification/1",
            "pool_file": args.verify,
            "budget_used": pool.budget_used,
            "checked": checked,
            "failures": bad,
            "ok": not bad,
        }
        _print_doc(doc)
        _note(f"{checked} random machines checked, {len(bad)} failures")
        return EXIT_OK if not bad else EXIT_VALIDATION
    if not args.out:
        raise ValueError("pool generation needs --out (or use --verify)")
    seed = _pick_seed(args)
    n_states = args.n_states if args.n_states is not None else 2
    count = args.count if args.count is not None else 500
    budget = args.budget if args.budget is not None else 1000
    curated = []
    if args.champions:
        curated.extend(load_champions())
    if args.curated:
        curated.extend(load_collection(args.curated))
    pool = generate_pool(n_states, count, budget, seed, curated)
    save_pool(args.out, pool)
    doc = {
        "format": "pool-report/1",
        "out": args.out,
        "n_states": n_states,
        "random_count": count,
        "curated_count": len(curated),
        "budget": budget,
        "seed": seed,
    }
    _print_doc(doc)
    _note(f"pool of {len(pool.entries)} machines written to {args.out}")
    return EXIT_OK


def _params_from_args(args, seed: int) -> SearchParams:
    params = SearchParams(master_seed=seed)
    for attr, flag in (
        ("population_size", "population"),
        ("generations", "generations"),
        ("runs_per_fitness", "runs_per_fitness"),
        ("breed_size_min", "size_min"),
        ("breed_size_max", "size_max"),
        ("mutation_add", "mut_add"),
        ("mutation_drop", "mut_drop"),
        ("mutation_replace", "mut_replace"),
        ("elite_fraction", "elite_fraction"),
        ("run_budget", "budget"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(params, attr, value)
    params.validate()
    return params


def cmd_search(args) -> int:
    pool = load_pool(args.pool)
    seed = _pick_seed(args)
    params = _params_from_args(args, seed)
    from .breeder import evolve

    report = evolve(pool, params)
    if args.history_csv:
        write_history_csv(args.history_csv, report.history)
    doc = {
        "format": "search-report/1",
        "seed": seed,
        "params": params.to_doc(),
        "best_fitness": report.best_fitness,
        "best_breed": breed_to_doc(report.best_breed),
        "best_run": None if report.best_run is None
        else report.best_run.to_doc(),
        "flagged_infinite_count": len(report.flagged_infinite),
        "history": [[b, m] for b, m in report.history],
    }
    _print_doc(doc)
    best = "none" if report.best_fitness is None \
        else f"{report.best_fitness:.6f}"
    _note(f"best fitness {best} after {params.generations} generations, "
          f"seed={seed}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import create_app

    store = CatalogStore(args.catalog)
    pool = load_pool(args.pool) if args.pool else None
    seed = _pick_seed(args)
    params = _params_from_args(args, seed)
    token = args.curator_token or os.environ.get("TMBREED_CURATOR_TOKEN", "")
    app = create_app(store, pool=pool, params=params, curator_token=token,
                     master_seed=seed)
    host = args.host or "127.0.0.1"
    port = args.port if args.port is not None else 8700
    _note(f"serving catalog {args.catalog} on {host}:{port}")
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


def cmd_worker(args) -> int:
    client = GameClient(args.server)
    location = None
    if args.lat is not None and args.lon is not None:
        location = (args.lat, args.lon)
    overrides = {}
    if args.generations is not None:
        overrides["generations"] = args.generations
    if args.population is not None:
        overrides["population_size"] = args.population
    if args.budget is not None:
        overrides["run_budget"] = args.budget
    out = run_worker(client, args.observer, location=location,
                     max_flagged=args.max_flagged or 5,
                     param_overrides=overrides or None)
    doc = {"format": "worker-report/1", **out}
    _print_doc(doc)
    _note(f"task {out['task_id']}: {len(out['accepted'])} accepted, "
          f"{len(out['rejected'])} rejected")
    return EXIT_OK


def cmd_export(args) -> int:
    store = CatalogStore(args.catalog)
    os.makedirs(args.out_dir, exist_ok=True)
    specs = store.list(include_deleted=args.include_deleted, sort="found_at",
                       descending=False)
    import csv as _csv

    files = []
    spec_path = os.path.join(args.out_dir, "specimens.csv")
    with open(spec_path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(("id", "fancy_name", "dimension", "n_steps",
                         "o2_mean", "o2_floor", "observer", "status",
                         "found_at", "seed"))
        for s in specs:
            writer.writerow((
                s.id, s.fancy_name,
                "" if s.dimension is None else repr(s.dimension),
                s.n_steps, s.o2_mean, s.o2_floor, s.observer, s.status,
                s.found_at, s.seed,
            ))
    files.append(spec_path)
    active = store.list(status=STATUS_ACTIVE)
    samples = [RunSample(s.o2_floor, s.n_steps, True) for s in active
               if s.n_steps >= 1]
    fit_doc = None
    if samples:
        table = estimate_iq_eq(samples)
        tables_path = os.path.join(args.out_dir, "iq_eq.csv")
        write_tables_csv(tables_path, table)
        files.append(tables_path)
        try:
            fit_doc = fit_power_law(table).to_doc()
        except ValueError:
            fit_doc = None
    fit_path = os.path.join(args.out_dir, "fit.json")
    with open(fit_path, "w") as fh:
        json.dump(fit_doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(fit_path)
    doc = {
        "format": "export-report/1",
        "catalog": args.catalog,
        "specimen_count": len(specs),
        "files": files,
    }
    _print_doc(doc)
    _note(f"exported {len(specs)} specimens to {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmbreed",
        description="Orchestrate Turing machine breeds, estimate IQ/EQ "
                    "tables, evolve deep breeds, and curate the specimen "
                    "catalog.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config supplying unset options")
        p.add_argument("--seed", type=int, help="master seed (default: fresh)")

    p = sub.add_parser("run", help="orchestrate one breed")
    common(p)
    p.add_argument("--breed", required=True, help="breed document path")
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument("--out", help="also write the run document here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("enumerate", help="exhaust all selection sequences")
    common(p)
    p.add_argument("--breed", required=True)
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sweep", help="random-breed sampling, IQ/EQ and fit")
    common(p)
    p.add_argument("--pool", required=True,
                   help="pool or machine collection document")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--size-min", type=int, dest="size_min")
    p.add_argument("--size-max", type=int, dest="size_max")
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument("--threads", type=int)
    p.add_argument("--samples-csv", dest="samples_csv")
    p.add_argument("--results-csv", dest="results_csv")
    p.add_argument("--tables-csv", dest="tables_csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pool", help="generate or verify a machine pool")
    common(p)
    p.add_argument("--n-states", type=int, dest="n_states")
    p.add_argument("--count", type=int, help="random machines to collect")
    p.add_argument("--budget", type=int, help="solo halting budget")
    p.add_argument("--champions", action="store_true",
                   help="append the shipped champion machines")
    p.add_argument("--curated", help="machine collection to append")
    p.add_argument("--out", help="pool document to write")
    p.add_argument("--verify", help="re-verify an existing pool file")
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("search", help="evolve breeds maximizing dimension")
    common(p)
    p.add_argument("--pool", required=True)
    p.add_argument("--population", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--runs-per-fitness", type=int, dest="runs_per_fitness")
    p.add_argument("--size-min", type=int, dest="size_min")
    p.add_argument("--size-max", type=int, dest="size_max")
    p.add_argument("--mut-add", type=float, dest="mut_add")
    p.add_argument("--mut-drop", type=float, dest="mut_drop")
    p.add_argument("--mut-replace", type=float, dest="mut_replace")
    p.add_argument("--elite-fraction", type=float, dest="elite_fraction")
    p.add_argument("--budget", type=int, help="orchestration step budget")
    p.add_argument("--history-csv", dest="history_csv")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("serve", help="start the catalog service")
    common(p)
    p.add_argument("--catalog", required=True, help="catalog root directory")
    p.add_argument("--pool", help="pool document served to workers")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--curator-token", dest="curator_token")
    p.add_argument("--population", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--runs-per-fitness", type=int, dest="runs_per_fitness")
    p.add_argument("--size-min", type=int, dest="size_min")
    p.add_argument("--size-max", type=int, dest="size_max")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("worker", help="fetch a task, search, submit results")
    common(p)
    p.add_argument("--server", required=True, help="service base URL")
    p.add_argument("--observer", required=True)
    p.add_argument("--lat", type=float)
    p.add_argument("--lon", type=float)
    p.add_argument("--max-flagged", type=int, dest="max_flagged")
    p.add_argument("--generations", type=int)
    p.add_argument("--population", type=int)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_worker)

    p = sub.add_parser("export", help="catalog to comma-separated files")
    common(p)
    p.add_argument("--catalog", required=True)
    p.add_argument("--out-dir", required=True, dest="out_dir")
    p.add_argument("--include-deleted", action="store_true",
                   dest="include_deleted")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    import requests

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return args.func(args)
    except (ClientError, requests.RequestException) as exc:
        _note(f"server error: {exc}")
        return EXIT_SERVER
    except (MachineParseError, InvalidStatusTransition) as exc:
        _note(f"error: {exc}")
        return EXIT_VALIDATION
    except (ValueError, KeyError, RuntimeError) as exc:
        _note(f"error: {exc}")
        return EXIT_VALIDATION
    except OSError as exc:
        _note(f"i/o error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
