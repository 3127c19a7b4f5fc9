"""Command-line harness: sampling runs, hierarchical pipelines, property
verification suites, and benchmark sweeps.

Stats go to standard output as JSON lines (one object per run, echoing every
seed and flag needed to reproduce it); files are written only when asked via
explicit flags. Domain and usage errors exit 2 with a structured message on
stderr; verification failures exit 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import FlashFpsError
from .fps_core import fps
from .fps_prune import FillMode, PruneConfig, fps_prune
from .fps_cache import LayerBudgets, hierarchical_sample_detailed
from .geometry import PointCloud
from .io import (parse_generator_spec, generate, read_indices, read_ply_ascii,
                 read_xyz, write_indices, write_xyz)
from .metrics import coverage_radius
from .bench import render_csv, render_json_lines, run_bench
from .io import GeneratorKind
from .verify import run_suites

_FILL = {"slice": FillMode.DETERMINISTIC_SLICE, "random": FillMode.SEEDED_RANDOM}


def _add_input_flags(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", metavar="PATH",
                   help="read a cloud from an .xyz/.ply file")
    g.add_argument("--generate", metavar="SPEC",
                   help="synthesize a cloud, e.g. uniform:n=10000,seed=3")


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0,
                   help="seed point index (default 0)")
    p.add_argument("--fill", choices=sorted(_FILL), default="slice",
                   help="budget fill mode for pruned runs (default slice)")
    p.add_argument("--rng-seed", type=int, default=0,
                   help="RNG seed for generators and random fill (default 0)")
    p.add_argument("--threads", type=int, default=None,
                   help="kernel threads; default $FLASHFPS_THREADS or all cores. "
                        "Never changes output bytes, only wall time")


def _resolve_threads(value) -> int:
    if value is not None:
        return max(1, int(value))
    env = os.environ.get("FLASHFPS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _load_cloud(args) -> tuple[PointCloud, dict]:
    if args.input is not None:
        path = args.input
        cloud = read_ply_ascii(path) if path.endswith(".ply") else read_xyz(path)
        return cloud, {"input": path}
    spec = parse_generator_spec(args.generate)
    return generate(spec), {"generate": args.generate}


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _write_sample_outputs(args, cloud, sample) -> dict:
    out = {}
    if getattr(args, "out_indices", None):
        write_indices(sample, args.out_indices)
        out["out_indices"] = args.out_indices
    if getattr(args, "out_points", None):
        extras = None
        if cloud.extras is not None:
            extras = tuple(cloud.extras[i] for i in sample.indices)
        write_xyz(PointCloud(cloud.points[sample.indices], extras=extras),
                  args.out_points)
        out["out_points"] = args.out_points
    return out


def cmd_sample(args) -> int:
    threads = _resolve_threads(args.threads)
    cloud, source = _load_cloud(args)
    if args.method == "fps" and args.prune_ratio != 0.0:
        raise FlashFpsError("--prune-ratio requires --method flashfps")
    t0 = time.perf_counter_ns()
    if args.method == "fps":
        sample, stats = fps(cloud, args.m, args.seed, threads=threads)
    else:
        cfg = PruneConfig(p=args.prune_ratio, fill_mode=_FILL[args.fill],
                          rng_seed=args.rng_seed)
        sample, stats = fps_prune(cloud, args.m, cfg, args.seed,
                                  threads=threads)
    wall = time.perf_counter_ns() - t0
    record = {
        "command": "sample", "method": args.method, **source,
        "n": cloud.n, "m": args.m, "p": args.prune_ratio, "seed": args.seed,
        "fill": args.fill, "rng_seed": args.rng_seed, "threads": threads,
        "wall_time_ns": wall, "distance_evals": stats.distance_evals,
        "iterations": stats.iterations, "candidates": stats.candidates,
        "cache_bytes": stats.cache_bytes,
        "fill_boundary": sample.fill_boundary,
        **_write_sample_outputs(args, cloud, sample),
    }
    _emit(record)
    return 0


def cmd_hier(args) -> int:
    threads = _resolve_threads(args.threads)
    cloud, source = _load_cloud(args)
    budgets = LayerBudgets(tuple(_parse_int_list(args.budgets, "--budgets")))
    cfg = PruneConfig(p=args.prune_ratio, fill_mode=_FILL[args.fill],
                      rng_seed=args.rng_seed)
    t0 = time.perf_counter_ns()
    samples, total, per_layer = hierarchical_sample_detailed(
        cloud, budgets, cfg, args.seed, cache_enabled=(args.cache == "on"),
        threads=threads)
    wall = time.perf_counter_ns() - t0
    layers = []
    for i, (sample, stats) in enumerate(zip(samples, per_layer), start=1):
        entry = {
            "layer": i, "m": len(sample),
            "distance_evals": stats.distance_evals,
            "iterations": stats.iterations, "candidates": stats.candidates,
            "cache_bytes": stats.cache_bytes,
            "fill_boundary": sample.fill_boundary,
        }
        if args.out_indices:
            path = f"{args.out_indices}_L{i}.txt"
            write_indices(sample, path)
            entry["out_indices"] = path
        layers.append(entry)
    _emit({
        "command": "hier", **source, "n": cloud.n,
        "budgets": list(budgets.budgets), "cache": args.cache,
        "p": args.prune_ratio, "seed": args.seed, "fill": args.fill,
        "rng_seed": args.rng_seed, "threads": threads, "wall_time_ns": wall,
        "distance_evals": total.distance_evals, "iterations": total.iterations,
        "candidates": total.candidates, "cache_bytes": total.cache_bytes,
        "layers": layers,
    })
    return 0


def cmd_verify(args) -> int:
    threads = _resolve_threads(args.threads)
    results = run_suites(args.suite, args.trials, args.max_n, args.rng_seed,
                         threads=threads)
    ok = all(r.ok for r in results)
    _emit({
        "command": "verify", "suite": args.suite, "trials": args.trials,
        "max_n": args.max_n, "rng_seed": args.rng_seed, "threads": threads,
        "ok": ok,
        "suites": [{
            "name": r.name, "trials": r.trials, "passed": r.passed,
            "first_counterexample": r.failures[0] if r.failures else None,
        } for r in results],
    })
    return 0 if ok else 1


def cmd_bench(args) -> int:
    threads = _resolve_threads(args.threads)
    records = run_bench(
        n_list=_parse_int_list(args.n_list, "--n-list"),
        m_ratio=args.m_ratio,
        p_list=_parse_float_list(args.p_list, "--p-list"),
        methods=[s.strip() for s in args.methods.split(",") if s.strip()],
        repeat=args.repeat,
        kind=GeneratorKind(args.kind),
        rng_seed=args.rng_seed,
        seed_index=args.seed,
        fill_mode=_FILL[args.fill],
        threads=threads,
    )
    text = render_csv(records) if args.format == "csv" else render_json_lines(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit({"command": "bench", "rows": len(records), "format": args.format,
               "out": args.out, "threads": threads, "rng_seed": args.rng_seed,
               "seed": args.seed, "fill": args.fill})
    else:
        sys.stdout.write(text)
    return 0


def cmd_coverage(args) -> int:
    cloud, source = _load_cloud(args)
    indices = read_indices(args.indices)
    bad = indices[(indices < 0) | (indices >= cloud.n)]
    if bad.size:
        raise FlashFpsError(f"index {int(bad[0])} out of range for n={cloud.n}")
    radius = coverage_radius(indices, cloud)
    _emit({"command": "coverage", **source, "n": cloud.n,
           "m": int(indices.shape[0]), "indices": args.indices,
           "coverage_radius": radius})
    return 0


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise FlashFpsError(f"{flag} expects comma-separated integers; got {text!r}") from None
    if not values:
        raise FlashFpsError(f"{flag} must be nonempty")
    return values


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise FlashFpsError(f"{flag} expects comma-separated numbers; got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flashfps",
        description="Farthest point sampling, pruned sampling, hierarchical "
                    "prefix reuse, verification suites, and benchmarks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample one cloud and write indices/points")
    _add_input_flags(p)
    p.add_argument("--method", choices=("fps", "flashfps"), default="fps")
    p.add_argument("--m", type=int, required=True, help="sample size")
    p.add_argument("--prune-ratio", type=float, default=0.0,
                   help="pruning ratio p in [0,1) for flashfps (default 0)")
    _add_common_flags(p)
    p.add_argument("--out-indices", metavar="PATH")
    p.add_argument("--out-points", metavar="PATH")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("hier", help="hierarchical multi-layer sampling")
    _add_input_flags(p)
    p.add_argument("--budgets", required=True,
                   help="comma-separated non-increasing layer sizes, e.g. 8,4,2")
    p.add_argument("--cache", choices=("on", "off"), default="on",
                   help="reuse layer-1 prefixes (on) or re-run each layer (off)")
    p.add_argument("--prune-ratio", type=float, default=0.0,
                   help="pruning ratio p for layer 1 (default 0)")
    _add_common_flags(p)
    p.add_argument("--out-indices", metavar="PREFIX",
                   help="write one indices file per layer: PREFIX_L<i>.txt")
    p.set_defaults(fn=cmd_hier)

    p = sub.add_parser("verify", help="run randomized property suites")
    p.add_argument("--suite", choices=("prefix", "oracle", "counters", "all"),
                   default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=None,
                   help="cloud-size cap (defaults: prefix 4096, oracle 1024, "
                        "counters uses it as N, default 100000)")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="benchmark sweep with CSV/JSON report")
    p.add_argument("--n-list", required=True, help="comma-separated cloud sizes")
    p.add_argument("--m-ratio", type=float, default=0.25)
    p.add_argument("--p-list", default="0.25,0.5,0.75")
    p.add_argument("--methods", default="fps,flashfps")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--kind", choices=[k.value for k in GeneratorKind],
                   default="uniform", help="generator for the sweep clouds")
    _add_common_flags(p)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("coverage", help="covering radius of an index file "
                                        "against its cloud")
    _add_input_flags(p)
    p.add_argument("--indices", required=True, metavar="PATH")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=cmd_coverage)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FlashFpsError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__,
                                     "message": str(exc)}) + "\n")
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError",
                                     "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
