"""Benchmark sweep runner and its CSV / JSON-lines report formats.

Counters are the contract (deterministic per config); wall times are
advisory, taken as the median of K repeats after one excluded warm-up run
on a monotonic clock. Every sweep always contains the p=0 baseline row per
(n, m) so speedups can be computed downstream.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Sequence

from .errors import InvalidSpec
from .fps_core import fps
from .fps_prune import FillMode, PruneConfig, fps_prune
from .io import GeneratorKind, GeneratorSpec, generate
from .metrics import coverage_radius

CSV_HEADER = ("method,n,m,p,seed,fill,wall_time_ns,distance_evals,"
              "iterations,cache_bytes,coverage_radius")

_FIELDS = CSV_HEADER.split(",")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    n: int
    m: int
    p: float
    seed: int
    fill: str
    wall_time_ns: int
    distance_evals: int
    iterations: int
    cache_bytes: int
    coverage_radius: float

    def to_csv_row(self) -> str:
        d = asdict(self)
        return ",".join(_format_csv(d[k]) for k in _FIELDS)

    def to_json(self) -> str:
        d = asdict(self)
        return json.dumps({k: d[k] for k in _FIELDS})


def _format_csv(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _timed(fn, repeat: int):
    """One warm-up call, then the median of `repeat` timed calls.

    Returns (result, median_ns); the result is taken from the last call
    (all calls are deterministic and identical)."""
    fn()
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        result = fn()
        times.append(time.perf_counter_ns() - t0)
    return result, int(statistics.median(times))


def run_bench(n_list: Sequence[int], m_ratio: float, p_list: Sequence[float],
              methods: Sequence[str], repeat: int = 3, *,
              kind: GeneratorKind = GeneratorKind.UNIFORM_CUBE,
              rng_seed: int = 0, seed_index: int = 0,
              fill_mode: FillMode = FillMode.DETERMINISTIC_SLICE,
              threads: int = 1) -> list[BenchRecord]:
    if not n_list or not methods:
        raise InvalidSpec("n-list and methods must be nonempty")
    if not 0.0 < m_ratio <= 1.0:
        raise InvalidSpec(f"m-ratio must be in (0, 1]; got {m_ratio}")
    if repeat < 1:
        raise InvalidSpec(f"repeat must be >= 1; got {repeat}")
    bad = set(methods) - {"fps", "flashfps"}
    if bad:
        raise InvalidSpec(f"unknown methods: {sorted(bad)}")
    if "flashfps" in methods and not p_list:
        raise InvalidSpec("flashfps sweep requires a nonempty p-list")

    records = []
    for n in n_list:
        cloud = generate(GeneratorSpec(kind=kind, n=int(n), rng_seed=rng_seed))
        m = max(1, math.floor(n * m_ratio))

        # Baseline row is always present, whether or not fps was requested.
        (sample, stats), ns = _timed(
            lambda: fps(cloud, m, seed_index, threads=threads), repeat)
        records.append(BenchRecord(
            method="fps", n=int(n), m=m, p=0.0, seed=seed_index,
            fill=fill_mode.value, wall_time_ns=ns,
            distance_evals=stats.distance_evals, iterations=stats.iterations,
            cache_bytes=stats.cache_bytes,
            coverage_radius=coverage_radius(sample, cloud)))

        if "flashfps" in methods:
            for p in p_list:
                cfg = PruneConfig(p=float(p), fill_mode=fill_mode,
                                  rng_seed=rng_seed)
                (sample, stats), ns = _timed(
                    lambda: fps_prune(cloud, m, cfg, seed_index,
                                      threads=threads), repeat)
                records.append(BenchRecord(
                    method="flashfps", n=int(n), m=m, p=float(p),
                    seed=seed_index, fill=fill_mode.value, wall_time_ns=ns,
                    distance_evals=stats.distance_evals,
                    iterations=stats.iterations, cache_bytes=stats.cache_bytes,
                    coverage_radius=coverage_radius(sample, cloud)))
    return records


def render_csv(records: Sequence[BenchRecord]) -> str:
    return "\n".join([CSV_HEADER] + [r.to_csv_row() for r in records]) + "\n"


def render_json_lines(records: Sequence[BenchRecord]) -> str:
    return "\n".join(r.to_json() for r in records) + "\n"
