"""Randomized property suites behind `flashfps verify`.

Each suite runs seeded trials against a library guarantee and reports the
first counterexample (trial seed + config) on failure, so any red result is
reproducible from the printed report alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fps_core import fps, fps_oracle
from .fps_prune import PruneConfig, fps_prune
from .fps_cache import verify_prefix_property
from .geometry import PointCloud
from .io import GeneratorKind, GeneratorSpec, generate

_FLAVORS = ("uniform", "clusters", "sphere", "uniform+dups", "clusters+dups")


@dataclass
class SuiteResult:
    name: str
    trials: int
    passed: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials and not self.failures


def _trial_cloud(flavor: str, n: int, cloud_seed: int,
                 rng: np.random.Generator) -> PointCloud:
    """Build one trial cloud; `+dups` flavors duplicate ~half the points to
    force exact distance ties."""
    base_kind = {"uniform": GeneratorKind.UNIFORM_CUBE,
                 "clusters": GeneratorKind.GAUSSIAN_CLUSTERS,
                 "sphere": GeneratorKind.SPHERE_SURFACE}[flavor.split("+")[0]]
    if flavor.endswith("+dups"):
        uniq = max(1, n // 2)
        base = generate(GeneratorSpec(kind=base_kind, n=uniq, rng_seed=cloud_seed))
        dup = base.points[rng.integers(0, uniq, size=n - uniq)]
        pts = np.vstack([base.points, dup])[rng.permutation(n)]
        return PointCloud(pts)
    return generate(GeneratorSpec(kind=base_kind, n=n, rng_seed=cloud_seed))


def run_prefix_suite(trials: int = 100, max_n: int = 4096, rng_seed: int = 0,
                     *, min_n: int = 64, threads: int = 1) -> SuiteResult:
    """Restricted re-sampling must reproduce prefixes exactly, for mixed
    generators including tie-heavy duplicated-point clouds."""
    rng = np.random.default_rng(rng_seed)
    result = SuiteResult(name="prefix", trials=trials, passed=0)
    for t in range(trials):
        flavor = _FLAVORS[t % len(_FLAVORS)]
        n = int(rng.integers(min_n, max_n + 1))
        cloud_seed = int(rng.integers(0, 2**31))
        cloud = _trial_cloud(flavor, n, cloud_seed, rng)
        seed_index = int(rng.integers(0, n))
        m1 = max(2, n // 4)
        ok = True
        for m2 in {max(1, m1 // 2), max(1, m1 // 4)}:
            res = verify_prefix_property(cloud, m1, m2, seed_index,
                                         threads=threads)
            if not res.ok:
                ok = False
                result.failures.append(
                    f"trial={t} flavor={flavor} n={n} cloud_seed={cloud_seed} "
                    f"seed_index={seed_index} m1={m1} m2={m2} "
                    f"diverged at {res.first_divergence}: expected "
                    f"{res.expected_index}, got {res.actual_index}")
        result.passed += ok
    return result


def run_oracle_suite(trials: int = 50, max_n: int = 1024, rng_seed: int = 0,
                     *, max_m: int = 256, threads: int = 1) -> SuiteResult:
    """The incremental kernel must match the brute-force oracle exactly."""
    rng = np.random.default_rng(rng_seed)
    result = SuiteResult(name="oracle", trials=trials, passed=0)
    for t in range(trials):
        flavor = _FLAVORS[t % len(_FLAVORS)]
        n = int(rng.integers(2, max_n + 1))
        m = int(rng.integers(1, min(max_m, n) + 1))
        cloud_seed = int(rng.integers(0, 2**31))
        cloud = _trial_cloud(flavor, n, cloud_seed, rng)
        seed_index = int(rng.integers(0, n))
        got, _ = fps(cloud, m, seed_index, threads=threads)
        want = fps_oracle(cloud, m, seed_index)
        if np.array_equal(got.indices, want.indices) and \
                np.array_equal(got.selection_dist2, want.selection_dist2):
            result.passed += 1
        else:
            diff = np.flatnonzero(got.indices != want.indices)
            where = int(diff[0]) if diff.size else -1
            result.failures.append(
                f"trial={t} flavor={flavor} n={n} m={m} cloud_seed={cloud_seed} "
                f"seed_index={seed_index} first divergence at {where}")
    return result


def run_counters_suite(n: int = 100_000, m_ratio: float = 0.25,
                       p_list: tuple[float, ...] = (0.25, 0.5, 0.75),
                       rng_seed: int = 0, *, tolerance: float = 0.05,
                       threads: int = 1) -> SuiteResult:
    """Measured distance-evaluation ratios must track (1-p)^2 within the
    tolerance, and each count must equal candidates*(iterations-1) exactly."""
    result = SuiteResult(name="counters", trials=len(p_list), passed=0)
    cloud = generate(GeneratorSpec(kind=GeneratorKind.UNIFORM_CUBE, n=n,
                                   rng_seed=rng_seed))
    m = max(1, math.floor(n * m_ratio))
    _, base = fps(cloud, m, 0, threads=threads)
    if base.distance_evals != base.candidates * (base.iterations - 1):
        result.failures.append(
            f"baseline counter identity broken: {base.distance_evals} != "
            f"{base.candidates}*({base.iterations}-1)")
        return result
    for p in p_list:
        _, stats = fps_prune(cloud, m, PruneConfig(p=p), 0, threads=threads)
        expected = (1.0 - p) ** 2
        measured = stats.distance_evals / base.distance_evals
        exact = stats.candidates * (stats.iterations - 1)
        if stats.distance_evals != exact:
            result.failures.append(
                f"p={p}: counter identity broken: {stats.distance_evals} != {exact}")
        elif abs(measured / expected - 1.0) > tolerance:
            result.failures.append(
                f"p={p}: measured ratio {measured:.6f} deviates from "
                f"{expected:.6f} by more than {tolerance:.0%} (n={n}, m={m})")
        else:
            result.passed += 1
    return result


def run_suites(which: str, trials: int, max_n: int | None, rng_seed: int,
               *, threads: int = 1) -> list[SuiteResult]:
    """Dispatch for the CLI. `max_n` of None means per-suite defaults
    (prefix 4096, oracle 1024, counters 100000)."""
    results = []
    if which in ("prefix", "all"):
        results.append(run_prefix_suite(trials, max_n or 4096, rng_seed,
                                        threads=threads))
    if which in ("oracle", "all"):
        results.append(run_oracle_suite(trials, max_n or 1024, rng_seed,
                                        threads=threads))
    if which in ("counters", "all"):
        results.append(run_counters_suite(max_n or 100_000, rng_seed=rng_seed,
                                          threads=threads))
    return results
