"""Dual pruning on top of the farthest-first kernel.

Candidate pruning restricts the kernel to a deterministic slice of the
input (the first floor((1-p)N) indices); iteration pruning truncates the
greedy loop to floor((1-p)m) steps; the remaining budget is filled from the
unselected points, either by an ascending index slice or a seeded random
draw. p=0 degenerates to standard sampling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import (BudgetOutOfRange, PruneLeavesNothing, SeedNotInCandidates,
                     SeedOutOfRange)
from .fps_core import OrderedSample, SamplerStats, run_kernel
from .geometry import PointCloud


class FillMode(enum.Enum):
    DETERMINISTIC_SLICE = "slice"
    SEEDED_RANDOM = "random"


@dataclass(frozen=True)
class PruneConfig:
    """Pruning ratio and fill policy.

    p must lie in [0, 1); rng_seed is consulted only in SEEDED_RANDOM mode.
    """

    p: float = 0.0
    fill_mode: FillMode = FillMode.DETERMINISTIC_SLICE
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"pruning ratio must be in [0, 1); got {self.p}")

    def kernel_budget(self, m1: int) -> int:
        """Iterations the greedy loop actually runs; never below 1."""
        return max(1, math.floor((1.0 - self.p) * m1))

    def candidate_count(self, n: int, m1: int) -> int:
        """Points admitted to the kernel; never below the kernel budget."""
        return max(self.kernel_budget(m1), math.floor((1.0 - self.p) * n))


def candidate_prune(cloud: PointCloud, p: float, min_count: int = 1) -> NDArray[np.int64]:
    """Candidate set for pruning ratio p: the first floor((1-p)N) indices.

    The slice is clamped up to ``min_count`` (callers pass the kernel budget
    so the loop always has enough candidates).
    """
    if not 0.0 <= p < 1.0:
        raise ValueError(f"pruning ratio must be in [0, 1); got {p}")
    c = max(int(min_count), math.floor((1.0 - p) * cloud.n))
    if c < 1:
        raise PruneLeavesNothing("candidate pruning left no candidates")
    return np.arange(min(c, cloud.n), dtype=np.int64)


def fps_prune(cloud: PointCloud, m1: int, cfg: PruneConfig,
              seed_index: int = 0, *, threads: int = 1
              ) -> tuple[OrderedSample, SamplerStats]:
    """Sample m1 points: a truncated farthest-first run over the pruned
    candidate set, then budget fill from the rest of the full cloud.

    The first ``fill_boundary`` output entries are exactly the kernel's
    farthest-first order; fill entries carry selection distance 0.
    """
    n = cloud.n
    if not 1 <= m1 <= n:
        raise BudgetOutOfRange(f"m1={m1} not in [1, {n}]")
    if not 0 <= seed_index < n:
        raise SeedOutOfRange(f"seed index {seed_index} not in [0, {n})")

    k = cfg.kernel_budget(m1)
    c = int(candidate_prune(cloud, cfg.p, min_count=k).shape[0])
    if seed_index >= c:
        raise SeedNotInCandidates(
            f"seed index {seed_index} was pruned (candidate count {c}); "
            "re-index the cloud or lower p")

    # Candidates are the store prefix, so kernel-local positions are already
    # original indices.
    order, sel_d2, evals = run_kernel(cloud.points[:c], k, seed_index, threads)

    fill_n = m1 - k
    if fill_n > 0:
        remaining = np.ones(n, dtype=bool)
        remaining[order] = False
        pool = np.flatnonzero(remaining)
        if cfg.fill_mode is FillMode.DETERMINISTIC_SLICE:
            fill = pool[:fill_n]
        else:
            rng = np.random.default_rng(cfg.rng_seed)
            fill = rng.choice(pool, size=fill_n, replace=False)
        indices = np.concatenate([order, fill.astype(np.int64)])
        dists = np.concatenate([sel_d2, np.zeros(fill_n)])
    else:
        indices, dists = order, sel_d2

    sample = OrderedSample(indices, dists, fill_boundary=k)
    stats = SamplerStats(distance_evals=evals, iterations=k, candidates=c)
    return sample, stats
