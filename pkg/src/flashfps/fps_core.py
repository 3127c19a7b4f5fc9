"""Incremental farthest-first sampling kernel and its brute-force oracle.

The kernel keeps one O(N) running min-distance array and selects, each
iteration, the point maximizing that array (ties -> lowest index). The
oracle recomputes every point's distance to the whole selected prefix from
scratch each iteration; it exists solely to check the kernel and shares
nothing with it but the elementary distance arithmetic.

Both paths use the same accumulation order ((dx²+dy²)+dz²) so their
selection values are bit-identical, which makes equivalence checks exact
even on tie-heavy inputs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import BudgetOutOfRange, SeedOutOfRange
from .geometry import PointCloud

# Cache-friendly span for the fused update+argmax sweep.
_BLOCK = 65536


@dataclass(frozen=True)
class OrderedSample:
    """An ordered sampling result over original cloud indices.

    ``selection_dist2[k]`` is the squared min-distance of the k-th selected
    point to the points before it (+inf sentinel for the seed). Entries at
    positions >= ``fill_boundary`` were not chosen farthest-first (budget
    fill); their selection distance is recorded as 0.
    """

    indices: NDArray[np.int64]
    selection_dist2: NDArray[np.float64]
    fill_boundary: int

    def __post_init__(self):
        idx = np.ascontiguousarray(np.asarray(self.indices, dtype=np.int64))
        d2 = np.ascontiguousarray(np.asarray(self.selection_dist2, dtype=np.float64))
        if idx.ndim != 1 or d2.shape != idx.shape:
            raise ValueError("indices and selection_dist2 must be 1-D and equal length")
        if not 0 <= self.fill_boundary <= idx.shape[0]:
            raise ValueError("fill_boundary out of range")
        idx.flags.writeable = False
        d2.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "selection_dist2", d2)

    def __len__(self) -> int:
        return int(self.indices.shape[0])


@dataclass
class SamplerStats:
    """Work counters charged to a kernel run.

    For the incremental kernel, distance_evals == candidates * (iterations - 1):
    every iteration after the seed updates each candidate against exactly one
    new point.
    """

    distance_evals: int = 0
    iterations: int = 0
    candidates: int = 0
    cache_bytes: int = 0


def _dist2_sweep(xs, ys, zs, px, py, pz, out, scratch):
    """out <- ((xs-px)² + (ys-py)²) + (zs-pz)², written in place."""
    np.subtract(xs, px, out=out)
    np.multiply(out, out, out=out)
    np.subtract(ys, py, out=scratch)
    np.multiply(scratch, scratch, out=scratch)
    np.add(out, scratch, out=out)
    np.subtract(zs, pz, out=scratch)
    np.multiply(scratch, scratch, out=scratch)
    np.add(out, scratch, out=out)


def _update_block(xs, ys, zs, dist, px, py, pz, lo, hi, out, scratch):
    """Min-update dist[lo:hi] against point p and return the block argmax."""
    span = hi - lo
    o = out[:span]
    s = scratch[:span]
    _dist2_sweep(xs[lo:hi], ys[lo:hi], zs[lo:hi], px, py, pz, o, s)
    d = dist[lo:hi]
    np.minimum(d, o, out=d)
    j = int(np.argmax(d))
    return float(d[j]), lo + j


def _combine_first_max(parts):
    """Fold (value, index) pairs, keeping the greatest value and, on exact
    ties, the smallest index. Chunk-order fold == global first-occurrence
    argmax, so the reduction is deterministic under any partitioning."""
    best_v = -np.inf
    best_i = -1
    for v, i in parts:
        if v > best_v:
            best_v, best_i = v, i
    return best_v, best_i


def run_kernel(points: NDArray[np.float64], m: int, seed_pos: int,
               threads: int = 1):
    """Run farthest-first selection over a (n, 3) array.

    Returns (order, selection_dist2, distance_evals) with positions local to
    ``points``. ``threads`` > 1 splits each sweep into contiguous chunks
    processed by a pool; the chunk results are folded in chunk order, so the
    output is byte-identical for every thread count.
    """
    n = int(points.shape[0])
    xs = np.ascontiguousarray(points[:, 0])
    ys = np.ascontiguousarray(points[:, 1])
    zs = np.ascontiguousarray(points[:, 2])

    order = np.empty(m, dtype=np.int64)
    sel_d2 = np.empty(m, dtype=np.float64)
    dist = np.full(n, np.inf)

    order[0] = seed_pos
    sel_d2[0] = np.inf
    dist[seed_pos] = -np.inf
    if m == 1:
        return order, sel_d2, 0

    threads = max(1, min(int(threads), n))
    if threads == 1:
        bounds = [(lo, min(lo + _BLOCK, n)) for lo in range(0, n, _BLOCK)]
        pool = None
    else:
        step = -(-n // threads)
        bounds = [(lo, min(lo + step, n)) for lo in range(0, n, step)]
        pool = ThreadPoolExecutor(max_workers=threads)

    width = max(hi - lo for lo, hi in bounds)
    if pool is None:
        out = np.empty(width)
        scratch = np.empty(width)
        buffers = [(out, scratch)]
    else:
        buffers = [(np.empty(width), np.empty(width)) for _ in bounds]

    try:
        px, py, pz = (float(xs[seed_pos]), float(ys[seed_pos]), float(zs[seed_pos]))
        for k in range(1, m):
            if pool is None:
                out, scratch = buffers[0]
                parts = [
                    _update_block(xs, ys, zs, dist, px, py, pz, lo, hi, out, scratch)
                    for lo, hi in bounds
                ]
            else:
                parts = list(pool.map(
                    lambda args: _update_block(xs, ys, zs, dist, px, py, pz,
                                               args[0][0], args[0][1], *args[1]),
                    zip(bounds, buffers),
                ))
            best_v, best_i = _combine_first_max(parts)
            order[k] = best_i
            sel_d2[k] = best_v
            dist[best_i] = -np.inf
            px, py, pz = float(xs[best_i]), float(ys[best_i]), float(zs[best_i])
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    return order, sel_d2, n * (m - 1)


def _check_budget_and_seed(n: int, m: int, seed_index: int):
    if not 1 <= m <= n:
        raise BudgetOutOfRange(f"m={m} not in [1, {n}]")
    if not 0 <= seed_index < n:
        raise SeedOutOfRange(f"seed index {seed_index} not in [0, {n})")


def fps(cloud: PointCloud, m: int, seed_index: int = 0, *,
        threads: int = 1) -> tuple[OrderedSample, SamplerStats]:
    """Standard farthest point sampling of ``m`` points starting at ``seed_index``.

    Deterministic: ties break to the lowest original index, and the thread
    count never changes the result.
    """
    _check_budget_and_seed(cloud.n, m, seed_index)
    order, sel_d2, evals = run_kernel(cloud.points, m, seed_index, threads)
    sample = OrderedSample(order, sel_d2, fill_boundary=m)
    stats = SamplerStats(distance_evals=evals, iterations=m, candidates=cloud.n)
    return sample, stats


def fps_oracle(cloud: PointCloud, m: int, seed_index: int = 0) -> OrderedSample:
    """Brute-force reference: same greedy rule, O(N·M²), no running array.

    Each iteration recomputes every point's min distance to the entire
    current prefix before taking the argmax (lowest index on ties).
    """
    _check_budget_and_seed(cloud.n, m, seed_index)
    pts = cloud.points
    n = cloud.n
    xs, ys, zs = pts[:, 0], pts[:, 1], pts[:, 2]

    order = [seed_index]
    sel_d2 = [np.inf]
    selected = np.zeros(n, dtype=bool)
    selected[seed_index] = True
    d2 = np.empty(n)
    scratch = np.empty(n)

    for _ in range(1, m):
        dmin = np.full(n, np.inf)
        for j in order:
            _dist2_sweep(xs, ys, zs, float(xs[j]), float(ys[j]), float(zs[j]),
                         d2, scratch)
            np.minimum(dmin, d2, out=dmin)
        dmin[selected] = -np.inf
        best = int(np.argmax(dmin))
        order.append(best)
        sel_d2.append(float(dmin[best]))
        selected[best] = True

    return OrderedSample(np.array(order, dtype=np.int64),
                         np.array(sel_d2, dtype=np.float64),
                         fill_boundary=m)
