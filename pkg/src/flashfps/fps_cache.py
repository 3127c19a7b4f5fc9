"""Hierarchical sampling with first-layer caching and prefix reuse.

With a fixed seed, metric, and tie-break, farthest-first sampling restricted
to its own output reproduces that output's prefix exactly, so deeper layers
of a sampling pipeline can be served as slices of the first layer's cached
order at zero distance-computation cost. This module implements the cached
path, the recompute-per-layer reference path used to verify it, and the
cache's (de)serialization.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import (BudgetExceedsCloud, BudgetOutOfRange, BudgetsNotMonotone,
                     PrefixTooLong, SeedOutOfRange, UnsupportedFormat)
from .fps_core import OrderedSample, SamplerStats, run_kernel
from .fps_prune import PruneConfig, fps_prune
from .geometry import PointCloud

# Per-point cache entry: uint32 index + 3 float64 coordinates + float64
# squared selection distance.
BYTES_PER_ENTRY = 36
_MAGIC = b"FPSC"
_VERSION = 1
_HEADER = struct.Struct("<4sIII")
_RECORD_DTYPE = np.dtype([("index", "<u4"), ("x", "<f8"), ("y", "<f8"),
                          ("z", "<f8"), ("dist2", "<f8")])


@dataclass(frozen=True)
class LayerBudgets:
    """Non-increasing per-layer sample sizes M1 >= M2 >= ... >= ML >= 1."""

    budgets: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.budgets)
        if len(b) < 1:
            raise BudgetsNotMonotone("at least one layer budget is required")
        if any(x < 1 for x in b):
            raise BudgetOutOfRange("layer budgets must be >= 1")
        if any(b[i] < b[i + 1] for i in range(len(b) - 1)):
            raise BudgetsNotMonotone(f"budgets must be non-increasing; got {b}")
        object.__setattr__(self, "budgets", b)

    def __len__(self) -> int:
        return len(self.budgets)

    def __iter__(self):
        return iter(self.budgets)


def cache_footprint(m1: int) -> int:
    """Exact serialized size of the per-point cache payload, in bytes."""
    if m1 < 1:
        raise BudgetOutOfRange(f"cache size must be >= 1; got {m1}")
    return int(m1) * BYTES_PER_ENTRY


@dataclass(frozen=True)
class CacheRecord:
    """The first layer's ordered output plus the coordinates it selected."""

    layer1: OrderedSample
    source_cloud_size: int
    points: NDArray[np.float64]
    footprint_bytes: int

    @classmethod
    def from_sample(cls, cloud: PointCloud, sample: OrderedSample) -> "CacheRecord":
        pts = np.ascontiguousarray(cloud.points[sample.indices])
        pts.flags.writeable = False
        return cls(layer1=sample, source_cloud_size=cloud.n, points=pts,
                   footprint_bytes=cache_footprint(len(sample)))

    def to_bytes(self) -> bytes:
        m = len(self.layer1)
        rec = np.empty(m, dtype=_RECORD_DTYPE)
        rec["index"] = self.layer1.indices
        rec["x"] = self.points[:, 0]
        rec["y"] = self.points[:, 1]
        rec["z"] = self.points[:, 2]
        rec["dist2"] = self.layer1.selection_dist2
        return _HEADER.pack(_MAGIC, _VERSION, m, self.source_cloud_size) + rec.tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "CacheRecord":
        if len(blob) < _HEADER.size:
            raise UnsupportedFormat("cache blob too short for header")
        magic, version, count, source_n = _HEADER.unpack_from(blob)
        if magic != _MAGIC:
            raise UnsupportedFormat(f"bad cache magic {magic!r}")
        if version != _VERSION:
            raise UnsupportedFormat(f"unsupported cache version {version}")
        body = blob[_HEADER.size:]
        if len(body) != count * BYTES_PER_ENTRY:
            raise UnsupportedFormat("cache payload size does not match header count")
        rec = np.frombuffer(body, dtype=_RECORD_DTYPE)
        pts = np.column_stack([rec["x"], rec["y"], rec["z"]])
        d2 = np.ascontiguousarray(rec["dist2"])
        # The wire format does not carry the fill boundary; recover it as the
        # start of the trailing zero-distance run (fill entries are always 0).
        nonzero = np.flatnonzero(d2)
        boundary = int(nonzero[-1]) + 1 if nonzero.size else min(1, count)
        sample = OrderedSample(rec["index"].astype(np.int64), d2,
                               fill_boundary=boundary)
        pts = np.ascontiguousarray(pts)
        pts.flags.writeable = False
        return cls(layer1=sample, source_cloud_size=int(source_n), points=pts,
                   footprint_bytes=cache_footprint(count))


def write_cache(cache: CacheRecord, path) -> None:
    with open(path, "wb") as fh:
        fh.write(cache.to_bytes())


def read_cache(path) -> CacheRecord:
    with open(path, "rb") as fh:
        return CacheRecord.from_bytes(fh.read())


def write_cache_text(cache: CacheRecord, path) -> None:
    """Debug dump: one `index x y z dist2` line per cached point."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# cache count={len(cache.layer1)} "
                 f"source_n={cache.source_cloud_size} "
                 f"fill_boundary={cache.layer1.fill_boundary}\n")
        for i in range(len(cache.layer1)):
            x, y, z = (float(v) for v in cache.points[i])
            fh.write(f"{int(cache.layer1.indices[i])} {x!r} {y!r} {z!r} "
                     f"{float(cache.layer1.selection_dist2[i])!r}\n")


def prefix_reuse(cache: CacheRecord, m: int) -> OrderedSample:
    """The length-m prefix of the cached order, verbatim; no recomputation."""
    cached = len(cache.layer1)
    if not 1 <= m <= cached:
        raise PrefixTooLong(f"prefix length {m} not in [1, {cached}]")
    return OrderedSample(cache.layer1.indices[:m].copy(),
                         cache.layer1.selection_dist2[:m].copy(),
                         fill_boundary=min(cache.layer1.fill_boundary, m))


@dataclass(frozen=True)
class PrefixCheckResult:
    """Outcome of one prefix-equivalence check."""

    ok: bool
    first_divergence: int | None = None
    expected_index: int | None = None
    actual_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_prefix_property(cloud: PointCloud, m1: int, m2: int,
                           seed_index: int = 0, *, threads: int = 1
                           ) -> PrefixCheckResult:
    """Check that re-running selection on its own m1-point output, seeded at
    the same physical point, reproduces the first m2 picks exactly.

    A False result indicates a kernel or tie-break bug, not an expected
    outcome. Pruning is not involved; the check is for exact sampling.
    """
    if not 1 <= m2 <= m1 <= cloud.n:
        raise BudgetOutOfRange(f"need 1 <= m2 <= m1 <= N; got m1={m1}, m2={m2}")
    if not 0 <= seed_index < cloud.n:
        raise SeedOutOfRange(f"seed index {seed_index} not in [0, {cloud.n})")
    full_order, _, _ = run_kernel(cloud.points, m1, seed_index, threads)
    rerun, _ = run_restricted(cloud.points, full_order, m2, 0, threads)
    expected = full_order[:m2]
    diverging = np.flatnonzero(rerun.indices != expected)
    if diverging.size == 0:
        return PrefixCheckResult(ok=True)
    pos = int(diverging[0])
    return PrefixCheckResult(ok=False, first_divergence=pos,
                             expected_index=int(expected[pos]),
                             actual_index=int(rerun.indices[pos]))


def run_restricted(points: NDArray[np.float64], index_map: NDArray[np.int64],
                   m: int, seed_pos: int, threads: int = 1
                   ) -> tuple[OrderedSample, SamplerStats]:
    """Farthest-first sampling over ``points[index_map]`` (in map order),
    reported in original indices. Position 0 of the map is the seed slot the
    hierarchical reference path uses."""
    sub = np.ascontiguousarray(points[index_map])
    order, sel_d2, evals = run_kernel(sub, m, seed_pos, threads)
    sample = OrderedSample(np.asarray(index_map, dtype=np.int64)[order], sel_d2,
                           fill_boundary=m)
    stats = SamplerStats(distance_evals=evals, iterations=m,
                         candidates=int(index_map.shape[0]))
    return sample, stats


def hierarchical_sample_detailed(cloud: PointCloud,
                                 budgets: LayerBudgets | Sequence[int],
                                 cfg: PruneConfig, seed_index: int = 0,
                                 cache_enabled: bool = True, *,
                                 threads: int = 1):
    """Run the full pipeline, returning (samples, aggregate, per-layer stats)."""
    if not isinstance(budgets, LayerBudgets):
        budgets = LayerBudgets(tuple(budgets))
    m1 = budgets.budgets[0]
    if m1 > cloud.n:
        raise BudgetExceedsCloud(f"M1={m1} exceeds cloud size {cloud.n}")

    layer1, stats1 = fps_prune(cloud, m1, cfg, seed_index, threads=threads)
    samples = [layer1]
    per_layer = [stats1]

    if cache_enabled:
        cache = CacheRecord.from_sample(cloud, layer1)
        stats1.cache_bytes = cache.footprint_bytes
        for m in budgets.budgets[1:]:
            samples.append(prefix_reuse(cache, m))
            per_layer.append(SamplerStats())
    else:
        for m in budgets.budgets[1:]:
            prev = samples[-1]
            sample, stats = run_restricted(cloud.points, prev.indices, m, 0,
                                           threads)
            samples.append(sample)
            per_layer.append(stats)

    total = SamplerStats(
        distance_evals=sum(s.distance_evals for s in per_layer),
        iterations=sum(s.iterations for s in per_layer),
        candidates=sum(s.candidates for s in per_layer),
        cache_bytes=sum(s.cache_bytes for s in per_layer),
    )
    return samples, total, per_layer


def hierarchical_sample(cloud: PointCloud, budgets: LayerBudgets | Sequence[int],
                        cfg: PruneConfig, seed_index: int = 0,
                        cache_enabled: bool = True, *, threads: int = 1
                        ) -> tuple[list[OrderedSample], SamplerStats]:
    """Sample every layer of a budget pyramid over one cloud.

    Layer 1 runs the (optionally pruned) kernel; with the cache enabled,
    deeper layers are prefix slices of layer 1 and add zero distance
    evaluations. With the cache disabled each layer re-runs exact sampling on
    the previous layer's points (the verification path).
    """
    samples, total, _ = hierarchical_sample_detailed(
        cloud, budgets, cfg, seed_index, cache_enabled, threads=threads)
    return samples, total
