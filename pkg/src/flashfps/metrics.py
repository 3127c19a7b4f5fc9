"""Sampling-quality metrics: covering radius, radial histograms, overlap.

coverage_radius shares the kernel's distance arithmetic, so for an exact
farthest-first run the covering radius of a k-prefix equals the square root
of the (k+1)-th selection distance bit for bit; tests lean on that to
cross-check the kernel and the metrics against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import BinMismatch, DegenerateRange
from .fps_core import OrderedSample, _dist2_sweep, fps
from .geometry import PointCloud


def _as_index_array(sample) -> NDArray[np.int64]:
    if isinstance(sample, OrderedSample):
        return sample.indices
    return np.asarray(sample, dtype=np.int64)


def _min_dist2_to(cloud_points: NDArray[np.float64],
                  sample_points: NDArray[np.float64]) -> NDArray[np.float64]:
    """Per cloud point, squared distance to the nearest sample point."""
    xs = np.ascontiguousarray(cloud_points[:, 0])
    ys = np.ascontiguousarray(cloud_points[:, 1])
    zs = np.ascontiguousarray(cloud_points[:, 2])
    best = np.full(cloud_points.shape[0], np.inf)
    out = np.empty_like(best)
    scratch = np.empty_like(best)
    for q in sample_points:
        _dist2_sweep(xs, ys, zs, float(q[0]), float(q[1]), float(q[2]),
                     out, scratch)
        np.minimum(best, out, out=best)
    return best


def coverage_radius(sample, cloud: PointCloud) -> float:
    """Max over all cloud points of the Euclidean distance to the nearest
    sampled point (the k-center objective the sample achieves)."""
    idx = _as_index_array(sample)
    if idx.size == 0:
        raise ValueError("sample must be nonempty")
    best = _min_dist2_to(cloud.points, cloud.points[idx])
    return math.sqrt(float(best.max()))


@dataclass(frozen=True)
class Histogram:
    """Fixed-bin probability-mass histogram; densities sum to 1."""

    bin_edges: NDArray[np.float64]
    densities: NDArray[np.float64]

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        dens = np.asarray(self.densities, dtype=np.float64)
        if edges.ndim != 1 or dens.ndim != 1 or edges.shape[0] != dens.shape[0] + 1:
            raise ValueError("need len(bin_edges) == len(densities) + 1")
        if not (np.diff(edges) > 0).all():
            raise ValueError("bin edges must be strictly increasing")
        if (dens < 0).any() or abs(float(dens.sum()) - 1.0) > 1e-9:
            raise ValueError("densities must be nonnegative and sum to 1")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "densities", dens)


def radial_density_histogram(points, bins: int = 64, *,
                             center_cloud: PointCloud | None = None) -> Histogram:
    """Histogram of distances to the cloud centroid.

    ``points`` may be a PointCloud or an (m, 3) array (e.g. the coordinates
    of a sample). The centroid and the binning range [0, max distance] come
    from ``center_cloud`` when given, so histograms of different samples of
    the same cloud share edges; otherwise from ``points`` itself.
    """
    pts = points.points if isinstance(points, PointCloud) else np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
        raise ValueError("need at least 2 points of shape (m, 3)")
    if bins < 2:
        raise ValueError("need at least 2 bins")

    ref = center_cloud.points if center_cloud is not None else pts
    centroid = ref.mean(axis=0)
    ref_d2 = _min_dist2_to(ref, centroid[None, :])
    dmax = math.sqrt(float(ref_d2.max()))
    if dmax == 0.0:
        raise DegenerateRange("all points coincide; no radial range")

    d = np.sqrt(_min_dist2_to(pts, centroid[None, :]))
    counts, edges = np.histogram(d, bins=bins, range=(0.0, dmax))
    total = counts.sum()
    if total == 0:
        raise DegenerateRange("no points fall inside the radial range")
    return Histogram(edges, counts / total)


def histogram_l1(a: Histogram, b: Histogram) -> float:
    """Total variation-style L1 distance between histograms on shared edges."""
    if a.bin_edges.shape != b.bin_edges.shape or not np.array_equal(a.bin_edges, b.bin_edges):
        raise BinMismatch("histograms do not share bin edges")
    return float(np.abs(a.densities - b.densities).sum())


def sample_overlap(a, b) -> float:
    """|intersection| / max(|a|, |b|) over the two samples' index sets."""
    ia = set(_as_index_array(a).tolist())
    ib = set(_as_index_array(b).tolist())
    if not ia and not ib:
        return 1.0
    return len(ia & ib) / max(len(ia), len(ib))


@dataclass(frozen=True)
class LateReplacementRow:
    p: float
    coverage_radius: float
    histogram_l1: float


def late_replacement_study(cloud: PointCloud, m: int, p_grid: Sequence[float],
                           seed: int = 0, *, bins: int = 64,
                           threads: int = 1) -> list[LateReplacementRow]:
    """Quality impact of swapping the last floor(p*m) farthest-first picks
    for ascending-index fill, per p in the grid."""
    baseline, _ = fps(cloud, m, seed, threads=threads)
    base_hist = radial_density_histogram(cloud.points[baseline.indices], bins,
                                         center_cloud=cloud)
    rows = []
    for p in p_grid:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"replacement ratio must be in [0, 1]; got {p}")
        keep = m - math.floor(p * m)
        kept = baseline.indices[:keep]
        if keep < m:
            remaining = np.ones(cloud.n, dtype=bool)
            remaining[kept] = False
            fill = np.flatnonzero(remaining)[:m - keep]
            idx = np.concatenate([kept, fill])
        else:
            idx = kept
        hist = radial_density_histogram(cloud.points[idx], bins,
                                        center_cloud=cloud)
        rows.append(LateReplacementRow(
            p=float(p),
            coverage_radius=coverage_radius(idx, cloud),
            histogram_l1=histogram_l1(base_hist, hist),
        ))
    return rows
