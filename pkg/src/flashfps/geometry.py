"""Core numeric types: 3D points and the indexed point-cloud container.

A PointCloud's defining contract is index stability: a point's position in
the backing array is its identity, and no operation in this library ever
reorders the store. All distance work is done on squared distances, which
order identically to Euclidean ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import EmptyCloud, NonFiniteCoordinate


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def squared_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Squared Euclidean distance between two 3D points.

    Accumulation order is ((dx²+dy²)+dz²), matching the vectorized kernel
    bit for bit so scalar spot checks agree exactly with kernel decisions.
    """
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    dz = a[2] - b[2]
    return (dx * dx + dy * dy) + dz * dz


@dataclass(frozen=True)
class PointCloud:
    """An ordered, immutable store of 3D points with stable 0-based indices.

    ``extras`` optionally carries one opaque string per point (trailing file
    columns); it is round-tripped by I/O and never interpreted.
    """

    points: NDArray[np.float64]
    extras: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"points must have shape (N, 3); got {pts.shape}")
        if pts.shape[0] < 1:
            raise EmptyCloud("point cloud is empty")
        finite = np.isfinite(pts).all(axis=1)
        if not finite.all():
            raise NonFiniteCoordinate(int(np.argmin(finite)))
        if self.extras is not None and len(self.extras) != pts.shape[0]:
            raise ValueError("extras length must match point count")
        pts = np.ascontiguousarray(pts)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    def __len__(self) -> int:
        return self.n

    def point(self, index: int) -> Point3:
        x, y, z = self.points[index]
        return Point3(float(x), float(y), float(z))


def validate_cloud(raw: Iterable[Sequence[float]] | NDArray[np.float64],
                   extras: Sequence[str] | None = None) -> PointCloud:
    """Build a PointCloud from raw triples, rejecting empty or non-finite input.

    Raises EmptyCloud or NonFiniteCoordinate (with the first offending
    point index).
    """
    arr = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw,
                     dtype=np.float64)
    if arr.size == 0:
        raise EmptyCloud("point cloud is empty")
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected point triples; got shape {arr.shape}")
    return PointCloud(arr, extras=tuple(extras) if extras is not None else None)
