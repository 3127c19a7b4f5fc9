"""Point-cloud file I/O and synthetic cloud generation.

Text formats only: whitespace-separated xyz files (extra columns carried
through untouched), ascii 1.0 PLY (vertex x/y/z read, everything else
skipped), and newline-separated index files. Floats are written with
repr(), which round-trips float64 exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidSpec, ParseError, UnsupportedFormat
from .fps_core import OrderedSample
from .geometry import PointCloud, validate_cloud


def read_xyz(path) -> PointCloud:
    """Read one point per line: `x y z [extra fields...]`. Blank lines are
    skipped; extra fields are preserved verbatim per point."""
    rows: list[tuple[float, float, float]] = []
    extras: list[str] = []
    any_extra = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) < 3:
                raise ParseError(lineno, f"line {lineno}: expected at least 3 fields")
            try:
                x, y, z = float(fields[0]), float(fields[1]), float(fields[2])
            except ValueError:
                raise ParseError(lineno, f"line {lineno}: non-numeric coordinate") from None
            rows.append((x, y, z))
            rest = " ".join(fields[3:])
            extras.append(rest)
            any_extra = any_extra or bool(rest)
    return validate_cloud(rows, extras=extras if any_extra else None)


def write_xyz(cloud: PointCloud, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(cloud.n):
            x, y, z = (repr(float(v)) for v in cloud.points[i])
            tail = ""
            if cloud.extras is not None and cloud.extras[i]:
                tail = " " + cloud.extras[i]
            fh.write(f"{x} {y} {z}{tail}\n")


def write_indices(sample, path) -> None:
    """Write original-cloud indices, one per line, in sample order."""
    idx = sample.indices if isinstance(sample, OrderedSample) else np.asarray(sample)
    if idx.size == 0:
        raise ValueError("sample must be nonempty")
    with open(path, "w", encoding="utf-8") as fh:
        for i in idx:
            fh.write(f"{int(i)}\n")


def read_indices(path) -> NDArray[np.int64]:
    out: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                out.append(int(s))
            except ValueError:
                raise ParseError(lineno, f"line {lineno}: not an integer index") from None
    return np.asarray(out, dtype=np.int64)


def read_ply_ascii(path) -> PointCloud:
    """Minimal ascii-1.0 PLY reader: float/double x y z vertex properties.

    Binary PLY is rejected with UnsupportedFormat. Non-vertex elements and
    non-xyz properties are skipped.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    if not lines or lines[0].strip() != "ply":
        raise ParseError(1, "not a PLY file (missing 'ply' magic)")

    elements: list[tuple[str, int, list[tuple[str, str, bool]]]] = []
    lineno = 1
    saw_format = False
    while True:
        lineno += 1
        if lineno > len(lines):
            raise ParseError(lineno - 1, "header ended without end_header")
        raw = lines[lineno - 1].strip()
        if not raw or raw.startswith("comment") or raw.startswith("obj_info"):
            continue
        fields = raw.split()
        if fields[0] == "format":
            if len(fields) < 3 or fields[1] != "ascii" or fields[2] != "1.0":
                raise UnsupportedFormat(f"unsupported PLY format: {raw}")
            saw_format = True
        elif fields[0] == "element":
            if len(fields) != 3:
                raise ParseError(lineno, f"line {lineno}: malformed element")
            try:
                count = int(fields[2])
            except ValueError:
                raise ParseError(lineno, f"line {lineno}: bad element count") from None
            elements.append((fields[1], count, []))
        elif fields[0] == "property":
            if not elements:
                raise ParseError(lineno, f"line {lineno}: property before element")
            is_list = fields[1] == "list"
            name = fields[-1]
            ptype = fields[1] if not is_list else "list"
            elements[-1][2].append((name, ptype, is_list))
        elif fields[0] == "end_header":
            break
        else:
            raise ParseError(lineno, f"line {lineno}: unknown header keyword {fields[0]!r}")
    if not saw_format:
        raise ParseError(lineno, "PLY header missing format line")

    vertex = next((e for e in elements if e[0] == "vertex"), None)
    if vertex is None:
        raise ParseError(lineno, "PLY header declares no vertex element")
    _, vcount, props = vertex
    if any(is_list for _, _, is_list in props):
        raise UnsupportedFormat("list property on vertex element")
    pos = {name: i for i, (name, _, _) in enumerate(props)}
    for axis in ("x", "y", "z"):
        if axis not in pos:
            raise ParseError(lineno, f"vertex element lacks property {axis!r}")
        ptype = props[pos[axis]][1]
        if ptype not in ("float", "float32", "double", "float64"):
            raise UnsupportedFormat(f"vertex property {axis!r} has type {ptype!r}")

    rows: list[tuple[float, float, float]] = []
    cursor = lineno
    for name, count, _ in elements:
        if name != "vertex":
            cursor += count
            continue
        for _ in range(count):
            cursor += 1
            if cursor > len(lines):
                raise ParseError(cursor - 1, "unexpected end of file in vertex data")
            fields = lines[cursor - 1].split()
            if len(fields) < len(props):
                raise ParseError(cursor, f"line {cursor}: too few vertex values")
            try:
                rows.append((float(fields[pos["x"]]), float(fields[pos["y"]]),
                             float(fields[pos["z"]])))
            except ValueError:
                raise ParseError(cursor, f"line {cursor}: non-numeric vertex value") from None
    if vcount != len(rows):
        raise ParseError(cursor, "vertex count mismatch")
    return validate_cloud(rows)


class GeneratorKind(enum.Enum):
    UNIFORM_CUBE = "uniform"
    GAUSSIAN_CLUSTERS = "clusters"
    SPHERE_SURFACE = "sphere"
    COLLINEAR = "collinear"


@dataclass(frozen=True)
class GeneratorSpec:
    """Deterministic synthetic-cloud recipe; same spec -> same cloud."""

    kind: GeneratorKind
    n: int
    rng_seed: int = 0
    side: float = 1.0
    clusters: int = 4
    sigma: float = 0.05

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpec(f"n must be >= 1; got {self.n}")
        if not math.isfinite(self.side) or self.side <= 0:
            raise InvalidSpec(f"side must be positive; got {self.side}")
        if self.clusters < 1:
            raise InvalidSpec(f"clusters must be >= 1; got {self.clusters}")
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise InvalidSpec(f"sigma must be >= 0; got {self.sigma}")


def generate(spec: GeneratorSpec) -> PointCloud:
    """Generate a synthetic cloud.

    - UNIFORM_CUBE: i.i.d. uniform in [0, side]^3.
    - GAUSSIAN_CLUSTERS: `clusters` centers uniform in the cube, points
      normal(center, sigma^2 I) with uniform cluster assignment.
    - SPHERE_SURFACE: uniform on the radius-`side` sphere.
    - COLLINEAR: unit-spaced points 0..n-2 on the x-axis plus one far
      outlier at x = 2n (a deliberately tie-heavy worked example; n=1 is
      the origin alone).
    """
    rng = np.random.default_rng(spec.rng_seed)
    n = spec.n
    if spec.kind is GeneratorKind.UNIFORM_CUBE:
        pts = rng.random((n, 3)) * spec.side
    elif spec.kind is GeneratorKind.GAUSSIAN_CLUSTERS:
        centers = rng.random((spec.clusters, 3)) * spec.side
        assign = rng.integers(0, spec.clusters, size=n)
        pts = centers[assign] + rng.normal(0.0, spec.sigma, size=(n, 3))
    elif spec.kind is GeneratorKind.SPHERE_SURFACE:
        v = rng.normal(size=(n, 3))
        norms = np.sqrt((v * v).sum(axis=1))
        bad = norms == 0.0
        if bad.any():
            v[bad] = (1.0, 0.0, 0.0)
            norms[bad] = 1.0
        pts = v / norms[:, None] * spec.side
    elif spec.kind is GeneratorKind.COLLINEAR:
        xs = np.arange(n, dtype=np.float64)
        if n > 1:
            xs[-1] = 2.0 * n
        pts = np.column_stack([xs, np.zeros(n), np.zeros(n)])
    else:  # pragma: no cover
        raise InvalidSpec(f"unknown generator kind {spec.kind}")
    return PointCloud(pts)


_SPEC_KEYS = {"n", "seed", "side", "clusters", "sigma"}


def parse_generator_spec(text: str) -> GeneratorSpec:
    """Parse a CLI spec string like `uniform:n=10000,seed=3` or
    `clusters:n=5000,clusters=8,sigma=0.02,seed=1`."""
    head, _, tail = text.partition(":")
    try:
        kind = GeneratorKind(head.strip())
    except ValueError:
        raise InvalidSpec(f"unknown generator kind {head!r}") from None
    kwargs: dict[str, float | int] = {}
    if tail.strip():
        for item in tail.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in _SPEC_KEYS:
                raise InvalidSpec(f"bad generator parameter {item!r}")
            try:
                if key in ("n", "seed", "clusters"):
                    kwargs[key] = int(value)
                else:
                    kwargs[key] = float(value)
            except ValueError:
                raise InvalidSpec(f"bad value for {key!r}: {value!r}") from None
    if "n" not in kwargs:
        raise InvalidSpec("generator spec requires n=<count>")
    return GeneratorSpec(kind=kind, n=int(kwargs.pop("n")),
                         rng_seed=int(kwargs.pop("seed", 0)), **kwargs)
