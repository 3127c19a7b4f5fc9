"""Farthest point sampling with pruning, cross-layer prefix reuse, and
verification tooling."""

from . import errors
from .fps_cache import (BYTES_PER_ENTRY, CacheRecord, LayerBudgets,
                        PrefixCheckResult, cache_footprint,
                        hierarchical_sample, prefix_reuse, read_cache,
                        verify_prefix_property, write_cache, write_cache_text)
from .fps_core import OrderedSample, SamplerStats, fps, fps_oracle
from .fps_prune import FillMode, PruneConfig, candidate_prune, fps_prune
from .geometry import Point3, PointCloud, squared_distance, validate_cloud
from .io import (GeneratorKind, GeneratorSpec, generate, parse_generator_spec,
                 read_indices, read_ply_ascii, read_xyz, write_indices,
                 write_xyz)
from .metrics import (Histogram, LateReplacementRow, coverage_radius,
                      histogram_l1, late_replacement_study,
                      radial_density_histogram, sample_overlap)

__version__ = "0.1.0"

__all__ = [
    "BYTES_PER_ENTRY", "CacheRecord", "FillMode", "GeneratorKind",
    "GeneratorSpec", "Histogram", "LateReplacementRow", "LayerBudgets",
    "OrderedSample", "Point3", "PointCloud", "PrefixCheckResult",
    "PruneConfig", "SamplerStats", "cache_footprint", "candidate_prune",
    "coverage_radius", "errors", "fps", "fps_oracle", "fps_prune", "generate",
    "hierarchical_sample", "histogram_l1", "late_replacement_study",
    "parse_generator_spec", "prefix_reuse", "radial_density_histogram",
    "read_cache", "read_indices", "read_ply_ascii", "read_xyz",
    "sample_overlap", "squared_distance", "validate_cloud",
    "verify_prefix_property", "write_cache", "write_cache_text",
    "write_indices", "write_xyz", "__version__",
]
