"""Exception types shared across the library.

Every error raised by the public API derives from FlashFpsError so callers
(and the CLI) can map failures to structured messages uniformly.
"""


class FlashFpsError(Exception):
    """Base class for all library errors."""


class EmptyCloud(FlashFpsError):
    """A point cloud must contain at least one point."""


class NonFiniteCoordinate(FlashFpsError):
    """A coordinate was NaN or infinite. Carries the offending point index."""

    def __init__(self, index: int, message: str | None = None):
        self.index = int(index)
        super().__init__(message or f"non-finite coordinate at point index {self.index}")


class BudgetOutOfRange(FlashFpsError):
    """Requested sample size is < 1 or exceeds the cloud size."""


class SeedOutOfRange(FlashFpsError):
    """Seed index does not address a point in the cloud."""


class PruneLeavesNothing(FlashFpsError):
    """Candidate pruning produced an empty candidate set (defensive; unreachable for p < 1)."""


class SeedNotInCandidates(FlashFpsError):
    """Seed index was pruned away by candidate pruning; re-index the cloud or lower p."""


class BudgetsNotMonotone(FlashFpsError):
    """Layer budgets must be non-increasing."""


class BudgetExceedsCloud(FlashFpsError):
    """First-layer budget exceeds the cloud size."""


class PrefixTooLong(FlashFpsError):
    """Requested prefix is longer than the cached sample."""


class DegenerateRange(FlashFpsError):
    """All points are identical; a histogram range cannot be formed."""


class BinMismatch(FlashFpsError):
    """Histograms being compared do not share bin edges."""


class ParseError(FlashFpsError):
    """A file could not be parsed. Carries the 1-based line number."""

    def __init__(self, line: int, message: str | None = None):
        self.line = int(line)
        super().__init__(message or f"parse error at line {self.line}")


class UnsupportedFormat(FlashFpsError):
    """The file is in a format this reader does not handle (e.g. binary PLY)."""


class InvalidSpec(FlashFpsError):
    """A generator spec is malformed or has out-of-range parameters."""
