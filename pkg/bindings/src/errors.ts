/**
 * Error types thrown by the bindings, mapped 1:1 from the sampling
 * library's error names (plus the two boundary checks that fail before the
 * CLI is ever invoked).
 */

export class FlashFpsError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class EmptyCloudError extends FlashFpsError {}

export class NonFiniteCoordinateError extends FlashFpsError {
  readonly index: number;
  constructor(index: number, message?: string) {
    super(message ?? `non-finite coordinate at point index ${index}`);
    this.index = index;
  }
}

/** The view is not a dense n x 3 float64 block; the binding never copies or
 * reorders input to make it one. */
export class NonContiguousInputError extends FlashFpsError {}

export class BudgetOutOfRangeError extends FlashFpsError {}
export class SeedOutOfRangeError extends FlashFpsError {}
export class PruneLeavesNothingError extends FlashFpsError {}
export class SeedNotInCandidatesError extends FlashFpsError {}
export class BudgetsNotMonotoneError extends FlashFpsError {}
export class BudgetExceedsCloudError extends FlashFpsError {}
export class PrefixTooLongError extends FlashFpsError {}
export class DegenerateRangeError extends FlashFpsError {}
export class BinMismatchError extends FlashFpsError {}
export class ParseFileError extends FlashFpsError {}
export class UnsupportedFormatError extends FlashFpsError {}
export class InvalidSpecError extends FlashFpsError {}

/** A CLI failure that did not carry a recognized structured error. */
export class CliError extends FlashFpsError {
  readonly exitCode: number | null;
  constructor(message: string, exitCode: number | null) {
    super(message);
    this.exitCode = exitCode;
  }
}

const ERROR_BY_NAME: Record<string, new (message: string) => FlashFpsError> = {
  EmptyCloud: EmptyCloudError,
  BudgetOutOfRange: BudgetOutOfRangeError,
  SeedOutOfRange: SeedOutOfRangeError,
  PruneLeavesNothing: PruneLeavesNothingError,
  SeedNotInCandidates: SeedNotInCandidatesError,
  BudgetsNotMonotone: BudgetsNotMonotoneError,
  BudgetExceedsCloud: BudgetExceedsCloudError,
  PrefixTooLong: PrefixTooLongError,
  DegenerateRange: DegenerateRangeError,
  BinMismatch: BinMismatchError,
  ParseError: ParseFileError,
  UnsupportedFormat: UnsupportedFormatError,
  InvalidSpec: InvalidSpecError,
};

/** Translate a structured CLI error line into the matching exception. */
export function mapCliError(stderr: string, exitCode: number | null): FlashFpsError {
  const lines = stderr.trim().split(/\r?\n/).filter((s) => s.length > 0);
  const last = lines[lines.length - 1] ?? "";
  try {
    const parsed = JSON.parse(last) as { error?: string; message?: string };
    if (parsed.error === "NonFiniteCoordinate") {
      const m = /point index (\d+)/.exec(parsed.message ?? "");
      return new NonFiniteCoordinateError(m ? Number(m[1]) : -1, parsed.message);
    }
    const ctor = parsed.error ? ERROR_BY_NAME[parsed.error] : undefined;
    if (ctor) {
      return new ctor(parsed.message ?? parsed.error ?? "sampling CLI error");
    }
  } catch {
    // fall through to the generic error
  }
  return new CliError(stderr.trim() || `sampling CLI exited with ${exitCode}`,
                      exitCode);
}
