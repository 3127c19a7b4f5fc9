/**
 * Array bindings to the flashfps sampling library.
 *
 * The binding layer holds no sampling logic: inputs are validated at the
 * boundary, serialized losslessly (shortest round-trip decimal, which the
 * CLI reads back to the identical float64), and every operation is delegated
 * to the `flashfps` CLI in a child process. Index sequences come back
 * byte-for-byte as the CLI wrote them.
 *
 * Point layout is a borrowed dense `n x 3` block: a Float64Array of length
 * `3 * n`, row-major (x0 y0 z0 x1 y1 z1 ...). Anything else is rejected,
 * never silently copied into shape.
 */

import { execFile } from "node:child_process";
import { promisify } from "node:util";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import {
  CliError,
  EmptyCloudError,
  FlashFpsError,
  NonContiguousInputError,
  NonFiniteCoordinateError,
  mapCliError,
} from "./errors";

export * from "./errors";

const execFileAsync = promisify(execFile);

/** Mirrors the core library's version string. */
export const VERSION = "0.1.0";

export type FillMode = "slice" | "random";

export interface PruneOptions {
  /** Pruning ratio in [0, 1). */
  p: number;
  seedIndex?: number;
  fillMode?: FillMode;
  rngSeed?: number;
}

export interface HierOptions extends PruneOptions {
  cache?: boolean;
}

/** Resolve the CLI command; override with FLASHFPS_CLI="python3 -m flashfps". */
function cliCommand(): string[] {
  const env = process.env.FLASHFPS_CLI;
  if (env && env.trim().length > 0) {
    return env.trim().split(/\s+/);
  }
  return ["python3", "-m", "flashfps"];
}

function validateView(points: Float64Array, n: number): void {
  if (!(points instanceof Float64Array)) {
    throw new TypeError("points must be a Float64Array (dense n x 3 block)");
  }
  if (!Number.isInteger(n) || n < 0) {
    throw new FlashFpsError(`n must be a nonnegative integer; got ${n}`);
  }
  if (n === 0) {
    throw new EmptyCloudError("point cloud is empty");
  }
  if (points.length !== 3 * n) {
    throw new NonContiguousInputError(
      `expected a dense ${n} x 3 view (length ${3 * n}); got length ${points.length}`);
  }
  for (let i = 0; i < points.length; i++) {
    if (!Number.isFinite(points[i])) {
      throw new NonFiniteCoordinateError(Math.floor(i / 3));
    }
  }
}

/** Serialize the borrowed view to xyz text. String() emits the shortest
 * decimal that round-trips the exact double. */
export function writeXyz(filePath: string, points: Float64Array, n: number): void {
  const lines: string[] = new Array(n);
  for (let i = 0; i < n; i++) {
    lines[i] = `${points[3 * i]} ${points[3 * i + 1]} ${points[3 * i + 2]}`;
  }
  fs.writeFileSync(filePath, lines.join("\n") + "\n");
}

async function runCli(args: string[]): Promise<string> {
  const [cmd, ...pre] = cliCommand();
  try {
    const { stdout } = await execFileAsync(cmd, [...pre, ...args],
                                           { maxBuffer: 64 * 1024 * 1024 });
    return stdout;
  } catch (err) {
    const e = err as { code?: number; stderr?: string; message?: string };
    if (typeof e.stderr === "string") {
      throw mapCliError(e.stderr, e.code ?? null);
    }
    throw new CliError(e.message ?? "failed to launch sampling CLI", null);
  }
}

function readIndices(filePath: string): Int32Array {
  const text = fs.readFileSync(filePath, "utf8").trim();
  if (text.length === 0) {
    return new Int32Array(0);
  }
  const parts = text.split("\n");
  const out = new Int32Array(parts.length);
  for (let i = 0; i < parts.length; i++) {
    const v = Number(parts[i]);
    if (!Number.isInteger(v) || v < 0) {
      throw new CliError(`malformed index file entry: ${parts[i]}`, null);
    }
    out[i] = v;
  }
  return out;
}

async function withTempDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "flashfps-"));
  try {
    return await fn(dir);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

/** Standard farthest point sampling: m original-cloud indices, seed first. */
export async function bindFps(points: Float64Array, n: number, m: number,
                              seedIndex = 0): Promise<Int32Array> {
  validateView(points, n);
  return withTempDir(async (dir) => {
    const cloud = path.join(dir, "cloud.xyz");
    const out = path.join(dir, "indices.txt");
    writeXyz(cloud, points, n);
    await runCli(["sample", "--input", cloud, "--method", "fps",
                  "--m", String(m), "--seed", String(seedIndex),
                  "--out-indices", out]);
    return readIndices(out);
  });
}

/** Pruned sampling (candidate + iteration pruning with budget fill). */
export async function bindFlashFps(points: Float64Array, n: number, m: number,
                                   opts: PruneOptions): Promise<Int32Array> {
  validateView(points, n);
  return withTempDir(async (dir) => {
    const cloud = path.join(dir, "cloud.xyz");
    const out = path.join(dir, "indices.txt");
    writeXyz(cloud, points, n);
    await runCli(["sample", "--input", cloud, "--method", "flashfps",
                  "--m", String(m), "--prune-ratio", String(opts.p),
                  "--seed", String(opts.seedIndex ?? 0),
                  "--fill", opts.fillMode ?? "slice",
                  "--rng-seed", String(opts.rngSeed ?? 0),
                  "--out-indices", out]);
    return readIndices(out);
  });
}

/** Hierarchical sampling: one index array per layer budget. */
export async function bindHier(points: Float64Array, n: number,
                               budgets: number[],
                               opts: HierOptions): Promise<Int32Array[]> {
  validateView(points, n);
  if (budgets.length === 0) {
    throw new FlashFpsError("budgets must be nonempty");
  }
  return withTempDir(async (dir) => {
    const cloud = path.join(dir, "cloud.xyz");
    const prefix = path.join(dir, "layer");
    writeXyz(cloud, points, n);
    await runCli(["hier", "--input", cloud,
                  "--budgets", budgets.join(","),
                  "--cache", opts.cache === false ? "off" : "on",
                  "--prune-ratio", String(opts.p),
                  "--seed", String(opts.seedIndex ?? 0),
                  "--fill", opts.fillMode ?? "slice",
                  "--rng-seed", String(opts.rngSeed ?? 0),
                  "--out-indices", prefix]);
    return budgets.map((_, i) => readIndices(`${prefix}_L${i + 1}.txt`));
  });
}

/** Covering radius of a sample (by original indices) over the cloud. */
export async function bindCoverageRadius(points: Float64Array, n: number,
                                         indices: ArrayLike<number>): Promise<number> {
  validateView(points, n);
  return withTempDir(async (dir) => {
    const cloud = path.join(dir, "cloud.xyz");
    const idx = path.join(dir, "indices.txt");
    writeXyz(cloud, points, n);
    const lines: string[] = new Array(indices.length);
    for (let i = 0; i < indices.length; i++) {
      lines[i] = String(indices[i]);
    }
    fs.writeFileSync(idx, lines.join("\n") + "\n");
    const stdout = await runCli(["coverage", "--input", cloud,
                                 "--indices", idx]);
    const rows = stdout.trim().split(/\r?\n/);
    const parsed = JSON.parse(rows[rows.length - 1]) as { coverage_radius: number };
    return parsed.coverage_radius;
  });
}
