import { spawnSync } from "node:child_process";

import { BridgeError, errorFromStatus } from "./errors.js";
import type { BindOptions, Complex, WireResult } from "./types.js";

const DEFAULT_PYTHON = "python3";

/**
 * Run one core matrix function: the payload goes to the core process as
 * JSON on stdin and the JSON reply on stdout comes back parsed. Values
 * cross the boundary as shortest round-trip decimal literals on both
 * sides, so doubles survive bit-for-bit.
 */
export function runMatfn(
  name: string,
  payload: Record<string, unknown>,
  options: BindOptions = {},
): WireResult {
  const python = options.python ?? DEFAULT_PYTHON;
  const proc = spawnSync(python, ["-m", "clickstats", "matfn", name], {
    input: JSON.stringify(payload),
    encoding: "utf8",
    timeout: options.timeoutMs,
    maxBuffer: 64 * 1024 * 1024,
  });
  if (proc.error) {
    throw new BridgeError(`failed to run ${python}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    throw errorFromStatus(proc.status ?? -1, proc.stderr ?? "");
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(proc.stdout);
  } catch (exc) {
    throw new BridgeError(`unreadable core output: ${(exc as Error).message}`);
  }
  if (typeof parsed !== "object" || parsed === null || !("value" in parsed)) {
    throw new BridgeError("core output is missing the value field");
  }
  return parsed as WireResult;
}

/** Narrow a wire value to a real number, rejecting complex replies. */
export function expectReal(result: WireResult): number {
  if (typeof result.value !== "number") {
    throw new BridgeError(`expected a real value from ${result.function}`);
  }
  return result.value;
}

/** Narrow a wire value to a `[re, im]` pair, promoting bare reals. */
export function expectComplex(result: WireResult): Complex {
  if (typeof result.value === "number") {
    return [result.value, 0];
  }
  const pair = result.value;
  if (!Array.isArray(pair) || pair.length !== 2
      || typeof pair[0] !== "number" || typeof pair[1] !== "number") {
    throw new BridgeError(`expected a complex value from ${result.function}`);
  }
  return [pair[0], pair[1]];
}
