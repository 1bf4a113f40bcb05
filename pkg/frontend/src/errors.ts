/**
 * Error classes mirroring the core library's error categories. The core
 * reports failures through its exit code, so each status maps to one class
 * and the stderr text (which names the violated invariant) becomes the
 * message.
 */

/** Base class for every error raised by the bindings. */
export class ClickstatsError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Malformed payload: bad JSON, missing fields, ragged or empty shapes. */
export class FormatError extends ClickstatsError {}

/**
 * Well-formed but invalid values: non-Hermitian or unphysical matrices,
 * gain above 1, occupation or pattern mismatches. The message carries the
 * core's invariant name.
 */
export class ValueError extends ClickstatsError {}

/** The request exceeds a hard size cap of the core library. */
export class CapExceededError extends ClickstatsError {}

/** The core process could not be run or produced unreadable output. */
export class BridgeError extends ClickstatsError {}

const STATUS_ERRORS: Record<number, new (message: string) => ClickstatsError> = {
  2: FormatError,
  3: ValueError,
  4: CapExceededError,
};

/**
 * Map a core exit status and stderr text to the matching error instance.
 */
export function errorFromStatus(status: number, stderr: string): ClickstatsError {
  const message = stderr.replace(/^error:\s*/, "").trim() || `core exited with status ${status}`;
  const cls = STATUS_ERRORS[status] ?? BridgeError;
  return new cls(message);
}
