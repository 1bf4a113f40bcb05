/**
 * A complex scalar on the wire: a `[re, im]` pair of doubles.
 */
export type Complex = readonly [number, number];

/**
 * A scalar the caller may pass wherever a complex entry is expected.
 * Bare numbers are treated as reals.
 */
export type ComplexLike = number | Complex;

/**
 * A matrix as nested rows of scalars. All rows must share one length.
 */
export type MatrixLike = readonly (readonly ComplexLike[])[];

/**
 * A vector of scalars.
 */
export type VectorLike = readonly ComplexLike[];

/**
 * Cancellation diagnostics reported by the signed-sum functions: the
 * largest intermediate term magnitude and the number of terms summed.
 * Empty for functions that do not expose them.
 */
export interface Diagnostics {
  readonly max_term?: number;
  readonly terms?: number;
}

/**
 * The raw wire response for one bound function call.
 */
export interface WireResult {
  readonly value: number | Complex;
  readonly diagnostics: Diagnostics;
  readonly function: string;
}

/**
 * Options shared by all bound functions.
 */
export interface BindOptions {
  /** Interpreter used to reach the core library (default "python3"). */
  readonly python?: string;
  /** Kill the core process after this many milliseconds. */
  readonly timeoutMs?: number;
}
