/**
 * Node bindings for the clickstats core: the six matrix functions and the
 * two direct probability entry points, reached over the core's JSON
 * machine interface. Callers pass plain nested arrays (or BoundMatrix
 * views) and get back native numbers and `[re, im]` pairs.
 *
 * State construction stays on the core side; users of the bindings pass
 * sigma, alpha, and T directly. Each call runs in its own core process,
 * so concurrent calls from worker threads never share interpreter state.
 */

import { expectComplex, expectReal, runMatfn } from "./bridge.js";
import { FormatError } from "./errors.js";
import { matrixToWire, vectorToWire, BoundMatrix } from "./matrix.js";
import type { BindOptions, Complex, MatrixLike, VectorLike } from "./types.js";

export { BoundMatrix, matrixToWire, vectorToWire, splitScalar } from "./matrix.js";
export { runMatfn, expectReal, expectComplex } from "./bridge.js";
export {
  ClickstatsError,
  FormatError,
  ValueError,
  CapExceededError,
  BridgeError,
  errorFromStatus,
} from "./errors.js";
export type {
  BindOptions,
  Complex,
  ComplexLike,
  Diagnostics,
  MatrixLike,
  VectorLike,
  WireResult,
} from "./types.js";

type Matrix = MatrixLike | BoundMatrix;

function intList(values: readonly number[], what: string): number[] {
  return values.map((v) => {
    if (!Number.isInteger(v)) {
      throw new FormatError(`${what} must hold integers, got ${v}`);
    }
    return v;
  });
}

/** The full bound surface returned by {@link bindAll}. */
export interface BoundSurface {
  /** Permanent of a square complex matrix. */
  permanent(A: Matrix): Complex;
  /** Signed permanent sum for threshold clicks through a lossy channel. */
  brs(A: Matrix, E: Matrix): Complex;
  /** Lossless special case of brs, equal to |permanent|^2 for square A. */
  ubrs(A: Matrix): Complex;
  /** Torontonian: threshold clicks for a zero-mean Gaussian state. */
  tor(O: Matrix): number;
  /** Loop Torontonian: Torontonian with displacement vector gamma. */
  ltor(O: Matrix, gamma: VectorLike): number;
  /** Loop Hafnian of a symmetric matrix, diagonal replaced by gamma if given. */
  lhaf(A: Matrix, gamma?: VectorLike): Complex;
  /** Click-pattern probability for Fock occupation n through channel T. */
  thresholdProbFock(T: Matrix, n: readonly number[], d: readonly number[]): number;
  /** Click-pattern probability for the Gaussian state (sigma, alpha). */
  thresholdProbGaussian(sigma: Matrix, alpha: VectorLike, d: readonly number[]): number;
}

/**
 * Bind every core function over one shared set of options. The returned
 * functions are plain closures, safe to destructure.
 */
export function bindAll(options: BindOptions = {}): BoundSurface {
  return {
    permanent: (A) =>
      expectComplex(runMatfn("permanent", { A: matrixToWire(A) }, options)),
    brs: (A, E) =>
      expectComplex(runMatfn("brs", { A: matrixToWire(A), E: matrixToWire(E) }, options)),
    ubrs: (A) =>
      expectComplex(runMatfn("ubrs", { A: matrixToWire(A) }, options)),
    tor: (O) =>
      expectReal(runMatfn("tor", { O: matrixToWire(O) }, options)),
    ltor: (O, gamma) =>
      expectReal(runMatfn("ltor", { O: matrixToWire(O), gamma: vectorToWire(gamma) }, options)),
    lhaf: (A, gamma) =>
      expectComplex(runMatfn(
        "lhaf",
        gamma === undefined
          ? { A: matrixToWire(A) }
          : { A: matrixToWire(A), gamma: vectorToWire(gamma) },
        options,
      )),
    thresholdProbFock: (T, n, d) =>
      expectReal(runMatfn(
        "threshold_prob_fock",
        { T: matrixToWire(T), n: intList(n, "n"), d: intList(d, "d") },
        options,
      )),
    thresholdProbGaussian: (sigma, alpha, d) =>
      expectReal(runMatfn(
        "threshold_prob_gaussian",
        { sigma: matrixToWire(sigma), alpha: vectorToWire(alpha), d: intList(d, "d") },
        options,
      )),
  };
}

const defaultSurface = bindAll();

export const permanent = defaultSurface.permanent;
export const brs = defaultSurface.brs;
export const ubrs = defaultSurface.ubrs;
export const tor = defaultSurface.tor;
export const ltor = defaultSurface.ltor;
export const lhaf = defaultSurface.lhaf;
export const thresholdProbFock = defaultSurface.thresholdProbFock;
export const thresholdProbGaussian = defaultSurface.thresholdProbGaussian;
