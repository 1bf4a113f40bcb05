import { FormatError } from "./errors.js";
import type { Complex, ComplexLike, MatrixLike, VectorLike } from "./types.js";

/**
 * A contiguous complex array with shape metadata, the boundary type handed
 * to the core. Storage is a row-major Float64Array with interleaved real
 * and imaginary parts, so entry (i, j) lives at offset 2*(i*cols + j).
 *
 * Constructors copy by default. `BoundMatrix.view` wraps a caller-owned
 * buffer without copying; that is unsafe if the caller mutates the buffer
 * while a call is in flight, and is offered only for large inputs where
 * the copy matters.
 */
export class BoundMatrix {
  readonly rows: number;
  readonly cols: number;
  readonly data: Float64Array;

  private constructor(rows: number, cols: number, data: Float64Array) {
    if (!Number.isInteger(rows) || !Number.isInteger(cols) || rows < 0 || cols < 0) {
      throw new FormatError(`invalid shape (${rows}, ${cols})`);
    }
    if (data.length !== 2 * rows * cols) {
      throw new FormatError(
        `buffer holds ${data.length} doubles, shape (${rows}, ${cols}) needs ${2 * rows * cols}`,
      );
    }
    this.rows = rows;
    this.cols = cols;
    this.data = data;
  }

  /** Build from nested rows, copying every entry. Rows must be rectangular. */
  static fromRows(rows: MatrixLike): BoundMatrix {
    const nRows = rows.length;
    const nCols = nRows > 0 ? rows[0]!.length : 0;
    const data = new Float64Array(2 * nRows * nCols);
    for (let i = 0; i < nRows; i++) {
      const row = rows[i]!;
      if (row.length !== nCols) {
        throw new FormatError(`row ${i} has length ${row.length}, expected ${nCols}`);
      }
      for (let j = 0; j < nCols; j++) {
        const [re, im] = splitScalar(row[j]!);
        data[2 * (i * nCols + j)] = re;
        data[2 * (i * nCols + j) + 1] = im;
      }
    }
    return new BoundMatrix(nRows, nCols, data);
  }

  /**
   * Wrap an interleaved buffer without copying. Unsafe: the matrix aliases
   * the caller's memory, so concurrent mutation corrupts the payload.
   */
  static view(rows: number, cols: number, data: Float64Array): BoundMatrix {
    return new BoundMatrix(rows, cols, data);
  }

  /** Entry (i, j) as a `[re, im]` pair. */
  at(i: number, j: number): Complex {
    if (i < 0 || i >= this.rows || j < 0 || j >= this.cols) {
      throw new FormatError(`index (${i}, ${j}) outside shape (${this.rows}, ${this.cols})`);
    }
    const k = 2 * (i * this.cols + j);
    return [this.data[k]!, this.data[k + 1]!];
  }

  /** Nested `[re, im]` rows, the wire form of the matrix. */
  toRows(): Complex[][] {
    const out: Complex[][] = [];
    for (let i = 0; i < this.rows; i++) {
      const row: Complex[] = [];
      for (let j = 0; j < this.cols; j++) {
        row.push(this.at(i, j));
      }
      out.push(row);
    }
    return out;
  }
}

/** Split a scalar into its `[re, im]` parts, accepting bare reals. */
export function splitScalar(value: ComplexLike): Complex {
  if (typeof value === "number") {
    return [value, 0];
  }
  if (Array.isArray(value) && value.length === 2
      && typeof value[0] === "number" && typeof value[1] === "number") {
    return [value[0], value[1]];
  }
  throw new FormatError(`scalar must be a number or [re, im] pair, got ${JSON.stringify(value)}`);
}

/** Wire form of any accepted matrix argument (copying unless given a view). */
export function matrixToWire(value: MatrixLike | BoundMatrix): Complex[][] {
  const bound = value instanceof BoundMatrix ? value : BoundMatrix.fromRows(value);
  return bound.toRows();
}

/** Wire form of a vector argument. */
export function vectorToWire(value: VectorLike): Complex[] {
  return value.map(splitScalar);
}
