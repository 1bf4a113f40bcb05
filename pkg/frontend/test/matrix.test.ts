import { describe, expect, it } from "vitest";

import { BoundMatrix, FormatError, matrixToWire, splitScalar, vectorToWire } from "../src/index.js";

// doubles that expose any formatting or precision slip at the boundary
const AWKWARD = [
  0.1,
  1 / 3,
  0.1 + 0.2,
  123456.78901234567,
  1.1e-308,
  Number.MIN_VALUE,
  Number.MAX_VALUE,
  1e300,
  -2.718281828459045,
];

describe("BoundMatrix", () => {
  it("copies by default", () => {
    const source = [
      [1, 2],
      [3, 4],
    ];
    const m = BoundMatrix.fromRows(source);
    source[0]![0] = 99;
    expect(m.at(0, 0)).toEqual([1, 0]);
  });

  it("view wraps the buffer without copying", () => {
    const buf = new Float64Array([1, 0, 2, 0, 3, 0, 4, 0]);
    const m = BoundMatrix.view(2, 2, buf);
    buf[0] = 7;
    expect(m.at(0, 0)).toEqual([7, 0]);
  });

  it("rejects ragged rows", () => {
    expect(() => BoundMatrix.fromRows([[1, 2], [3]])).toThrow(FormatError);
  });

  it("rejects a buffer of the wrong size", () => {
    expect(() => BoundMatrix.view(2, 2, new Float64Array(6))).toThrow(FormatError);
  });

  it("round-trips awkward doubles exactly", () => {
    const rows = [AWKWARD, AWKWARD.map((x) => -x)];
    const m = BoundMatrix.fromRows(rows);
    const back = m.toRows();
    for (let i = 0; i < 2; i++) {
      for (let j = 0; j < AWKWARD.length; j++) {
        expect(Object.is(back[i]![j]![0], rows[i]![j])).toBe(true);
        expect(Object.is(back[i]![j]![1], 0)).toBe(true);
      }
    }
  });

  it("keeps complex pairs intact", () => {
    const m = BoundMatrix.fromRows([[[1.5, -2.5]], [[0, 1e-12]]]);
    expect(m.at(0, 0)).toEqual([1.5, -2.5]);
    expect(m.at(1, 0)).toEqual([0, 1e-12]);
  });

  it("checks index bounds", () => {
    const m = BoundMatrix.fromRows([[1]]);
    expect(() => m.at(0, 1)).toThrow(FormatError);
    expect(() => m.at(-1, 0)).toThrow(FormatError);
  });
});

describe("scalar and vector conversion", () => {
  it("treats bare numbers as reals", () => {
    expect(splitScalar(2.5)).toEqual([2.5, 0]);
  });

  it("passes pairs through", () => {
    expect(splitScalar([1.25, -0.5])).toEqual([1.25, -0.5]);
  });

  it("rejects malformed scalars", () => {
    expect(() => splitScalar([1, 2, 3] as never)).toThrow(FormatError);
    expect(() => splitScalar("1" as never)).toThrow(FormatError);
  });

  it("converts vectors element by element", () => {
    expect(vectorToWire([1, [2, 3]])).toEqual([
      [1, 0],
      [2, 3],
    ]);
  });

  it("accepts an existing BoundMatrix without re-wrapping", () => {
    const m = BoundMatrix.view(1, 2, new Float64Array([1, 2, 3, 4]));
    expect(matrixToWire(m)).toEqual([
      [
        [1, 2],
        [3, 4],
      ],
    ]);
  });
});
