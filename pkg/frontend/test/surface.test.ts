import { describe, expect, it } from "vitest";

import { bindAll, brs, thresholdProbGaussian, ubrs } from "../src/index.js";

describe("bound surface", () => {
  it("bindAll exposes all eight functions", () => {
    const surface = bindAll();
    for (const name of [
      "permanent",
      "brs",
      "ubrs",
      "tor",
      "ltor",
      "lhaf",
      "thresholdProbFock",
      "thresholdProbGaussian",
    ] as const) {
      expect(typeof surface[name]).toBe("function");
    }
  });

  it("brs with zero environment equals ubrs", () => {
    const s = Math.SQRT1_2;
    const A = [
      [s, s],
      [s, -s],
    ];
    const zero = [
      [0, 0],
      [0, 0],
    ];
    const [reB, imB] = brs(A, zero);
    const [reU, imU] = ubrs(A);
    expect(Object.is(reB, reU)).toBe(true);
    expect(Object.is(imB, imU)).toBe(true);
  });

  it("a displaced single mode clicks with probability 1 - exp(-|beta|^2)", () => {
    const beta = 0.8;
    const sigma = [
      [1, 0],
      [0, 1],
    ];
    const alpha = [beta, beta];
    const click = thresholdProbGaussian(sigma, alpha, [1]);
    const dark = thresholdProbGaussian(sigma, alpha, [0]);
    expect(Math.abs(click - (1 - Math.exp(-beta * beta)))).toBeLessThan(1e-12);
    expect(Math.abs(click + dark - 1)).toBeLessThan(1e-12);
  });
});
