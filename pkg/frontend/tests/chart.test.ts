import { describe, expect, it } from "vitest";

import { pieSlices, pieSvg, segmentFractions } from "../src/chart";

describe("segmentFractions", () => {
  it("equals selection_count / N and sums to 1", () => {
    const fractions = segmentFractions([3, 2, 1], 6);
    expect(fractions).toEqual([0.5, 1 / 3, 1 / 6]);
    const sum = fractions.reduce((a, b) => a + b, 0);
    expect(sum).toBeCloseTo(1, 12);
  });

  it("gives equal thirds for equal counts", () => {
    expect(segmentFractions([2, 2, 2], 6)).toEqual([1 / 3, 1 / 3, 1 / 3]);
  });

  it("keeps zero segments at zero", () => {
    expect(segmentFractions([6, 0], 6)).toEqual([1, 0]);
  });

  it("rejects a non-positive total", () => {
    expect(() => segmentFractions([1], 0)).toThrow(/positive/);
  });

  it("rejects negative counts", () => {
    expect(() => segmentFractions([-1, 7], 6)).toThrow(/negative/);
  });
});

describe("pieSlices", () => {
  it("emits one slice per positive count, fractions summing to 1", () => {
    const slices = pieSlices([2, 2, 2], 6);
    expect(slices).toHaveLength(3);
    const sum = slices.reduce((a, s) => a + s.fraction, 0);
    expect(sum).toBeCloseTo(1, 12);
    for (const slice of slices) {
      expect(slice.fraction).toBeCloseTo(1 / 3, 12);
      expect(slice.path).toMatch(/^M /);
    }
  });

  it("drops zero-count members from the drawing but keeps indices", () => {
    const slices = pieSlices([4, 0, 2], 6);
    expect(slices.map((s) => s.index)).toEqual([0, 2]);
  });

  it("renders a lone member as a full disc", () => {
    const slices = pieSlices([6], 6);
    expect(slices).toHaveLength(1);
    expect(slices[0].fraction).toBe(1);
    // two arc commands stitched together
    expect(slices[0].path.match(/A /g)?.length).toBe(2);
  });
});

describe("pieSvg", () => {
  it("carries the fractions as data attributes", () => {
    const svg = pieSvg([3, 3], 6);
    const matches = [...svg.matchAll(/data-fraction="([0-9.]+)"/g)];
    const sum = matches.reduce((a, m) => a + Number(m[1]), 0);
    expect(sum).toBeCloseTo(1, 9);
  });
});
