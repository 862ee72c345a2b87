/** Pie-style chart of per-machine selection counts, drawn locally as SVG.
 * Segment fractions are selection_count / N and always sum to 1. */

export interface PieSlice {
  index: number;
  fraction: number;
  path: string;
  color: string;
}

const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

export function sliceColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

export function segmentFractions(counts: number[], total: number): number[] {
  if (total <= 0) {
    throw new Error("chart needs a positive step total");
  }
  if (counts.some((c) => c < 0)) {
    throw new Error("selection counts cannot be negative");
  }
  return counts.map((c) => c / total);
}

function polar(cx: number, cy: number, r: number, angle: number): [number, number] {
  return [cx + r * Math.cos(angle), cy + r * Math.sin(angle)];
}

function arcPath(
  cx: number,
  cy: number,
  r: number,
  start: number,
  end: number
): string {
  const [x0, y0] = polar(cx, cy, r, start);
  const [x1, y1] = polar(cx, cy, r, end);
  const large = end - start > Math.PI ? 1 : 0;
  return (
    `M ${cx.toFixed(3)} ${cy.toFixed(3)} ` +
    `L ${x0.toFixed(3)} ${y0.toFixed(3)} ` +
    `A ${r} ${r} 0 ${large} 1 ${x1.toFixed(3)} ${y1.toFixed(3)} Z`
  );
}

export function pieSlices(
  counts: number[],
  total: number,
  cx = 60,
  cy = 60,
  r = 55
): PieSlice[] {
  const fractions = segmentFractions(counts, total);
  const slices: PieSlice[] = [];
  let angle = -Math.PI / 2;
  fractions.forEach((fraction, index) => {
    if (fraction <= 0) {
      return;
    }
    let path: string;
    if (fraction >= 1) {
      // a full disc cannot be one arc; draw two half circles
      path =
        arcPath(cx, cy, r, angle, angle + Math.PI) +
        " " +
        arcPath(cx, cy, r, angle + Math.PI, angle + 2 * Math.PI);
    } else {
      path = arcPath(cx, cy, r, angle, angle + fraction * 2 * Math.PI);
    }
    slices.push({ index, fraction, path, color: sliceColor(index) });
    angle += fraction * 2 * Math.PI;
  });
  return slices;
}

export function pieSvg(counts: number[], total: number, size = 120): string {
  const slices = pieSlices(counts, total, size / 2, size / 2, size / 2 - 5);
  const paths = slices
    .map(
      (s) =>
        `<path d="${s.path}" fill="${s.color}" data-index="${s.index}"` +
        ` data-fraction="${s.fraction}"><title>machine ${s.index + 1}: ` +
        `${(s.fraction * 100).toFixed(1)}%</title></path>`
    )
    .join("");
  return (
    `<svg class="pie" viewBox="0 0 ${size} ${size}" ` +
    `width="${size}" height="${size}" role="img">${paths}</svg>`
  );
}
