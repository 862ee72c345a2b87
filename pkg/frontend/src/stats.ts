import type { Stats } from "./types";

/** IQ scatter in log-log coordinates with the fitted power-law line. */
export function renderStatsSvg(stats: Stats, size = 360): string {
  const points = Object.entries(stats.iq)
    .map(([z, n]) => ({ z: Number(z), n }))
    .filter((p) => p.z >= 2);
  if (stats.insufficient_data || points.length === 0) {
    return `<p class="empty">not enough data for IQ/EQ statistics yet</p>`;
  }
  const xs = points.map((p) => Math.log(p.z));
  const ys = points.map((p) => Math.log(p.n));
  const pad = 30;
  const xMin = Math.min(...xs) - 0.2;
  const xMax = Math.max(...xs) + 0.2;
  const yMin = Math.min(...ys) - 0.2;
  const yMax = Math.max(...ys) + 0.2;
  const sx = (x: number) =>
    pad + ((x - xMin) / (xMax - xMin || 1)) * (size - 2 * pad);
  const sy = (y: number) =>
    size - pad - ((y - yMin) / (yMax - yMin || 1)) * (size - 2 * pad);
  const dots = points
    .map(
      (p) =>
        `<circle cx="${sx(Math.log(p.z)).toFixed(1)}" ` +
        `cy="${sy(Math.log(p.n)).toFixed(1)}" r="4" class="iq-dot">` +
        `<title>IQ(${p.z}) = ${p.n}</title></circle>`
    )
    .join("");
  let line = "";
  if (stats.fit) {
    const y0 = stats.fit.intercept + stats.fit.d_hat * xMin;
    const y1 = stats.fit.intercept + stats.fit.d_hat * xMax;
    line =
      `<line x1="${sx(xMin).toFixed(1)}" y1="${sy(y0).toFixed(1)}" ` +
      `x2="${sx(xMax).toFixed(1)}" y2="${sy(y1).toFixed(1)}" class="fit-line"/>`;
  }
  const caption = stats.fit
    ? `D = ${stats.fit.d_hat.toFixed(4)} over ${stats.fit.point_count} points`
    : "no fit (needs two table points with z >= 2)";
  return (
    `<figure class="stats-view">` +
    `<svg viewBox="0 0 ${size} ${size}" width="${size}" height="${size}">` +
    `<rect x="${pad}" y="${pad}" width="${size - 2 * pad}" ` +
    `height="${size - 2 * pad}" class="plot-area"/>` +
    `${line}${dots}</svg>` +
    `<figcaption>ln IQ against ln z; ${caption}</figcaption></figure>`
  );
}
