import type { GeoLocation } from "./types";

/** Embeddable open tile view around the find location. Panels without a
 * location get a placeholder, never a default coordinate. */

const SPAN = 0.02;

export function osmEmbedUrl(loc: GeoLocation): string {
  const left = (loc.longitude - SPAN).toFixed(5);
  const right = (loc.longitude + SPAN).toFixed(5);
  const bottom = (loc.latitude - SPAN).toFixed(5);
  const top = (loc.latitude + SPAN).toFixed(5);
  const marker = `${loc.latitude.toFixed(5)},${loc.longitude.toFixed(5)}`;
  return (
    "https://www.openstreetmap.org/export/embed.html" +
    `?bbox=${left},${bottom},${right},${top}&layer=mapnik&marker=${marker}`
  );
}

export function mapSnippetHtml(loc: GeoLocation | null): string {
  if (loc === null) {
    return `<div class="map-placeholder">no location recorded</div>`;
  }
  const label = `${loc.latitude.toFixed(4)}, ${loc.longitude.toFixed(4)}`;
  return (
    `<div class="map-snippet">` +
    `<iframe src="${osmEmbedUrl(loc)}" loading="lazy" ` +
    `title="found at ${label}"></iframe>` +
    `<span class="map-coords">${label}</span></div>`
  );
}
