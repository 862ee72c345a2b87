import { pieSvg } from "./chart";
import { mapSnippetHtml } from "./map";
import type { Specimen } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtDimension(d: number | null): string {
  return d === null ? "undefined" : d.toFixed(5);
}

/** One specimen panel: name, the run's numbers, observer, the member
 * machines with how often each was selected, the selection pie and the
 * map snippet. */
export function renderPanel(spec: Specimen): string {
  const machines = spec.machines
    .map(
      (m, i) =>
        `<li><code>${escapeHtml(m.machine_id)}</code>` +
        ` = ${m.selection_count}` +
        `<pre class="machine-text">${escapeHtml(m.text.trim())}</pre></li>`
    )
    .join("");
  const counts = spec.machines.map((m) => m.selection_count);
  const chart =
    spec.n_steps > 0
      ? pieSvg(counts, spec.n_steps)
      : `<div class="chart-placeholder">no executed steps</div>`;
  return `
<article class="panel status-${spec.status}" data-id="${spec.id}">
  <header>
    <h2 class="fancy-name">${escapeHtml(spec.fancy_name)}</h2>
    <span class="status-badge">${spec.status.replace("_", " ")}</span>
  </header>
  <dl class="facts">
    <dt>dimension</dt><dd>${fmtDimension(spec.dimension)}</dd>
    <dt>N</dt><dd>${spec.n_steps}</dd>
    <dt>o2</dt><dd>${spec.o2_mean}</dd>
    <dt>observer</dt><dd>${escapeHtml(spec.observer)}</dd>
    <dt>found</dt><dd>${escapeHtml(spec.found_at)}</dd>
    <dt>seed</dt><dd>${spec.seed}</dd>
  </dl>
  <section class="selections">${chart}<ul class="machines">${machines}</ul></section>
  ${mapSnippetHtml(spec.location)}
  <footer class="actions">
    <button data-act="rename">rename</button>
    <button data-act="flag" ${spec.status !== "active" ? "disabled" : ""}>flag infinite</button>
    <button data-act="delete" ${spec.status === "deleted" ? "disabled" : ""}>delete</button>
  </footer>
</article>`;
}

export function renderGallery(specimens: Specimen[]): string {
  if (specimens.length === 0) {
    return `<p class="empty">no specimens match the current filter</p>`;
  }
  return specimens.map(renderPanel).join("\n");
}
