import { ApiClient, ApiError } from "./api";
import { GalleryState } from "./gallery";
import { renderGallery } from "./panel";
import { renderStatsSvg } from "./stats";
import type { SortKey, SpecimenStatus } from "./types";

/** Browser bootstrap: settings pane, gallery grid, curation buttons and the
 * stats view. The server stays the single source of truth; the list is
 * re-fetched after every confirmed change and on a timer. */

const $ = <T extends HTMLElement>(sel: string): T => {
  const el = document.querySelector(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el as T;
};

function settings() {
  return {
    baseUrl:
      localStorage.getItem("tmbreed.baseUrl") ?? "http://127.0.0.1:8700",
    token: localStorage.getItem("tmbreed.token") ?? "",
  };
}

function bindSettings(onChange: () => void) {
  const base = $<HTMLInputElement>("#setting-base-url");
  const token = $<HTMLInputElement>("#setting-token");
  const saved = settings();
  base.value = saved.baseUrl;
  token.value = saved.token;
  $("#settings-save").addEventListener("click", () => {
    localStorage.setItem("tmbreed.baseUrl", base.value.trim());
    localStorage.setItem("tmbreed.token", token.value);
    onChange();
  });
}

function showError(message: string) {
  const box = $("#error-box");
  box.textContent = message;
  box.classList.remove("hidden");
  setTimeout(() => box.classList.add("hidden"), 6000);
}

async function main() {
  let client = new ApiClient(settings().baseUrl, settings().token);
  let state = new GalleryState(client);

  const redraw = () => {
    $("#gallery").innerHTML = renderGallery(state.visible());
  };

  const refresh = async () => {
    try {
      await state.refresh();
      redraw();
      $("#stats").innerHTML = renderStatsSvg(await client.stats());
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
    }
  };

  bindSettings(() => {
    client = new ApiClient(settings().baseUrl, settings().token);
    state = new GalleryState(client);
    void refresh();
  });

  $<HTMLSelectElement>("#sort-key").addEventListener("change", (ev) => {
    state.sortKey = (ev.target as HTMLSelectElement).value as SortKey;
    redraw();
  });
  $<HTMLSelectElement>("#status-filter").addEventListener("change", (ev) => {
    state.statusFilter = (ev.target as HTMLSelectElement).value as
      | SpecimenStatus
      | "all";
    redraw();
  });
  $("#refresh").addEventListener("click", () => void refresh());

  // Curation actions are delegated from the gallery grid; every one is
  // optimistic and rolls back if the server rejects it.
  $("#gallery").addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement;
    const panel = target.closest(".panel") as HTMLElement | null;
    if (!panel || !target.dataset.act) return;
    const id = panel.dataset.id!;
    try {
      if (target.dataset.act === "rename") {
        const name = prompt("new fancy name");
        if (name) await state.rename(id, name);
      } else if (target.dataset.act === "flag") {
        await state.flagInfinite(id);
      } else if (target.dataset.act === "delete") {
        await state.deleteSpecimen(id);
      }
      redraw();
    } catch (err) {
      redraw(); // state already rolled back
      if (err instanceof ApiError && err.status === 403) {
        showError("curator token missing or wrong; set it in settings");
      } else {
        showError(err instanceof Error ? err.message : String(err));
      }
    }
  });

  await refresh();
  setInterval(() => void refresh(), 30_000);
}

document.addEventListener("DOMContentLoaded", () => void main());
