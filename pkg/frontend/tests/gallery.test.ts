import { describe, expect, it } from "vitest";

import type { ApiClient } from "../src/api";
import { GalleryState, filterByStatus, sortSpecimens } from "../src/gallery";
import type { Specimen } from "../src/types";

function spec(partial: Partial<Specimen> & { id: string }): Specimen {
  return {
    fancy_name: "Testus Specimus",
    dimension: null,
    n_steps: 6,
    o2_mean: 2,
    o2_floor: 2,
    observer: "tester",
    location: null,
    machines: [],
    seed: 1,
    found_at: "2026-01-01T00:00:00+00:00",
    status: "active",
    ...partial,
  };
}

describe("sortSpecimens", () => {
  it("ranks absent dimension below every defined one", () => {
    const specimens = [
      spec({ id: "a", dimension: 1.6 }),
      spec({ id: "b", dimension: null }),
      spec({ id: "c", dimension: 2.6 }),
    ];
    const ordered = sortSpecimens(specimens, "dimension", true);
    expect(ordered.map((s) => s.dimension)).toEqual([2.6, 1.6, null]);
  });

  it("sorts by steps and date too", () => {
    const specimens = [
      spec({ id: "a", n_steps: 5, found_at: "2026-02-01T00:00:00+00:00" }),
      spec({ id: "b", n_steps: 50, found_at: "2026-01-01T00:00:00+00:00" }),
    ];
    expect(sortSpecimens(specimens, "n_steps", true)[0].id).toBe("b");
    expect(sortSpecimens(specimens, "found_at", true)[0].id).toBe("a");
  });

  it("does not mutate its input", () => {
    const specimens = [spec({ id: "a" }), spec({ id: "b" })];
    sortSpecimens(specimens, "dimension", true);
    expect(specimens.map((s) => s.id)).toEqual(["a", "b"]);
  });
});

describe("filterByStatus", () => {
  it("filters and passes through on all", () => {
    const specimens = [
      spec({ id: "a" }),
      spec({ id: "b", status: "deleted" }),
    ];
    expect(filterByStatus(specimens, "active").map((s) => s.id)).toEqual(["a"]);
    expect(filterByStatus(specimens, "all")).toHaveLength(2);
  });
});

describe("GalleryState optimistic curation", () => {
  function makeState(client: Partial<ApiClient>): GalleryState {
    const state = new GalleryState(client as ApiClient);
    state.specimens = [spec({ id: "a", fancy_name: "Before Us" })];
    state.statusFilter = "all";
    return state;
  }

  it("applies the change locally and keeps the server document", async () => {
    const state = makeState({
      rename: async (_id, name) => spec({ id: "a", fancy_name: name }),
    });
    await state.rename("a", "After Um");
    expect(state.specimens[0].fancy_name).toBe("After Um");
  });

  it("reverts when the server rejects", async () => {
    const state = makeState({
      rename: async () => {
        throw new Error("403 curator token required");
      },
    });
    await expect(state.rename("a", "Sneaky Um")).rejects.toThrow(/403/);
    expect(state.specimens[0].fancy_name).toBe("Before Us");
  });

  it("reverts a failed delete", async () => {
    const state = makeState({
      deleteSpecimen: async () => {
        throw new Error("409 invalid transition");
      },
    });
    await expect(state.deleteSpecimen("a")).rejects.toThrow(/409/);
    expect(state.specimens[0].status).toBe("active");
  });
});
