import type { ApiClient } from "./api";
import type { SortKey, Specimen, SpecimenStatus } from "./types";

/** Sorting and filtering rules mirror the catalog: specimens without a
 * dimension rank below every defined dimension. */

export function sortSpecimens(
  specimens: Specimen[],
  key: SortKey,
  descending = true
): Specimen[] {
  const value = (s: Specimen): number | string => {
    if (key === "dimension") {
      return s.dimension === null ? -Infinity : s.dimension;
    }
    if (key === "n_steps") {
      return s.n_steps;
    }
    return s.found_at;
  };
  const sorted = [...specimens].sort((a, b) => {
    const va = value(a);
    const vb = value(b);
    if (va < vb) return -1;
    if (va > vb) return 1;
    return a.id < b.id ? -1 : a.id > b.id ? 1 : 0;
  });
  return descending ? sorted.reverse() : sorted;
}

export function filterByStatus(
  specimens: Specimen[],
  status: SpecimenStatus | "all"
): Specimen[] {
  if (status === "all") {
    return specimens;
  }
  return specimens.filter((s) => s.status === status);
}

/** Gallery state with optimistic curation: the change lands in the local
 * list immediately and is rolled back if the server rejects it. */
export class GalleryState {
  specimens: Specimen[] = [];
  sortKey: SortKey = "dimension";
  descending = true;
  statusFilter: SpecimenStatus | "all" = "active";

  constructor(private client: ApiClient) {}

  visible(): Specimen[] {
    return sortSpecimens(
      filterByStatus(this.specimens, this.statusFilter),
      this.sortKey,
      this.descending
    );
  }

  async refresh(): Promise<void> {
    const page = await this.client.listSpecimens({
      includeDeleted: true,
      limit: 1000,
    });
    this.specimens = page.specimens;
  }

  private replace(updated: Specimen): void {
    this.specimens = this.specimens.map((s) =>
      s.id === updated.id ? updated : s
    );
  }

  private async optimistic(
    id: string,
    patch: Partial<Specimen>,
    call: () => Promise<Specimen>
  ): Promise<Specimen> {
    const before = this.specimens.find((s) => s.id === id);
    if (!before) {
      throw new Error(`specimen ${id} is not loaded`);
    }
    this.replace({ ...before, ...patch });
    try {
      const confirmed = await call();
      this.replace(confirmed);
      return confirmed;
    } catch (err) {
      this.replace(before); // server said no; put things back
      throw err;
    }
  }

  rename(id: string, fancyName: string): Promise<Specimen> {
    return this.optimistic(id, { fancy_name: fancyName }, () =>
      this.client.rename(id, fancyName)
    );
  }

  flagInfinite(id: string): Promise<Specimen> {
    return this.optimistic(id, { status: "flagged_infinite" }, () =>
      this.client.flagInfinite(id)
    );
  }

  deleteSpecimen(id: string): Promise<Specimen> {
    return this.optimistic(id, { status: "deleted" }, () =>
      this.client.deleteSpecimen(id)
    );
  }
}

export type CurationStep =
  | { action: "rename"; id: string; fancy_name: string }
  | { action: "flag_infinite"; id: string }
  | { action: "delete"; id: string };

/** Replay a scripted curation session through the service endpoints.
 * The same steps applied to the same catalog always end in the same
 * catalog state, which is what the acceptance check compares. */
export async function runCurationSession(
  client: ApiClient,
  steps: CurationStep[]
): Promise<Specimen[]> {
  const results: Specimen[] = [];
  for (const step of steps) {
    if (step.action === "rename") {
      results.push(await client.rename(step.id, step.fancy_name));
    } else if (step.action === "flag_infinite") {
      results.push(await client.flagInfinite(step.id));
    } else {
      results.push(await client.deleteSpecimen(step.id));
    }
  }
  return results;
}
