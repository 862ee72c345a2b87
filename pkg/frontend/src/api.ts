import type { Specimen, SpecimenPage, SortKey, Stats } from "./types";

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
    public code: string = "unknown"
  ) {
    super(message);
  }
}

export interface ListOptions {
  status?: string;
  sort?: SortKey;
  order?: "asc" | "desc";
  limit?: number;
  offset?: number;
  includeDeleted?: boolean;
}

type FetchLike = typeof fetch;

/** Thin client over the catalog service; all catalog mutations go through
 * these endpoints and nothing else. */
export class ApiClient {
  constructor(
    public baseUrl: string,
    public curatorToken: string = "",
    private fetchImpl: FetchLike = fetch
  ) {}

  private async request(path: string, init: RequestInit = {}): Promise<any> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    let body: any;
    try {
      body = await resp.json();
    } catch {
      throw new ApiError(`non-JSON response (HTTP ${resp.status})`, resp.status);
    }
    if (!resp.ok || body.ok === false) {
      const err = body?.error ?? {};
      throw new ApiError(
        err.message ?? `HTTP ${resp.status}`,
        resp.status,
        err.code ?? "unknown"
      );
    }
    return body;
  }

  private curateHeaders(): Record<string, string> {
    return {
      "Content-Type": "application/json",
      "X-Curator-Token": this.curatorToken,
    };
  }

  async listSpecimens(opts: ListOptions = {}): Promise<SpecimenPage> {
    const params = new URLSearchParams();
    if (opts.status) params.set("status", opts.status);
    if (opts.sort) params.set("sort", opts.sort);
    if (opts.order) params.set("order", opts.order);
    if (opts.limit !== undefined) params.set("limit", String(opts.limit));
    if (opts.offset !== undefined) params.set("offset", String(opts.offset));
    if (opts.includeDeleted) params.set("include_deleted", "true");
    const query = params.toString();
    return this.request(`/api/specimens${query ? `?${query}` : ""}`);
  }

  async getSpecimen(id: string, includeDeleted = false): Promise<Specimen> {
    const suffix = includeDeleted ? "?include_deleted=true" : "";
    const body = await this.request(`/api/specimens/${id}${suffix}`);
    return body.specimen;
  }

  private async curate(id: string, payload: object): Promise<Specimen> {
    const body = await this.request(`/api/specimens/${id}`, {
      method: "PATCH",
      headers: this.curateHeaders(),
      body: JSON.stringify(payload),
    });
    return body.specimen;
  }

  rename(id: string, fancyName: string): Promise<Specimen> {
    return this.curate(id, { action: "rename", fancy_name: fancyName });
  }

  flagInfinite(id: string): Promise<Specimen> {
    return this.curate(id, { action: "flag_infinite" });
  }

  deleteSpecimen(id: string): Promise<Specimen> {
    return this.curate(id, { action: "delete" });
  }

  async stats(): Promise<Stats> {
    return this.request("/api/stats");
  }
}
