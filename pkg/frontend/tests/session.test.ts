/** Curation-session equivalence, checked against the real catalog service.
 *
 * Two fresh services are seeded with the same specimens. The gallery's
 * scripted session (rename, flag, delete through the client) runs against
 * one; equivalent direct API calls run against the other. The final
 * catalog states must agree field for field (timestamps aside, the two
 * catalogs were created at different moments).
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { ApiClient } from "../src/api";
import { runCurationSession, type CurationStep } from "../src/gallery";

const TOKEN = "gallery-test-token";

interface Service {
  proc: ChildProcess;
  baseUrl: string;
}

async function startService(portHint: number): Promise<Service> {
  const catalog = mkdtempSync(join(tmpdir(), "tmbreed-gallery-"));
  for (let attempt = 0; attempt < 5; attempt++) {
    const port = portHint + attempt * 37 + Math.floor(Math.random() * 20);
    const proc = spawn(
      "python3",
      ["-m", "tmbreed.cli", "serve", "--catalog", catalog, "--port",
        String(port), "--curator-token", TOKEN, "--seed", "1"],
      { stdio: "ignore" }
    );
    const baseUrl = `http://127.0.0.1:${port}`;
    for (let poll = 0; poll < 40; poll++) {
      if (proc.exitCode !== null) break; // port taken, try another
      try {
        const resp = await fetch(`${baseUrl}/api/stats`);
        if (resp.ok) return { proc, baseUrl };
      } catch {
        // not up yet
      }
      await new Promise((res) => setTimeout(res, 250));
    }
    proc.kill();
  }
  throw new Error("could not start the catalog service");
}

// Singleton submissions are deterministic: one member proposes every step,
// so the counts below hold for any seed and can be hard-coded here.
const BB2 = "1 0 -> 1 R 2\n1 1 -> 1 L 2\n2 0 -> 1 L 1\n2 1 -> 1 R 0\n";
const BB3 = "1 0 -> 1 R 2\n1 1 -> 1 R 0\n2 0 -> 1 L 2\n2 1 -> 0 R 3\n" +
  "3 0 -> 1 L 3\n3 1 -> 1 L 1\n";
const LOOP = "1 0 -> 0 R 1\n";

function seedDocs(): object[] {
  return [
    {
      machines: [{ name: "bb2", text: BB2 }],
      seed: 11,
      n_steps: 6,
      selection_counts: [6],
      termination: "all-resolved",
      observer: "seeder",
      location: { latitude: 47.53, longitude: 21.62 },
    },
    {
      machines: [{ name: "bb3", text: BB3 }],
      seed: 12,
      n_steps: 21,
      selection_counts: [21],
      termination: "all-resolved",
      observer: "seeder",
    },
    {
      machines: [{ name: "loop", text: LOOP }],
      seed: 13,
      n_steps: 50,
      selection_counts: [50],
      termination: "budget-exceeded",
      observer: "seeder",
    },
  ];
}

async function seed(baseUrl: string): Promise<string[]> {
  const ids: string[] = [];
  for (const doc of seedDocs()) {
    const resp = await fetch(`${baseUrl}/api/specimens`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    const body = await resp.json();
    expect(body.ok).toBe(true);
    ids.push(body.id);
  }
  return ids;
}

interface Snapshot {
  id: string;
  fancy_name: string;
  status: string;
  n_steps: number;
  dimension: number | null;
}

async function snapshot(baseUrl: string): Promise<Snapshot[]> {
  const resp = await fetch(
    `${baseUrl}/api/specimens?include_deleted=true&sort=n_steps&order=desc&limit=100`
  );
  const body = await resp.json();
  return body.specimens
    .map((s: any) => ({
      id: s.id,
      fancy_name: s.fancy_name,
      status: s.status,
      n_steps: s.n_steps,
      dimension: s.dimension,
    }))
    .sort((a: Snapshot, b: Snapshot) => (a.id < b.id ? -1 : 1));
}

describe("scripted curation equals direct API calls", () => {
  let a: Service;
  let b: Service;

  beforeAll(async () => {
    a = await startService(8820);
    b = await startService(9240);
  }, 60_000);

  afterAll(() => {
    a?.proc.kill();
    b?.proc.kill();
  });

  it("ends both catalogs in the same state", async () => {
    const idsA = await seed(a.baseUrl);
    const idsB = await seed(b.baseUrl);
    expect(idsA).toEqual(idsB); // ids are content hashes

    const [bb2Id, bb3Id, loopId] = idsA;
    const steps: CurationStep[] = [
      { action: "rename", id: bb2Id, fancy_name: "Turingus Curatus" },
      { action: "flag_infinite", id: bb3Id },
      { action: "delete", id: loopId },
    ];

    // session through the gallery client against service A
    const client = new ApiClient(a.baseUrl, TOKEN);
    await runCurationSession(client, steps);

    // equivalent direct calls against service B
    const curate = (id: string, payload: object) =>
      fetch(`${b.baseUrl}/api/specimens/${id}`, {
        method: "PATCH",
        headers: {
          "Content-Type": "application/json",
          "X-Curator-Token": TOKEN,
        },
        body: JSON.stringify(payload),
      });
    await curate(bb2Id, { action: "rename", fancy_name: "Turingus Curatus" });
    await curate(bb3Id, { action: "flag_infinite" });
    await fetch(`${b.baseUrl}/api/specimens/${loopId}`, {
      method: "DELETE",
      headers: { "X-Curator-Token": TOKEN },
    });

    const stateA = await snapshot(a.baseUrl);
    const stateB = await snapshot(b.baseUrl);
    expect(stateA).toEqual(stateB);

    // the session did what it said
    const byId = new Map(stateA.map((s) => [s.id, s]));
    expect(byId.get(bb2Id)?.fancy_name).toBe("Turingus Curatus");
    expect(byId.get(bb3Id)?.status).toBe("flagged_infinite");
    expect(byId.get(loopId)?.status).toBe("deleted");

    // deleted specimens leave the active gallery immediately
    const active = await client.listSpecimens({ status: "active" });
    expect(active.specimens.map((s) => s.id)).not.toContain(loopId);

    // stats agree between the two services as well
    const statsA = await client.stats();
    const statsB = await new ApiClient(b.baseUrl, TOKEN).stats();
    expect(statsA).toEqual(statsB);
  }, 60_000);

  it("rejects curation without the token and the UI state survives", async () => {
    const anon = new ApiClient(a.baseUrl, "");
    const page = await anon.listSpecimens({ includeDeleted: true });
    expect(page.total).toBeGreaterThan(0);
    await expect(
      anon.rename(page.specimens[0].id, "Sneakus Renamus")
    ).rejects.toMatchObject({ status: 403 });
  }, 30_000);
});
