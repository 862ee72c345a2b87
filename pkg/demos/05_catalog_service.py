"""The specimen catalog and its HTTP service, end to end in one process.

Specimens are verified breed runs with collectible names. The service
re-runs every submission from its (machines, seed) record and refuses
anything it cannot reproduce, so the catalog only ever holds runs that
replay. Curators rename specimens, flag them infinite, and delete them;
deletion is a tombstone, the document stays on disk.
"""

import tempfile

from fastapi.testclient import TestClient

from tmbreed import Breed, CatalogStore, SearchParams, orchestrate, parse_machine
from tmbreed.breeder import generate_pool
from tmbreed.client import GameClient, run_worker, submission_from_run
from tmbreed.service import create_app

champion = parse_machine(
    "1 0 -> 1 R 2\n1 1 -> 1 L 2\n2 0 -> 1 L 1\n2 1 -> 1 R 0", name="bb2")

root = tempfile.mkdtemp(prefix="tmbreed-demo-")
store = CatalogStore(root)
pool = generate_pool(2, 20, 500, seed=1, curated=[champion])
app = create_app(store, pool=pool,
                 params=SearchParams(population_size=10, generations=4,
                                     runs_per_fitness=2, breed_size_min=2,
                                     breed_size_max=3, run_budget=5000),
                 curator_token="demo-token", master_seed=5)
client = GameClient("", http=TestClient(app), curator_token="demo-token")
print("catalog at", root)

# ---------------------------------------------------------------------------
# Submit a verified run
# ---------------------------------------------------------------------------

breed = Breed([champion.id] * 3, {champion.id: champion})
run = orchestrate(breed, seed=42, max_steps=1000)
doc = submission_from_run(run, breed, observer="demo-observer",
                          location=(47.53, 21.62))
accepted = client.submit_specimen(doc)
spec = accepted["specimen"]
print(f"\naccepted specimen {spec['id']}: \"{spec['fancy_name']}\", "
      f"N={spec['n_steps']}, dimension={spec['dimension']:.4f}")

# Tampering does not get past the replay check:
doc_bad = dict(doc)
doc_bad["n_steps"] = 7
doc_bad["selection_counts"] = [3, 3, 1]
try:
    client.submit_specimen(doc_bad)
except Exception as exc:
    print("tampered claim rejected:", exc)

# ---------------------------------------------------------------------------
# A volunteer worker cycle against the same service
# ---------------------------------------------------------------------------

outcome = run_worker(client, observer="volunteer-7", location=(47.5, 21.6))
print(f"\nworker finished task {outcome['task_id']}: "
      f"{len(outcome['accepted'])} specimens accepted")

# ---------------------------------------------------------------------------
# Browsing and curating
# ---------------------------------------------------------------------------

page = client.list_specimens(sort="dimension", order="desc")
print(f"\ncatalog now holds {page['total']} specimens:")
for s in page["specimens"]:
    dim = "n/a" if s["dimension"] is None else f"{s['dimension']:.4f}"
    print(f"  {s['fancy_name']:24s} dim={dim:8s} N={s['n_steps']:6d} "
          f"by {s['observer']} [{s['status']}]")

sid = spec["id"]
client.curate(sid, "rename", fancy_name="Turingus Demonstratus")
print("\nrenamed:", client.get_specimen(sid)["fancy_name"])

stats = client.stats()
print("stats over active specimens: IQ table", stats["iq"])

client.curate(sid, "delete")
print("after deletion it leaves the active gallery:",
      all(s["id"] != sid
          for s in client.list_specimens(status="active")["specimens"]))
print("but survives as a tombstone:",
      client.get_specimen(sid, include_deleted=True)["status"])
