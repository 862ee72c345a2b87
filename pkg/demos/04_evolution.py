"""Evolving breeds that maximize their dimension.

The search is elitist and mutation-only: the best breeds of each generation
survive untouched, the rest are replaced by elites with one member added,
dropped or swapped. Fitness is the best dimension over a few seeded runs;
breeds none of whose runs terminate are flagged infinite and sink to the
bottom of the ranking (but are reported, curators delete those).
"""

import math

from tmbreed import SearchParams, evolve, orchestrate
from tmbreed.breeder import generate_pool, load_champions
from tmbreed.machine import run_single

# ---------------------------------------------------------------------------
# Pool and parameters
# ---------------------------------------------------------------------------

pool = generate_pool(n_states=2, target_count=120, budget=500, seed=99,
                     curated=load_champions()[:2])
params = SearchParams(
    population_size=40,
    generations=25,
    runs_per_fitness=3,
    breed_size_min=2,
    breed_size_max=5,
    run_budget=20_000,
    master_seed=4,
)
print(f"searching {params.generations} generations of "
      f"{params.population_size} breeds over a pool of {len(pool.entries)}")

# ---------------------------------------------------------------------------
# Run the search
# ---------------------------------------------------------------------------

report = evolve(pool, params)
print("\ngeneration history (best / mean fitness):")
for gen, (best, mean) in enumerate(report.history):
    if gen % 5 == 0 or gen == len(report.history) - 1:
        b = "flagged" if best is None else f"{best:.4f}"
        m = "n/a" if mean is None else f"{mean:.4f}"
        print(f"  gen {gen:3d}: best {b}, mean {m}")

print(f"\nbest fitness: {report.best_fitness:.5f}")
print(f"best breed: {len(report.best_breed.members)} members")
best_run = report.best_run
print(f"its best run: N={best_run.n_steps}, o2={best_run.o2_mean}, "
      f"seed={best_run.seed}")

# A reference point: two copies of the 6-step champion reach log_2 6.
print(f"two champion copies would score {math.log(6)/math.log(2):.5f}")

# ---------------------------------------------------------------------------
# Flagged-infinite breeds are part of the result
# ---------------------------------------------------------------------------

print(f"\nbreeds flagged infinite during the search: "
      f"{len(report.flagged_infinite)}")
if report.flagged_infinite:
    breed = report.flagged_infinite[0]
    rerun = orchestrate(breed, seed=1, max_steps=5000)
    print(f"re-running one of them for 5000 steps: {rerun.termination}")

# The search replays exactly from its master seed:
again = evolve(pool, params)
print("\nsame seed, same search:",
      again.best_breed.members == report.best_breed.members
      and again.history == report.history)
