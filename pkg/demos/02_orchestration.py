"""Breeds and their joint runs.

A breed is an ordered multiset of machines executed together: each step,
one member's applicable rule is selected and imposed on every member whose
configuration matches it. The run yields N (joint steps), o2 (mean breed
size) and the dimension log_{floor(o2)} N, the headline number of the whole
package.
"""

import math

from tmbreed import Breed, dimension, enumerate_runs, orchestrate, parse_machine

champion = parse_machine(
    "1 0 -> 1 R 2\n1 1 -> 1 L 2\n2 0 -> 1 L 1\n2 1 -> 1 R 0", name="bb2")

# ---------------------------------------------------------------------------
# The dimension measure on its own
# ---------------------------------------------------------------------------

# A 49-move chess game between two players:
print("dimension(49, 2)   =", dimension(49, 2))
# One participant gives no base to take a logarithm in:
print("dimension(100, 1)  =", dimension(100, 1))

# ---------------------------------------------------------------------------
# Singleton breeds replay the solo run
# ---------------------------------------------------------------------------

solo = orchestrate(Breed.of([champion]), seed=1, max_steps=1000)
print("\nsingleton run:", solo.n_steps, "steps,", solo.termination)
print("dimension is undefined for a lone machine:", solo.dimension)

# ---------------------------------------------------------------------------
# Identical copies cooperate perfectly
# ---------------------------------------------------------------------------

trio = Breed([champion.id] * 3, {champion.id: champion}, name="triplet")
run = orchestrate(trio, seed=42, max_steps=1000)
print(f"\n3 copies: N={run.n_steps}, o2={run.o2_mean}, "
      f"dimension={run.dimension:.5f} (= log_3 6 = {math.log(6)/math.log(3):.5f})")
print("per-member selection counts:", run.selection_counts)

# Different seeds spread the selections differently but the trajectory is
# the same:
for seed in (0, 7, 99):
    r = orchestrate(trio, seed=seed, max_steps=1000)
    print(f"  seed {seed}: counts {r.selection_counts}, N={r.n_steps}")

# ---------------------------------------------------------------------------
# Exhausting the nondeterminism
# ---------------------------------------------------------------------------

# For small breeds and step bounds, every selection sequence can be walked.
outcomes = enumerate_runs(trio, max_steps=7)
steps_seen = {r.n_steps for _, r in outcomes}
print(f"\nenumerated {len(outcomes)} selection sequences, "
      f"step counts seen: {steps_seen}")

# Every sampled run is one of the enumerated outcomes:
sampled = orchestrate(trio, seed=123456, max_steps=7)
universe = {r.outcome() for _, r in outcomes}
print("sampled outcome contained in the enumeration:",
      sampled.outcome() in universe)

# ---------------------------------------------------------------------------
# Mixing different machines
# ---------------------------------------------------------------------------

other = parse_machine("1 0 -> 1 L 2\n1 1 -> 0 R 2\n2 0 -> 1 R 1\n2 1 -> 1 R 0",
                      name="other")
duo = Breed.of([champion, other])
for seed in range(4):
    r = orchestrate(duo, seed=seed, max_steps=10_000)
    dim = "n/a" if r.dimension is None else f"{r.dimension:.4f}"
    print(f"mixed duo, seed {seed}: N={r.n_steps:5d} {r.termination:18s} "
          f"dimension={dim}")
