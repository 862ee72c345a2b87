"""IQ/EQ estimation over a random-breed sweep, and the power-law fit.

IQ(z): the most joint steps seen from breeds with participant floor z.
EQ(n): the largest participant floor among runs lasting at least n steps.
The conjecture under test is that IQ grows like a power of EQ; the
exponent comes from a least-squares line in log-log coordinates.
"""

from tmbreed import estimate_iq_eq, fit_power_law, sweep
from tmbreed.breeder import generate_pool, load_champions

# ---------------------------------------------------------------------------
# Build a pool of verified solo-halting machines plus the champions
# ---------------------------------------------------------------------------

pool = generate_pool(n_states=2, target_count=300, budget=1000, seed=2026,
                     curated=load_champions()[:4])
print(f"pool: {len(pool.entries)} machines, "
      f"solo halting verified within {pool.budget_used} steps")

# ---------------------------------------------------------------------------
# Sweep: thousands of random breeds, every run replayable from the seed
# ---------------------------------------------------------------------------

samples, results = sweep(pool.machines(), runs=4000, breed_size_range=(2, 4),
                         max_steps=100_000, seed=7)
terminated = [s for s in samples if s.terminated]
print(f"{len(results)} runs, {len(terminated)} terminated, "
      f"{len(results) - len(terminated)} hit the step budget")

longest = max(terminated, key=lambda s: s.n)
print(f"longest terminated run: N={longest.n} with z={longest.z}")

# ---------------------------------------------------------------------------
# Max-envelope tables
# ---------------------------------------------------------------------------

table = estimate_iq_eq(samples)
print("\nIQ table (participants -> max steps):")
for z, n in table.iq.items():
    print(f"  IQ({z}) = {n}")

print("EQ staircase on the first few step counts:")
for i, (n, z) in enumerate(table.eq.items()):
    if i >= 5:
        print(f"  ... {len(table.eq) - 5} more rows")
        break
    print(f"  EQ({n}) = {z}")

# Every sample sits under both envelopes:
assert all(s.n <= table.iq[s.z] and s.z <= table.eq[s.n]
           for s in terminated)
print("consistency check passed: every sample under both envelopes")

# ---------------------------------------------------------------------------
# The power-law exponent
# ---------------------------------------------------------------------------

fit = fit_power_law(table)
print(f"\nfitted exponent D = {fit.d_hat:.4f} "
      f"(intercept {fit.intercept:.3f}, residual {fit.residual:.4f}, "
      f"{fit.point_count} points)")
print("IQ(z) behaves like z^D on this pool; sign and size of D are "
      "properties of the pool under study")
