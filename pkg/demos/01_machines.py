"""Single machines: the text format, solo runs, and random draws.

A machine is a partial transition table over states 1..n and the binary
alphabet. One rule per line: "q a -> w d q'" reads as: in state q scanning
a, write w, move d, continue in q' (state 0 halts). Run this script to walk
through parsing, canonical text, solo execution and random generation.
"""

from tmbreed import (
    SplitMix64,
    canonical_text,
    parse_machine,
    random_machine,
    run_single,
)
from tmbreed.breeder import load_champions

# ---------------------------------------------------------------------------
# Parsing and canonical text
# ---------------------------------------------------------------------------

text = """
2 1 -> 1 R 0
1 0 -> 1 R 2
2 0 -> 1 L 1
1 1 -> 1 L 2
"""
machine = parse_machine(text, name="two-state-champion")
print("parsed", machine)
print("canonical text puts rules in (state, symbol) order:\n")
print(canonical_text(machine))
print("content id:", machine.id)

# The id hashes the canonical text, so rule order in the source never
# matters:
same = parse_machine("1 0 -> 1 R 2\n1 1 -> 1 L 2\n2 0 -> 1 L 1\n2 1 -> 1 R 0")
print("same table, same id:", same.id == machine.id)

# ---------------------------------------------------------------------------
# Solo execution
# ---------------------------------------------------------------------------

result = run_single(machine, budget=1000)
print("\nsolo run:", result)
print("this is the 2-state record holder: 6 steps, 4 ones")

looper = parse_machine("1 0 -> 0 R 1", name="right-runner")
print("a machine that never halts:", run_single(looper, budget=50))

# ---------------------------------------------------------------------------
# Random machines
# ---------------------------------------------------------------------------

rng = SplitMix64(2026)
for _ in range(5):
    m = random_machine(2, rng)
    print(f"random 2-state machine {m.id}:", run_single(m, budget=200))

# ---------------------------------------------------------------------------
# The shipped champion collection
# ---------------------------------------------------------------------------

print("\ncurated champions shipped with the package:")
for m in load_champions():
    print(" -", m.name)
