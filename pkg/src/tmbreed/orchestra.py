"""Joint execution of machine breeds.

A breed is an ordered multiset of machines. All members start in state 1 on
blank tapes. Each step, every live member that has a table entry for its
current (state, scanned symbol) proposes its own rule; one proposing member
is selected uniformly (a selection draw is consumed only when two or more
members propose); every live member whose configuration matches the chosen
rule's left-hand side executes its right-hand side, even if its own table
disagrees or is undefined there; any live member whose configuration does
not match is deleted. Members that reach state 0 are removed as halted at
the start of the next step.

Because every member starts in the same configuration and every survivor
executes the same chosen action, live configurations can never diverge: one
shared configuration stands for the whole breed, mismatch deletion is
unreachable, and the mean breed size over a run equals the breed size. The
loop below exploits that; tests check it step for step against a literal
per-member simulator.

The run's headline number is its dimension log_k(n): n joint steps on a
log scale whose base k is the floor of the mean breed size.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .machine import Machine, machines_by_id, parse_machine
from .rand import MASK64, _GAMMA, _MIX1, _MIX2

ALL_RESOLVED = "all-resolved"
NO_APPLICABLE_RULE = "no-applicable-rule"
BUDGET_EXCEEDED = "budget-exceeded"
TERMINATIONS = (ALL_RESOLVED, NO_APPLICABLE_RULE, BUDGET_EXCEEDED)


def dimension(n: int, k: int) -> float | None:
    """log base k of n; None when k < 2 (a base-1 log has no meaning)."""
    if n < 1 or k < 1:
        raise ValueError("dimension needs n >= 1 and k >= 1")
    if k < 2:
        return None
    return math.log(n) / math.log(k)


@dataclass
class Breed:
    """Ordered member id list plus the pool that resolves the ids."""

    members: list[str]
    pool: Mapping[str, Machine]
    name: str | None = None

    @classmethod
    def of(cls, machines: Sequence[Machine], name: str | None = None) -> "Breed":
        return cls([m.id for m in machines], machines_by_id(machines), name)

    def machines(self) -> list[Machine]:
        if not self.members:
            raise ValueError("breed has no members")
        out = []
        for mid in self.members:
            m = self.pool.get(mid)
            if m is None:
                raise KeyError(f"member id {mid!r} not in pool")
            out.append(m)
        return out

    def member_key(self) -> tuple[str, ...]:
        return tuple(self.members)


@dataclass
class RunResult:
    """Outcome of one orchestration run."""

    n_steps: int
    o2_mean: float
    o2_floor: int
    dimension: float | None
    selection_counts: list[int]
    termination: str
    seed: int | None
    halted_members: list[int] = field(default_factory=list)
    deleted_members: list[int] = field(default_factory=list)

    @property
    def terminated(self) -> bool:
        return self.termination != BUDGET_EXCEEDED

    def outcome(self) -> tuple:
        """Seed-independent view, for comparing sampled vs enumerated runs."""
        return (self.n_steps, self.o2_mean, self.o2_floor, self.dimension,
                tuple(self.selection_counts), self.termination,
                tuple(self.halted_members), tuple(self.deleted_members))

    def to_doc(self) -> dict:
        return {
            "format": "run-result/1",
            "n_steps": self.n_steps,
            "o2_mean": self.o2_mean,
            "o2_floor": self.o2_floor,
            "dimension": self.dimension,
            "selection_counts": list(self.selection_counts),
            "termination": self.termination,
            "seed": self.seed,
            "halted_members": list(self.halted_members),
            "deleted_members": list(self.deleted_members),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "RunResult":
        return cls(
            n_steps=doc["n_steps"],
            o2_mean=doc["o2_mean"],
            o2_floor=doc["o2_floor"],
            dimension=doc.get("dimension"),
            selection_counts=list(doc["selection_counts"]),
            termination=doc["termination"],
            seed=doc.get("seed"),
            halted_members=list(doc.get("halted_members", [])),
            deleted_members=list(doc.get("deleted_members", [])),
        )


def _proposal_table(machines: Sequence[Machine]):
    """Per (state, symbol): the members holding a rule there, member order."""
    table: dict[tuple[int, int], list[tuple[int, int, int, int]]] = {}
    for i, m in enumerate(machines):
        for lhs, act in m.table.items():
            table.setdefault(lhs, []).append(
                (i, act.write, 1 if act.move == "R" else -1, act.next_state))
    return table


def orchestrate(breed: Breed, seed: int, max_steps: int) -> RunResult:
    """Run a breed to resolution or budget; pure in (breed, seed, max_steps)."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    machines = breed.machines()
    size = len(machines)
    proposals = _proposal_table(machines)
    counts = [0] * size
    ones: set[int] = set()
    head = 0
    state = 1
    steps = 0
    s = seed & MASK64
    # Inlined SplitMix64 + rejection; draw for draw identical to
    # rand.SplitMix64.randbelow, which tests rely on.
    while True:
        if state == 0:
            termination = ALL_RESOLVED
            break
        sym = 1 if head in ones else 0
        cands = proposals.get((state, sym))
        if not cands:
            termination = NO_APPLICABLE_RULE
            break
        k = len(cands)
        if k == 1:
            i, w, d, ns = cands[0]
        else:
            limit = 18446744073709551616 - (18446744073709551616 % k)
            while True:
                s = (s + _GAMMA) & MASK64
                z = s
                z = ((z ^ (z >> 30)) * _MIX1) & MASK64
                z = ((z ^ (z >> 27)) * _MIX2) & MASK64
                z ^= z >> 31
                if z < limit:
                    break
            i, w, d, ns = cands[z % k]
        counts[i] += 1
        if w:
            ones.add(head)
        else:
            ones.discard(head)
        head += d
        state = ns
        steps += 1
        if steps == max_steps:
            termination = BUDGET_EXCEEDED
            break
    return _make_result(size, steps, counts, termination, seed)


def _make_result(size: int, steps: int, counts: list[int], termination: str,
                 seed: int | None) -> RunResult:
    # Size is sampled at the start of each executed step; it never shrinks
    # mid-run, so the mean is exactly the breed size (0 steps: no sample).
    if steps:
        o2_mean = float(size)
        o2_floor = size
        dim = dimension(steps, o2_floor)
    else:
        o2_mean = 0.0
        o2_floor = 0
        dim = None
    halted = list(range(size)) if termination == ALL_RESOLVED else []
    return RunResult(
        n_steps=steps,
        o2_mean=o2_mean,
        o2_floor=o2_floor,
        dimension=dim,
        selection_counts=counts,
        termination=termination,
        seed=seed,
        halted_members=halted,
        deleted_members=[],
    )


ENUMERATION_BOUND = 1_000_000


def enumerate_runs(breed: Breed, max_steps: int
                   ) -> list[tuple[tuple[int, ...], RunResult]]:
    """Every selection sequence a seeded run could take, with its outcome.

    Exhaustive counterpart of ``orchestrate``: instead of sampling the
    selection in each step, all proposing members are branched on. Each
    returned pair is (selected member indices in step order, result).
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    machines = breed.machines()
    size = len(machines)
    if size ** max_steps > ENUMERATION_BOUND:
        raise ValueError(
            f"enumeration bound exceeded: {size}^{max_steps} > {ENUMERATION_BOUND}")
    proposals = _proposal_table(machines)
    results: list[tuple[tuple[int, ...], RunResult]] = []

    def walk(choices: tuple[int, ...], state: int, head: int,
             ones: frozenset[int], steps: int, counts: tuple[int, ...]):
        # Check order mirrors orchestrate: the budget cut fires immediately
        # after a step executes, before the halt check would run.
        if steps == max_steps:
            results.append((choices, _make_result(
                size, steps, list(counts), BUDGET_EXCEEDED, None)))
            return
        if state == 0:
            results.append((choices, _make_result(
                size, steps, list(counts), ALL_RESOLVED, None)))
            return
        sym = 1 if head in ones else 0
        cands = proposals.get((state, sym))
        if not cands:
            results.append((choices, _make_result(
                size, steps, list(counts), NO_APPLICABLE_RULE, None)))
            return
        for i, w, d, ns in cands:
            new_ones = ones | {head} if w else ones - {head}
            new_counts = counts[:i] + (counts[i] + 1,) + counts[i + 1:]
            walk(choices + (i,), ns, head + d, new_ones, steps + 1, new_counts)

    walk((), 1, 0, frozenset(), 0, (0,) * size)
    return results


BREED_FORMAT = "breed/1"


def breed_to_doc(breed: Breed) -> dict:
    machines = breed.machines()
    seen: dict[str, Machine] = {}
    for m in machines:
        seen.setdefault(m.id, m)
    return {
        "format": BREED_FORMAT,
        "name": breed.name,
        "machines": [{"name": m.name, "text": m.text} for m in seen.values()],
        "members": list(breed.members),
    }


def breed_from_doc(doc: dict, base_dir: str | None = None) -> Breed:
    if "members" not in doc:
        raise ValueError("breed document needs a 'members' id list")
    if "machines" in doc:
        pool = machines_by_id(
            parse_machine(e["text"], name=e.get("name"))
            for e in doc["machines"])
    elif "pool" in doc:
        from .breeder import load_pool

        path = doc["pool"]
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        pool = load_pool(path).mapping()
    else:
        raise ValueError("breed document needs inline 'machines' or a 'pool' path")
    breed = Breed(list(doc["members"]), pool, name=doc.get("name"))
    breed.machines()  # fail fast on unresolvable ids
    return breed


def save_breed(path, breed: Breed) -> None:
    with open(path, "w") as fh:
        json.dump(breed_to_doc(breed), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_breed(path) -> Breed:
    with open(path) as fh:
        doc = json.load(fh)
    return breed_from_doc(doc, base_dir=os.path.dirname(os.path.abspath(path)))


RESULT_CSV_FIELDS = ("seed", "n_steps", "o2_mean", "o2_floor", "dimension",
                     "termination")


def write_results_csv(path, results: Sequence[RunResult]) -> None:
    """Batch export, one row per run, for external plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_CSV_FIELDS)
        for r in results:
            writer.writerow([
                r.seed, r.n_steps, r.o2_mean, r.o2_floor,
                "" if r.dimension is None else repr(r.dimension),
                r.termination,
            ])
