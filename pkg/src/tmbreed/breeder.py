"""Machine pool construction and the evolutionary search for deep breeds.

The pool mixes curated champion machines (shipped as package data, taken
from the Busy Beaver record literature) with randomly drawn machines that
were verified to halt solo within a step budget. The search is elitist and
mutation-only: each generation keeps the best breeds untouched (with their
scores cached, so the per-generation best can never decrease) and refills
the rest by mutating elites one member at a time.

Fitness aggregates by maximum over several seeded runs: the catalog collects
best-case specimens, so a breed is worth its best verified run. Breeds none
of whose runs terminate are flagged infinite and rank below every finite
score; they are reported, not dropped, because hunting them down is the
curators' job.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .machine import Machine, parse_machine, run_single, random_machine
from .orchestra import BUDGET_EXCEEDED, Breed, RunResult, orchestrate
from .rand import SplitMix64

TAG_CURATED = "curated"
TAG_RANDOM = "random"

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class PoolEntry:
    machine: Machine
    tag: str


@dataclass
class Pool:
    """Machine stock for breeding; entries may repeat a machine."""

    entries: list[PoolEntry]
    budget_used: int

    def machines(self) -> list[Machine]:
        return [e.machine for e in self.entries]

    def mapping(self) -> dict[str, Machine]:
        return {e.machine.id: e.machine for e in self.entries}

    def verify(self) -> list[str]:
        """Ids of random-tagged entries that no longer halt within budget."""
        bad = []
        for e in self.entries:
            if e.tag == TAG_RANDOM:
                if not run_single(e.machine, self.budget_used).halted:
                    bad.append(e.machine.id)
        return bad

    def to_doc(self) -> dict:
        return {
            "format": POOL_FORMAT,
            "budget_used": self.budget_used,
            "machines": [
                {"name": e.machine.name, "text": e.machine.text, "tag": e.tag}
                for e in self.entries
            ],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Pool":
        entries = [
            PoolEntry(parse_machine(e["text"], name=e.get("name")),
                      e.get("tag", TAG_CURATED))
            for e in doc["machines"]
        ]
        return cls(entries, int(doc.get("budget_used", 0)))


POOL_FORMAT = "pool/1"


def save_pool(path, pool: Pool) -> None:
    with open(path, "w") as fh:
        json.dump(pool.to_doc(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_pool(path) -> Pool:
    with open(path) as fh:
        return Pool.from_doc(json.load(fh))


def load_champions() -> list[Machine]:
    """Curated champion machines shipped with the package."""
    text = (resources.files("tmbreed") / "data" / "champions.json").read_text()
    doc = json.loads(text)
    return [parse_machine(e["text"], name=e.get("name"))
            for e in doc["machines"]]


def generate_pool(n_states: int, target_count: int, budget: int, seed: int,
                  curated: Sequence[Machine] = (),
                  max_attempts: int | None = None) -> Pool:
    """Draw random machines, keep solo halters, append curated ones as-is.

    Curated machines are trusted data and are not re-checked against the
    budget. Repeated draws of the same table are kept; equal tables share an
    id, so lookups stay unambiguous.
    """
    if target_count < 0:
        raise ValueError("target_count must be >= 0")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if max_attempts is None:
        max_attempts = max(1000, 100 * target_count)
    rng = SplitMix64(seed)
    entries: list[PoolEntry] = []
    attempts = 0
    while len(entries) < target_count:
        if attempts >= max_attempts:
            raise RuntimeError(
                f"gave up after {attempts} draws with "
                f"{len(entries)}/{target_count} halting machines found")
        attempts += 1
        m = random_machine(n_states, rng)
        if run_single(m, budget).halted:
            entries.append(PoolEntry(m, TAG_RANDOM))
    for m in curated:
        entries.append(PoolEntry(m, TAG_CURATED))
    return Pool(entries, budget)


@dataclass
class SearchParams:
    population_size: int = 50
    generations: int = 100
    runs_per_fitness: int = 3
    breed_size_min: int = 2
    breed_size_max: int = 5
    mutation_add: float = 0.25
    mutation_drop: float = 0.25
    mutation_replace: float = 0.4
    elite_fraction: float = 0.2
    run_budget: int = 100_000
    master_seed: int = 0

    def validate(self) -> None:
        if self.population_size < 1 or self.generations < 1:
            raise ValueError("population_size and generations must be >= 1")
        if self.runs_per_fitness < 1:
            raise ValueError("runs_per_fitness must be >= 1")
        if self.breed_size_min < 2 or self.breed_size_max < self.breed_size_min:
            raise ValueError("breed size bounds need 2 <= min <= max")
        rates = (self.mutation_add, self.mutation_drop, self.mutation_replace)
        if any(r < 0 or r > 1 for r in rates) or sum(rates) > 1 + 1e-12:
            raise ValueError("mutation rates must lie in [0,1] and sum to <= 1")
        if not 0 < self.elite_fraction <= 1:
            raise ValueError("elite_fraction must be in (0, 1]")
        if self.run_budget < 1:
            raise ValueError("run_budget must be >= 1")

    def to_doc(self) -> dict:
        return {
            "population_size": self.population_size,
            "generations": self.generations,
            "runs_per_fitness": self.runs_per_fitness,
            "breed_size_min": self.breed_size_min,
            "breed_size_max": self.breed_size_max,
            "mutation_add": self.mutation_add,
            "mutation_drop": self.mutation_drop,
            "mutation_replace": self.mutation_replace,
            "elite_fraction": self.elite_fraction,
            "run_budget": self.run_budget,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SearchParams":
        params = cls()
        for key in params.to_doc():
            if key in doc:
                setattr(params, key, doc[key])
        params.validate()
        return params


@dataclass
class FitnessResult:
    value: float | None  # None when flagged infinite
    flagged_infinite: bool
    best_run: RunResult

    def score(self) -> float:
        return _NEG_INF if self.value is None else self.value


def fitness(breed: Breed, params: SearchParams, rng: SplitMix64) -> FitnessResult:
    """Best dimension over several seeded runs of the breed.

    No terminating run at all flags the breed infinite; terminating runs
    whose participant floor stays below 2 score a flat 0.
    """
    best_dim: float | None = None
    best_run: RunResult | None = None
    first_run: RunResult | None = None
    first_terminated: RunResult | None = None
    for _ in range(params.runs_per_fitness):
        run_seed = rng.next_u64()
        rr = orchestrate(breed, run_seed, params.run_budget)
        if first_run is None:
            first_run = rr
        if rr.termination != BUDGET_EXCEEDED:
            if first_terminated is None:
                first_terminated = rr
            if rr.dimension is not None and (best_dim is None
                                             or rr.dimension > best_dim):
                best_dim = rr.dimension
                best_run = rr
    if first_terminated is None:
        return FitnessResult(None, True, first_run)
    if best_dim is None:
        return FitnessResult(0.0, False, first_terminated)
    return FitnessResult(best_dim, False, best_run)


@dataclass
class SearchReport:
    best_breed: Breed
    best_fitness: float | None
    best_run: RunResult | None
    history: list[tuple[float | None, float | None]]
    flagged_infinite: list[Breed] = field(default_factory=list)


def evolve(pool: Pool, params: SearchParams) -> SearchReport:
    """Elitist mutation-only search maximizing breed dimension."""
    params.validate()
    machines = pool.machines()
    if len(machines) < params.breed_size_min:
        raise ValueError("pool smaller than the minimum breed size")
    mapping = pool.mapping()
    rng = SplitMix64(params.master_seed)

    def random_member() -> str:
        return machines[rng.randbelow(len(machines))].id

    def random_breed() -> Breed:
        size = rng.randint(params.breed_size_min, params.breed_size_max)
        return Breed([random_member() for _ in range(size)], mapping)

    def mutate(parent: Breed) -> Breed:
        members = list(parent.members)
        u = rng.random()
        op = "copy"
        if u < params.mutation_add:
            op = "add"
        elif u < params.mutation_add + params.mutation_drop:
            op = "drop"
        elif u < (params.mutation_add + params.mutation_drop
                  + params.mutation_replace):
            op = "replace"
        # Ops that would leave the size bounds degrade to replace.
        if op == "add" and len(members) >= params.breed_size_max:
            op = "replace"
        if op == "drop" and len(members) <= params.breed_size_min:
            op = "replace"
        if op == "add":
            members.append(random_member())
        elif op == "drop":
            members.pop(rng.randbelow(len(members)))
        elif op == "replace":
            members[rng.randbelow(len(members))] = random_member()
        return Breed(members, mapping)

    flagged: dict[tuple[str, ...], Breed] = {}

    def evaluate(breed: Breed) -> tuple[Breed, FitnessResult]:
        fr = fitness(breed, params, rng)
        if fr.flagged_infinite:
            flagged.setdefault(breed.member_key(), breed)
        return breed, fr

    population = [evaluate(random_breed())
                  for _ in range(params.population_size)]
    elite_count = max(1, int(params.population_size * params.elite_fraction))
    history: list[tuple[float | None, float | None]] = []
    for gen in range(params.generations):
        population.sort(key=lambda bf: bf[1].score(), reverse=True)
        best_fr = population[0][1]
        finite = [bf[1].value for bf in population if not bf[1].flagged_infinite]
        mean = sum(finite) / len(finite) if finite else None
        history.append((best_fr.value, mean))
        if gen == params.generations - 1:
            break
        elites = population[:elite_count]
        children = [
            evaluate(mutate(elites[rng.randbelow(elite_count)][0]))
            for _ in range(params.population_size - elite_count)
        ]
        population = elites + children
    best_breed, best_fr = population[0]
    return SearchReport(
        best_breed=best_breed,
        best_fitness=best_fr.value,
        best_run=best_fr.best_run,
        history=history,
        flagged_infinite=list(flagged.values()),
    )


def write_history_csv(path, history: Sequence[tuple[float | None, float | None]]
                      ) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("generation", "best_fitness", "mean_fitness"))
        for gen, (best, mean) in enumerate(history):
            writer.writerow((
                gen,
                "" if best is None else repr(best),
                "" if mean is None else repr(mean),
            ))
