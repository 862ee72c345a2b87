"""Empirical IQ/EQ tables from run samples, and the power-law exponent fit.

IQ(z) is the most joint steps observed from breeds whose effective
participant count is exactly z; EQ(n) is the largest participant count
observed among runs that lasted at least n steps. Both are max-envelopes of
the same sample cloud, so the exponent in IQ ~ EQ^D is fitted on the IQ
table alone (z as abscissa) to avoid double-counting.

Runs that hit their step budget are excluded: their true step count is
unknown and possibly infinite.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .machine import Machine
from .orchestra import Breed, RunResult, orchestrate
from .rand import SplitMix64


@dataclass(frozen=True)
class RunSample:
    """One run reduced to (participant count floor, steps, terminated)."""

    z: int
    n: int
    terminated: bool


def sample_from_result(result: RunResult) -> RunSample | None:
    """Reduce a run to a sample; zero-step runs carry no information."""
    if result.n_steps < 1:
        return None
    return RunSample(result.o2_floor, result.n_steps, result.terminated)


@dataclass
class IqEqTable:
    iq: dict[int, int]
    eq: dict[int, int]
    sample_count: int


def estimate_iq_eq(samples: Sequence[RunSample]) -> IqEqTable:
    """Max-envelopes over the terminated samples.

    iq[z] is the max n among samples with that exact z; eq[n] is the max z
    among samples with at least n steps, tabulated on the distinct n values
    present (a non-increasing staircase).
    """
    done = [s for s in samples if s.terminated]
    if not done:
        raise ValueError("no terminated samples")
    iq: dict[int, int] = {}
    for s in done:
        if s.n > iq.get(s.z, 0):
            iq[s.z] = s.n
    by_n_desc = sorted(done, key=lambda s: s.n, reverse=True)
    eq: dict[int, int] = {}
    best_z = 0
    idx = 0
    for n in sorted({s.n for s in done}, reverse=True):
        while idx < len(by_n_desc) and by_n_desc[idx].n >= n:
            best_z = max(best_z, by_n_desc[idx].z)
            idx += 1
        eq[n] = best_z
    return IqEqTable(iq=dict(sorted(iq.items())),
                     eq=dict(sorted(eq.items())),
                     sample_count=len(done))


@dataclass
class PowerLawFit:
    d_hat: float
    intercept: float
    residual: float
    point_count: int

    def to_doc(self) -> dict:
        return {
            "format": "power-law-fit/1",
            "d_hat": self.d_hat,
            "intercept": self.intercept,
            "residual": self.residual,
            "point_count": self.point_count,
        }


def fit_power_law(table: IqEqTable) -> PowerLawFit:
    """Least-squares line through (ln z, ln iq[z]) for z >= 2."""
    pts = [(math.log(z), math.log(n)) for z, n in sorted(table.iq.items())
           if z >= 2]
    if len(pts) < 2:
        raise ValueError("need at least 2 table points with z >= 2")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if np.ptp(xs) == 0.0:
        raise ValueError("degenerate fit: identical abscissae")
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.sum((ys - (slope * xs + intercept)) ** 2))
    return PowerLawFit(d_hat=float(slope), intercept=float(intercept),
                       residual=residual, point_count=len(pts))


def sweep(machines: Sequence[Machine], runs: int,
          breed_size_range: tuple[int, int], max_steps: int, seed: int,
          threads: int = 1) -> tuple[list[RunSample], list[RunResult]]:
    """Orchestrate `runs` random breeds drawn from a machine pool.

    Breed sizes are uniform in the inclusive range, members uniform with
    replacement. All randomness flows from the master seed, so a sweep
    replays bit for bit; per-run work may be spread over threads without
    changing the result (plans are drawn up front, results kept in order).
    """
    lo, hi = breed_size_range
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid breed size range [{lo}, {hi}]")
    if runs < 0:
        raise ValueError("runs must be >= 0")
    if runs and not machines:
        raise ValueError("empty machine pool")
    rng = SplitMix64(seed)
    plans: list[tuple[Breed, int]] = []
    for _ in range(runs):
        size = rng.randint(lo, hi)
        picked = [machines[rng.randbelow(len(machines))] for _ in range(size)]
        plans.append((Breed.of(picked), rng.next_u64()))

    def run_one(plan: tuple[Breed, int]) -> RunResult:
        breed, run_seed = plan
        return orchestrate(breed, run_seed, max_steps)

    if threads > 1 and len(plans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, plans))
    else:
        results = [run_one(p) for p in plans]
    samples = [s for s in (sample_from_result(r) for r in results)
               if s is not None]
    return samples, results


def write_samples_csv(path, samples: Sequence[RunSample]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("z", "n", "terminated"))
        for s in samples:
            writer.writerow((s.z, s.n, "true" if s.terminated else "false"))


def write_tables_csv(path, table: IqEqTable) -> None:
    """Both envelopes in one file, tagged by a leading table column."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("table", "key", "value"))
        for z, n in table.iq.items():
            writer.writerow(("iq", z, n))
        for n, z in table.eq.items():
            writer.writerow(("eq", n, z))


def tables_to_doc(table: IqEqTable) -> dict:
    return {
        "iq": {str(z): n for z, n in table.iq.items()},
        "eq": {str(n): z for n, z in table.eq.items()},
        "sample_count": table.sample_count,
    }
