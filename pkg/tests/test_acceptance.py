"""Acceptance suite: one test per release criterion, tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.
"""

import json
import math
import subprocess
import sys
from contextlib import contextmanager

import pytest
from fastapi.testclient import TestClient

from tmbreed.breeder import SearchParams, evolve, generate_pool, load_champions
from tmbreed.catalog import CatalogStore
from tmbreed.client import GameClient, submission_from_run
from tmbreed.intelligence import (
    IqEqTable,
    estimate_iq_eq,
    fit_power_law,
    sweep,
)
from tmbreed.machine import parse_machine, random_machine, run_single
from tmbreed.orchestra import (
    ALL_RESOLVED,
    BUDGET_EXCEEDED,
    Breed,
    dimension,
    enumerate_runs,
    orchestrate,
    save_breed,
)
from tmbreed.rand import SplitMix64
from tmbreed.service import create_app

from conftest import BB2_TEXT


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def test_dimension_values():
    with criterion("dimension-values"):
        assert dimension(49, 2) == pytest.approx(5.61471, abs=1e-5)
        assert dimension(2_304_000, 20_000) == pytest.approx(1.479293,
                                                             abs=1e-6)
        assert dimension(2_304_000, 2 * 10**11) == pytest.approx(0.5630002,
                                                                 abs=1e-6)


def test_singleton_equivalence():
    with criterion("singleton-equivalence"):
        rng = SplitMix64(8080)
        budget = 2000
        for _ in range(100):
            m = random_machine(rng.randint(2, 4), rng)
            solo = run_single(m, budget)
            breed = Breed.of([m])
            for _ in range(5):
                rr = orchestrate(breed, rng.next_u64(), budget)
                assert rr.n_steps == solo.steps
                if solo.halted:
                    assert rr.termination != BUDGET_EXCEEDED
                else:
                    assert rr.termination == BUDGET_EXCEEDED


def test_identical_copy_law():
    with criterion("identical-copy-law"):
        champions = {m.name: m for m in load_champions()}
        rng = SplitMix64(31337)
        subjects = [
            champions["bb2-champion (6 steps, 4 ones)"],
            champions["bb3-steps-champion (21 steps, 5 ones)"],
            champions["bb4-champion (107 steps, 13 ones)"],
        ]
        while True:  # add one random solo-halting machine
            m = random_machine(3, rng)
            if run_single(m, 500).halted:
                subjects.append(m)
                break
        for machine in subjects:
            s = run_single(machine, 500).steps
            for k in (2, 3, 5):
                breed = Breed([machine.id] * k, {machine.id: machine})
                for _ in range(5):
                    rr = orchestrate(breed, rng.next_u64(), 10_000)
                    assert rr.n_steps == s
                    assert rr.o2_mean == float(k)
                    assert rr.o2_floor == k
                    assert rr.dimension == math.log(s) / math.log(k)
                    assert rr.deleted_members == []
                    assert rr.termination == ALL_RESOLVED


def test_nondeterminism_containment():
    with criterion("nondeterminism-containment"):
        rng = SplitMix64(777)
        machines = [random_machine(rng.randint(2, 3), rng) for _ in range(30)]
        for _ in range(50):
            pair = [machines[rng.randbelow(len(machines))] for _ in range(2)]
            breed = Breed.of(pair)
            outcomes = enumerate_runs(breed, 8)
            pool = set()
            for _, r in outcomes:
                assert sum(r.selection_counts) == r.n_steps
                pool.add(r.outcome())
            for _ in range(10):
                rr = orchestrate(breed, rng.next_u64(), 8)
                assert rr.outcome() in pool


def test_theorem5_analog_on_sweep():
    with criterion("theorem5-analog"):
        pool = generate_pool(2, 300, 1000, seed=2026,
                             curated=load_champions()[:4])
        samples, _results = sweep(pool.machines(), 5000, (2, 4), 100_000,
                                  seed=7)
        table = estimate_iq_eq(samples)
        for s in samples:
            if s.terminated:
                assert s.n <= table.iq[s.z]
                assert s.z <= table.eq[s.n]
        eq_values = [table.eq[n] for n in sorted(table.eq)]
        assert all(a >= b for a, b in zip(eq_values, eq_values[1:]))


def test_power_law_fit_oracle():
    with criterion("power-law-fit"):
        exact = IqEqTable(iq={2: 8, 4: 64, 8: 512}, eq={}, sample_count=3)
        fit = fit_power_law(exact)
        assert abs(fit.d_hat - 3.0) <= 1e-9
        pool = generate_pool(2, 200, 1000, seed=5,
                             curated=load_champions()[:4])
        samples, _ = sweep(pool.machines(), 2000, (2, 4), 50_000, seed=15)
        real = fit_power_law(estimate_iq_eq(samples))
        assert math.isfinite(real.d_hat)
        assert real.residual >= 0.0
        assert real.point_count >= 2


def test_pool_validity():
    with criterion("pool-validity"):
        pool = generate_pool(3, 500, 1000, seed=11)
        random_entries = [e for e in pool.entries if e.tag == "random"]
        assert len(random_entries) == 500
        assert pool.verify() == []
        for e in random_entries:
            assert run_single(e.machine, pool.budget_used).halted


def test_evolution_sanity():
    with criterion("evolution-sanity"):
        bb2 = parse_machine(BB2_TEXT, name="bb2")
        target = math.log(6) / math.log(2)
        reached = 0
        for seed in range(10):
            pool = generate_pool(2, 60, 500, seed=100 + seed, curated=[bb2])
            params = SearchParams(population_size=50, generations=20,
                                  runs_per_fitness=3, breed_size_min=2,
                                  breed_size_max=5, run_budget=10_000,
                                  master_seed=seed)
            report = evolve(pool, params)
            best = [(-math.inf if b is None else b)
                    for b, _ in report.history]
            assert all(a <= b for a, b in zip(best, best[1:])), \
                f"history best decreased for seed {seed}"
            if report.best_fitness is not None \
                    and report.best_fitness >= target - 1e-12:
                reached += 1
        assert reached == 10


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "tmbreed.cli", *args],
                          capture_output=True)


def test_end_to_end_determinism(tmp_path):
    with criterion("end-to-end-determinism"):
        bb2 = parse_machine(BB2_TEXT, name="bb2")
        breed_path = str(tmp_path / "breed.json")
        save_breed(breed_path, Breed([bb2.id] * 3, {bb2.id: bb2}))
        pool = generate_pool(2, 15, 200, seed=21, curated=[bb2])
        from tmbreed.breeder import save_pool

        pool_path = str(tmp_path / "pool.json")
        save_pool(pool_path, pool)

        first = _cli("run", "--breed", breed_path, "--max-steps", "1000")
        assert first.returncode == 0
        seed = json.loads(first.stdout)["seed"]
        again = _cli("run", "--breed", breed_path, "--max-steps", "1000",
                     "--seed", str(seed))
        assert again.stdout == first.stdout

        first = _cli("sweep", "--pool", pool_path, "--runs", "50",
                     "--max-steps", "2000")
        assert first.returncode == 0
        seed = json.loads(first.stdout)["seed"]
        again = _cli("sweep", "--pool", pool_path, "--runs", "50",
                     "--max-steps", "2000", "--seed", str(seed))
        assert again.stdout == first.stdout

        search_args = ("search", "--pool", pool_path, "--population", "10",
                       "--generations", "4", "--runs-per-fitness", "2",
                       "--size-min", "2", "--size-max", "3",
                       "--budget", "1000")
        first = _cli(*search_args)
        assert first.returncode == 0
        seed = json.loads(first.stdout)["seed"]
        again = _cli(*search_args, "--seed", str(seed))
        assert again.stdout == first.stdout


def test_service_integrity(tmp_path):
    with criterion("service-integrity"):
        bb2 = parse_machine(BB2_TEXT, name="bb2")
        store = CatalogStore(tmp_path / "catalog")
        pool = generate_pool(2, 10, 200, seed=41, curated=[bb2])
        app = create_app(store, pool=pool, params=SearchParams(),
                         curator_token="tok", master_seed=3)
        http = TestClient(app)
        client = GameClient("", http=http, curator_token="tok")

        breed = Breed([bb2.id] * 3, {bb2.id: bb2})
        run = orchestrate(breed, 42, 1000)
        good = submission_from_run(run, breed, observer="ada")

        tampered = dict(good)
        tampered["n_steps"] = 7
        tampered["selection_counts"] = [3, 3, 1]
        resp = http.post("/api/specimens", json=tampered)
        assert resp.status_code == 422
        body = resp.json()
        assert body["error"]["claimed"]["n_steps"] == 7
        assert body["error"]["reproduced"]["n_steps"] == 6

        accepted = client.submit_specimen(good)
        sid = accepted["id"]
        stored = store.get(sid)
        machines = [parse_machine(m.text) for m in stored.machines]
        replay_breed = Breed([m.id for m in machines],
                             {m.id: m for m in machines})
        replay = orchestrate(replay_breed, stored.seed, stored.n_steps + 1)
        assert replay.n_steps == stored.n_steps
        assert replay.selection_counts == \
            [m.selection_count for m in stored.machines]

        page = client.list_specimens(status="active")
        assert page["total"] == 1 and page["specimens"][0]["id"] == sid
        client.curate(sid, "rename", fancy_name="Turingus Acceptus")
        assert client.get_specimen(sid)["fancy_name"] == "Turingus Acceptus"
        stats = client.stats()
        assert stats["insufficient_data"] is False
        assert stats["iq"]["3"] == 6
        client.curate(sid, "delete")
        assert client.list_specimens(status="active")["total"] == 0
        assert client.get_specimen(sid, include_deleted=True)["status"] == \
            "deleted"
        assert client.stats()["insufficient_data"] is True
