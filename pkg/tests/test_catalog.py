import re

import pytest

from tmbreed.catalog import (
    STATUS_ACTIVE,
    STATUS_DELETED,
    STATUS_FLAGGED,
    CatalogStore,
    InvalidStatusTransition,
    Specimen,
    UnknownSpecimenError,
    fancy_name,
    make_specimen,
    specimen_id,
)
from tmbreed.machine import parse_machine
from tmbreed.orchestra import Breed, orchestrate
from tmbreed.rand import SplitMix64


@pytest.fixture
def triple_run(bb2):
    breed = Breed([bb2.id] * 3, {bb2.id: bb2})
    run = orchestrate(breed, 42, 1000)
    return breed, run


class TestMakeSpecimen:
    def test_identical_copy_specimen(self, triple_run):
        breed, run = triple_run
        spec = make_specimen(run, breed, observer="ada",
                             location=(47.53, 21.62),
                             found_at="2026-08-08T00:00:00+00:00")
        assert spec.status == STATUS_ACTIVE
        assert spec.n_steps == 6
        assert sum(m.selection_count for m in spec.machines) == 6
        assert spec.o2_floor == 3
        assert spec.observer == "ada"
        assert spec.location == (47.53, 21.62)

    def test_budget_exceeded_flagged(self):
        loop = parse_machine("1 0 -> 0 R 1")
        breed = Breed([loop.id, loop.id], {loop.id: loop})
        run = orchestrate(breed, 5, 50)
        spec = make_specimen(run, breed, observer="ada")
        assert spec.status == STATUS_FLAGGED

    def test_same_content_same_identity(self, triple_run):
        breed, run = triple_run
        a = make_specimen(run, breed, observer="x")
        b = make_specimen(run, breed, observer="y")
        assert a.id == b.id
        assert a.fancy_name == b.fancy_name

    def test_mismatched_counts_rejected(self, triple_run, bb2):
        breed, run = triple_run
        shorter = Breed([bb2.id], {bb2.id: bb2})
        with pytest.raises(ValueError, match="selection counts"):
            make_specimen(run, shorter, observer="x")

    def test_seedless_run_rejected(self, triple_run):
        breed, run = triple_run
        run.seed = None
        with pytest.raises(ValueError, match="seed"):
            make_specimen(run, breed, observer="x")

    def test_location_validated(self, triple_run):
        breed, run = triple_run
        with pytest.raises(ValueError, match="latitude"):
            make_specimen(run, breed, observer="x", location=(91, 0))
        with pytest.raises(ValueError, match="longitude"):
            make_specimen(run, breed, observer="x", location=(0, -181))

    def test_replay_reproduces_run(self, triple_run):
        breed, run = triple_run
        spec = make_specimen(run, breed, observer="x")
        again = orchestrate(breed, spec.seed, spec.n_steps + 1)
        assert again.n_steps == spec.n_steps
        assert again.selection_counts == \
            [m.selection_count for m in spec.machines]


class TestFancyName:
    def test_deterministic(self):
        sid = specimen_id(["1 0 -> 1 R 0\n"], 7)
        assert fancy_name(sid) == fancy_name(sid)

    def test_shape(self):
        rng = SplitMix64(1)
        pattern = re.compile(r"^[A-Z][a-z]+ [A-Z][a-z]+$")
        for _ in range(200):
            name = fancy_name(f"{rng.next_u64():016x}")
            assert pattern.match(name)
            assert len(name) <= 32
            for word in name.split():
                assert word.endswith(("us", "i", "a", "um"))

    def test_collision_rate(self):
        # Name space is (69^2 * 4)^2, about 3.6e8; ten thousand draws
        # should collide almost never.
        rng = SplitMix64(2)
        names = {fancy_name(f"{rng.next_u64():016x}") for _ in range(10_000)}
        assert len(names) >= 9_900


class TestStore:
    def spec(self, bb2, seed=1, observer="ada", found_at=None):
        breed = Breed([bb2.id, bb2.id], {bb2.id: bb2})
        run = orchestrate(breed, seed, 1000)
        return make_specimen(run, breed, observer=observer,
                             found_at=found_at)

    def test_save_get_round_trip(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        spec = self.spec(bb2)
        store.save(spec)
        assert store.get(spec.id) == spec

    def test_reopen_sees_saved(self, tmp_path, bb2):
        spec = self.spec(bb2)
        CatalogStore(tmp_path).save(spec)
        fresh = CatalogStore(tmp_path)
        assert fresh.get(spec.id) == spec

    def test_unknown_id(self, tmp_path):
        with pytest.raises(UnknownSpecimenError):
            CatalogStore(tmp_path).get("no-such-id")

    def test_status_filtering(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        ids = [store.save(self.spec(bb2, seed=s)) for s in (1, 2, 3)]
        store.set_status(ids[0], STATUS_DELETED)
        assert {s.id for s in store.list(status=STATUS_ACTIVE)} == set(ids[1:])
        assert len(store.list()) == 2  # deleted hidden by default
        assert len(store.list(include_deleted=True)) == 3
        assert [s.id for s in store.list(status=STATUS_DELETED)] == [ids[0]]

    def test_sort_dimension_absent_ranks_last(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        docs = []
        for seed, floor, dim in ((1, 2, 2.6), (2, 2, 1.6), (3, 1, None)):
            spec = self.spec(bb2, seed=seed)
            spec.dimension = dim
            store.save(spec)
            docs.append(spec)
        ordered = store.list(sort="dimension", descending=True)
        assert [s.dimension for s in ordered] == [2.6, 1.6, None]

    def test_sort_by_steps_and_date(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        a = self.spec(bb2, seed=1, found_at="2026-01-01T00:00:00+00:00")
        b = self.spec(bb2, seed=2, found_at="2026-02-01T00:00:00+00:00")
        store.save(a)
        store.save(b)
        assert [s.id for s in store.list(sort="found_at")] == [b.id, a.id]
        assert len(store.list(sort="n_steps")) == 2

    def test_status_transition_dag(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        sid = store.save(self.spec(bb2))
        store.set_status(sid, STATUS_FLAGGED)
        store.set_status(sid, STATUS_DELETED)
        with pytest.raises(InvalidStatusTransition):
            store.set_status(sid, STATUS_ACTIVE)
        with pytest.raises(InvalidStatusTransition):
            store.set_status(sid, STATUS_FLAGGED)

    def test_flagged_cannot_reactivate(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        sid = store.save(self.spec(bb2))
        store.set_status(sid, STATUS_FLAGGED)
        with pytest.raises(InvalidStatusTransition):
            store.set_status(sid, STATUS_ACTIVE)

    def test_same_status_is_idempotent(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        sid = store.save(self.spec(bb2))
        assert store.set_status(sid, STATUS_ACTIVE).status == STATUS_ACTIVE

    def test_rename(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        sid = store.save(self.spec(bb2))
        store.rename(sid, "Breedus Maximus")
        assert CatalogStore(tmp_path).get(sid).fancy_name == "Breedus Maximus"
        with pytest.raises(ValueError):
            store.rename(sid, "")

    def test_rebuild_index_counts(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        for s in (1, 2):
            store.save(self.spec(bb2, seed=s))
        assert store.rebuild_index() == 2

    def test_limit_offset(self, tmp_path, bb2):
        store = CatalogStore(tmp_path)
        for s in range(5):
            store.save(self.spec(bb2, seed=s,
                                 found_at=f"2026-01-0{s + 1}T00:00:00+00:00"))
        page = store.list(sort="found_at", limit=2, offset=1)
        assert len(page) == 2

    def test_doc_round_trip(self, bb2):
        spec = self.spec(bb2)
        assert Specimen.from_doc(spec.to_doc()) == spec
