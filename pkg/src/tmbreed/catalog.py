"""Specimen records for verified breed runs, and their on-disk catalog.

A specimen freezes one run: the exact member machine texts, the seed, the
resulting step count and selection counts. Its id hashes (machine texts,
seed) so the run is replayable from the record alone, and its binomial-style
display name is derived from the id, so equal content always gets the same
name.

Storage is one JSON document per specimen under ``<root>/specimens`` plus an
in-memory index rebuilt by scanning, so the directory itself is the durable
truth. Deletion is a status tombstone, never file removal: curators may err,
and the record should stay auditable. Status moves one way only:
active -> flagged_infinite -> deleted (active may also jump straight to
deleted).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable

from .orchestra import BUDGET_EXCEEDED, Breed, RunResult
from .rand import SplitMix64

STATUS_ACTIVE = "active"
STATUS_FLAGGED = "flagged_infinite"
STATUS_DELETED = "deleted"
STATUSES = (STATUS_ACTIVE, STATUS_FLAGGED, STATUS_DELETED)

_ALLOWED_TRANSITIONS = {
    (STATUS_ACTIVE, STATUS_FLAGGED),
    (STATUS_ACTIVE, STATUS_DELETED),
    (STATUS_FLAGGED, STATUS_DELETED),
}

SPECIMEN_FORMAT = "specimen/1"


class UnknownSpecimenError(KeyError):
    pass


class InvalidStatusTransition(ValueError):
    pass


@dataclass
class SpecimenMachine:
    machine_id: str
    text: str
    selection_count: int


@dataclass
class Specimen:
    id: str
    fancy_name: str
    dimension: float | None
    n_steps: int
    o2_mean: float
    o2_floor: int
    observer: str
    location: tuple[float, float] | None
    machines: list[SpecimenMachine]
    seed: int
    found_at: str
    status: str

    def to_doc(self) -> dict:
        return {
            "format": SPECIMEN_FORMAT,
            "id": self.id,
            "fancy_name": self.fancy_name,
            "dimension": self.dimension,
            "n_steps": self.n_steps,
            "o2_mean": self.o2_mean,
            "o2_floor": self.o2_floor,
            "observer": self.observer,
            "location": None if self.location is None else {
                "latitude": self.location[0],
                "longitude": self.location[1],
            },
            "machines": [
                {"machine_id": m.machine_id, "text": m.text,
                 "selection_count": m.selection_count}
                for m in self.machines
            ],
            "seed": self.seed,
            "found_at": self.found_at,
            "status": self.status,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Specimen":
        loc = doc.get("location")
        return cls(
            id=doc["id"],
            fancy_name=doc["fancy_name"],
            dimension=doc.get("dimension"),
            n_steps=doc["n_steps"],
            o2_mean=doc["o2_mean"],
            o2_floor=doc["o2_floor"],
            observer=doc["observer"],
            location=None if loc is None else (loc["latitude"],
                                               loc["longitude"]),
            machines=[
                SpecimenMachine(m["machine_id"], m["text"],
                                m["selection_count"])
                for m in doc["machines"]
            ],
            seed=doc["seed"],
            found_at=doc["found_at"],
            status=doc["status"],
        )


def specimen_id(machine_texts: Iterable[str], seed: int) -> str:
    """Content hash of the ordered member texts and the seed."""
    h = hashlib.sha256()
    for text in machine_texts:
        h.update(text.encode())
        h.update(b"\x00")
    h.update(str(seed).encode())
    return h.hexdigest()[:16]


_SYLLABLES = (
    "ba be bi bo bu ca ce co cu da de do du fa fe fi fo ga ge gi go gu "
    "la le li lo lu ma me mi mo mu na ne ni no nu pa pe pi po ra re ri "
    "ro ru sa se si so su ta te ti to tu va ve vi vo xa xi za zo zu"
).split()
_SUFFIXES = ("us", "i", "a", "um")


def fancy_name(spec_id: str) -> str:
    """Deterministic binomial-style name.

    Each word is two syllables plus a Latin-ish suffix, capitalized. The
    name space holds (69^2 * 4)^2, about 3.6e8, combinations, so ten
    thousand specimens collide only by bad luck.
    """
    rng = SplitMix64(int(spec_id, 16))
    words = []
    for _ in range(2):
        word = (rng.choice(_SYLLABLES) + rng.choice(_SYLLABLES)
                + rng.choice(_SUFFIXES))
        words.append(word.capitalize())
    return " ".join(words)


def validate_location(location) -> tuple[float, float] | None:
    if location is None:
        return None
    lat, lon = location
    if not -90.0 <= lat <= 90.0:
        raise ValueError(f"latitude {lat} outside [-90, 90]")
    if not -180.0 <= lon <= 180.0:
        raise ValueError(f"longitude {lon} outside [-180, 180]")
    return (float(lat), float(lon))


def make_specimen(run: RunResult, breed: Breed, observer: str,
                  location: tuple[float, float] | None = None,
                  found_at: str | None = None) -> Specimen:
    """Freeze a run into a catalog record.

    Runs that hit their budget come in flagged infinite; everything else is
    active. The seed must be present on the run, otherwise the record could
    not be replayed for verification.
    """
    machines = breed.machines()
    if len(run.selection_counts) != len(machines):
        raise ValueError(
            f"run has {len(run.selection_counts)} selection counts for "
            f"{len(machines)} breed members")
    if run.seed is None:
        raise ValueError("run has no seed; cannot make a replayable specimen")
    sid = specimen_id((m.text for m in machines), run.seed)
    status = STATUS_FLAGGED if run.termination == BUDGET_EXCEEDED \
        else STATUS_ACTIVE
    if found_at is None:
        found_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Specimen(
        id=sid,
        fancy_name=fancy_name(sid),
        dimension=run.dimension,
        n_steps=run.n_steps,
        o2_mean=run.o2_mean,
        o2_floor=run.o2_floor,
        observer=observer,
        location=validate_location(location),
        machines=[
            SpecimenMachine(m.id, m.text, count)
            for m, count in zip(machines, run.selection_counts)
        ],
        seed=run.seed,
        found_at=found_at,
        status=status,
    )


_SORT_KEYS = ("dimension", "n_steps", "found_at")
_NEG_INF = float("-inf")


class CatalogStore:
    """Directory-backed specimen store with a scan-rebuilt index."""

    def __init__(self, root):
        self.root = str(root)
        self.specimen_dir = os.path.join(self.root, "specimens")
        os.makedirs(self.specimen_dir, exist_ok=True)
        self._index: dict[str, Specimen] = {}
        self.rebuild_index()

    def rebuild_index(self) -> int:
        """Rescan the directory; returns the number of specimens indexed."""
        index: dict[str, Specimen] = {}
        for entry in sorted(os.listdir(self.specimen_dir)):
            if not entry.endswith(".json"):
                continue
            with open(os.path.join(self.specimen_dir, entry)) as fh:
                spec = Specimen.from_doc(json.load(fh))
            index[spec.id] = spec
        self._index = index
        return len(index)

    def _path(self, spec_id: str) -> str:
        return os.path.join(self.specimen_dir, f"{spec_id}.json")

    def _write(self, specimen: Specimen) -> None:
        # Write-then-rename so a crash never leaves a torn document.
        fd, tmp = tempfile.mkstemp(dir=self.specimen_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(specimen.to_doc(), fh, indent=2, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, self._path(specimen.id))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        self._index[specimen.id] = specimen

    def save(self, specimen: Specimen) -> str:
        if specimen.status not in STATUSES:
            raise ValueError(f"unknown status {specimen.status!r}")
        self._write(specimen)
        return specimen.id

    def __contains__(self, spec_id: str) -> bool:
        return spec_id in self._index

    def get(self, spec_id: str) -> Specimen:
        spec = self._index.get(spec_id)
        if spec is None:
            raise UnknownSpecimenError(spec_id)
        return spec

    def list(self, status: str | None = None, sort: str = "found_at",
             descending: bool = True, limit: int | None = None,
             offset: int = 0, include_deleted: bool = False) -> list[Specimen]:
        """Sorted specimen view; deleted ones stay hidden unless asked for.

        Undefined dimensions rank below every defined one, the catalog
        cannot rank what it cannot measure.
        """
        if sort not in _SORT_KEYS:
            raise ValueError(f"sort key must be one of {_SORT_KEYS}")
        specs = list(self._index.values())
        if status is not None:
            if status not in STATUSES:
                raise ValueError(f"unknown status {status!r}")
            specs = [s for s in specs if s.status == status]
        elif not include_deleted:
            specs = [s for s in specs if s.status != STATUS_DELETED]

        def key(s: Specimen):
            if sort == "dimension":
                primary = s.dimension if s.dimension is not None else _NEG_INF
            elif sort == "n_steps":
                primary = s.n_steps
            else:
                primary = s.found_at
            return primary

        specs.sort(key=lambda s: s.id)  # stable tiebreak
        specs.sort(key=key, reverse=descending)
        if offset:
            specs = specs[offset:]
        if limit is not None:
            specs = specs[:limit]
        return specs

    def set_status(self, spec_id: str, status: str) -> Specimen:
        spec = self.get(spec_id)
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        if status != spec.status \
                and (spec.status, status) not in _ALLOWED_TRANSITIONS:
            raise InvalidStatusTransition(
                f"cannot move specimen from {spec.status} to {status}")
        spec.status = status
        self._write(spec)
        return spec

    def rename(self, spec_id: str, name: str) -> Specimen:
        if not name or len(name) > 64:
            raise ValueError("fancy name must be 1..64 characters")
        spec = self.get(spec_id)
        spec.fancy_name = name
        self._write(spec)
        return spec
