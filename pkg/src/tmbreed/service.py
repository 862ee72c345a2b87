"""HTTP facade over the catalog and the breeder.

Volunteer workers fetch search tasks and submit the breeds they found;
curators rename specimens, flag them infinite, or delete them; the gallery
and analysis tools read specimen pages and IQ/EQ stats.

No submission is trusted: the server replays every candidate from its
recorded (machines, seed) and rejects any claim it cannot reproduce, so the
catalog only ever holds verified runs. Replay is cheap and deterministic,
which makes it a perfect verifier; no redundancy voting needed.

Every response carries an explicit ok/error discriminator. Errors use
400-class codes for malformed documents, 403 for missing curator rights,
404 for unknown ids, 409 for forbidden status moves and 422 for claims that
failed re-validation.
"""

from __future__ import annotations

import io
import csv
import threading

from fastapi import FastAPI, Header, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .breeder import Pool, SearchParams
from .catalog import (
    STATUS_ACTIVE,
    STATUS_DELETED,
    STATUS_FLAGGED,
    STATUSES,
    CatalogStore,
    InvalidStatusTransition,
    Specimen,
    UnknownSpecimenError,
    make_specimen,
)
from .intelligence import RunSample, estimate_iq_eq, fit_power_law, tables_to_doc
from .machine import MachineParseError, machines_by_id, parse_machine
from .orchestra import BUDGET_EXCEEDED, TERMINATIONS, Breed, orchestrate
from .rand import derive_seed


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 detail: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail or {}


def _require(doc: dict, key: str, kind=None):
    if key not in doc:
        raise ApiError(400, "malformed-document", f"missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ApiError(400, "malformed-document",
                       f"field {key!r} has the wrong type")
    return value


def parse_submission(doc: dict, default_observer: str | None = None,
                     default_location=None) -> dict:
    """Normalize a submission document, raising 400s on malformed input."""
    if not isinstance(doc, dict):
        raise ApiError(400, "malformed-document", "submission must be an object")
    machines_field = _require(doc, "machines", list)
    if not machines_field:
        raise ApiError(400, "malformed-document", "submission has no machines")
    members = []
    for i, entry in enumerate(machines_field):
        if not isinstance(entry, dict) or "text" not in entry:
            raise ApiError(400, "malformed-document",
                           f"machine entry {i} needs a 'text' field")
        try:
            members.append(parse_machine(entry["text"],
                                         name=entry.get("name")))
        except MachineParseError as exc:
            raise ApiError(400, "malformed-machine",
                           f"machine entry {i}: {exc}")
    seed = _require(doc, "seed", int)
    n_steps = _require(doc, "n_steps", int)
    if n_steps < 1:
        raise ApiError(400, "malformed-document", "n_steps must be >= 1")
    counts = _require(doc, "selection_counts", list)
    if len(counts) != len(members) or not all(isinstance(c, int) for c in counts):
        raise ApiError(400, "malformed-document",
                       "selection_counts must hold one integer per machine")
    termination = _require(doc, "termination", str)
    if termination not in TERMINATIONS:
        raise ApiError(400, "malformed-document",
                       f"termination must be one of {TERMINATIONS}")
    observer = doc.get("observer", default_observer)
    if not observer:
        raise ApiError(400, "malformed-document", "missing observer name")
    location = doc.get("location", default_location)
    if location is not None:
        if not isinstance(location, dict) or "latitude" not in location \
                or "longitude" not in location:
            raise ApiError(400, "malformed-document",
                           "location needs latitude and longitude")
        lat, lon = location["latitude"], location["longitude"]
        if not (-90 <= lat <= 90 and -180 <= lon <= 180):
            raise ApiError(400, "malformed-document",
                           "location out of range")
        location = (lat, lon)
    return {
        "breed": Breed([m.id for m in members], machines_by_id(members)),
        "seed": seed,
        "n_steps": n_steps,
        "selection_counts": [int(c) for c in counts],
        "termination": termination,
        "observer": observer,
        "location": location,
    }


def revalidate(sub: dict) -> Specimen:
    """Replay the claimed run; reject with both values on any mismatch."""
    claimed_n = sub["n_steps"]
    if sub["termination"] == BUDGET_EXCEEDED:
        run = orchestrate(sub["breed"], sub["seed"], claimed_n)
    else:
        run = orchestrate(sub["breed"], sub["seed"], claimed_n + 1)
    if (run.termination != sub["termination"] or run.n_steps != claimed_n
            or run.selection_counts != sub["selection_counts"]):
        raise ApiError(
            422, "validation-failed",
            "claimed run could not be reproduced from (machines, seed)",
            detail={
                "claimed": {
                    "n_steps": claimed_n,
                    "selection_counts": sub["selection_counts"],
                    "termination": sub["termination"],
                },
                "reproduced": {
                    "n_steps": run.n_steps,
                    "selection_counts": run.selection_counts,
                    "termination": run.termination,
                },
            })
    return make_specimen(run, sub["breed"], sub["observer"], sub["location"])


def create_app(store: CatalogStore, pool: Pool | None = None,
               params: SearchParams | None = None, curator_token: str = "",
               master_seed: int = 0) -> FastAPI:
    app = FastAPI(title="tmbreed catalog service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    params = params or SearchParams()
    tasks: dict[str, dict] = {}
    task_lock = threading.Lock()
    write_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"ok": False, "error": {
                "code": exc.code, "message": exc.message, **exc.detail}},
        )

    def check_token(token: str | None):
        if not curator_token or token != curator_token:
            raise ApiError(403, "unauthorized", "curator token required")

    @app.get("/api/tasks/next")
    def next_task():
        if pool is None:
            raise ApiError(503, "no-pool", "server has no search pool configured")
        with task_lock:
            number = len(tasks) + 1
            task_id = f"t-{number:06d}"
            task = {
                "task_id": task_id,
                "pool": pool.to_doc(),
                "params": params.to_doc(),
                "assigned_seed": derive_seed(master_seed, number),
            }
            tasks[task_id] = task
        return {"ok": True, "task": task}

    @app.get("/api/tasks/{task_id}")
    def get_task(task_id: str):
        task = tasks.get(task_id)
        if task is None:
            raise ApiError(404, "unknown-task", f"no task {task_id!r}")
        return {"ok": True, "task": task}

    def accept(sub: dict) -> tuple[str, bool]:
        """Validate and store; duplicate ids return the original, unchanged."""
        specimen = revalidate(sub)
        with write_lock:
            if specimen.id in store:
                return specimen.id, False
            store.save(specimen)
            return specimen.id, True

    @app.post("/api/specimens")
    def submit_specimen(doc: dict):
        sub = parse_submission(doc)
        spec_id, created = accept(sub)
        return {"ok": True, "id": spec_id, "created": created,
                "specimen": store.get(spec_id).to_doc()}

    @app.post("/api/results")
    def submit_results(doc: dict):
        task_id = _require(doc, "task_id", str)
        if task_id not in tasks:
            raise ApiError(404, "unknown-task", f"no task {task_id!r}")
        observer = _require(doc, "observer", str)
        candidates = _require(doc, "candidates", list)
        location = doc.get("location")
        accepted = []
        rejected = []
        for i, cand in enumerate(candidates):
            try:
                sub = parse_submission(cand, default_observer=observer,
                                       default_location=location)
                spec_id, _created = accept(sub)
                accepted.append(spec_id)
            except ApiError as exc:
                rejected.append({"index": i, "code": exc.code,
                                 "message": exc.message, **exc.detail})
        return {"ok": True, "task_id": task_id,
                "accepted": accepted, "rejected": rejected}

    @app.get("/api/specimens")
    def list_specimens(status: str | None = Query(None),
                       sort: str = Query("found_at"),
                       order: str = Query("desc"),
                       limit: int = Query(50, ge=1, le=1000),
                       offset: int = Query(0, ge=0),
                       include_deleted: bool = Query(False)):
        if status is not None and status not in STATUSES:
            raise ApiError(400, "bad-filter", f"unknown status {status!r}")
        try:
            specs = store.list(status=status, sort=sort,
                               descending=(order != "asc"),
                               include_deleted=include_deleted)
        except ValueError as exc:
            raise ApiError(400, "bad-filter", str(exc))
        page = specs[offset:offset + limit]
        return {"ok": True, "total": len(specs), "limit": limit,
                "offset": offset,
                "specimens": [s.to_doc() for s in page]}

    @app.get("/api/specimens/{spec_id}")
    def get_specimen(spec_id: str, include_deleted: bool = Query(False)):
        try:
            spec = store.get(spec_id)
        except UnknownSpecimenError:
            raise ApiError(404, "unknown-specimen", f"no specimen {spec_id!r}")
        if spec.status == STATUS_DELETED and not include_deleted:
            raise ApiError(404, "unknown-specimen",
                           f"specimen {spec_id!r} is deleted")
        return {"ok": True, "specimen": spec.to_doc()}

    def curate(spec_id: str, doc: dict, token: str | None) -> Specimen:
        check_token(token)
        action = _require(doc, "action", str)
        try:
            if action == "rename":
                name = _require(doc, "fancy_name", str)
                with write_lock:
                    return store.rename(spec_id, name)
            if action == "flag_infinite":
                with write_lock:
                    return store.set_status(spec_id, STATUS_FLAGGED)
            if action == "delete":
                with write_lock:
                    return store.set_status(spec_id, STATUS_DELETED)
        except UnknownSpecimenError:
            raise ApiError(404, "unknown-specimen", f"no specimen {spec_id!r}")
        except InvalidStatusTransition as exc:
            raise ApiError(409, "invalid-transition", str(exc))
        except ValueError as exc:
            raise ApiError(400, "malformed-document", str(exc))
        raise ApiError(400, "malformed-document",
                       f"unknown curation action {action!r}")

    @app.patch("/api/specimens/{spec_id}")
    def patch_specimen(spec_id: str, doc: dict,
                       x_curator_token: str | None = Header(None)):
        spec = curate(spec_id, doc, x_curator_token)
        return {"ok": True, "specimen": spec.to_doc()}

    @app.delete("/api/specimens/{spec_id}")
    def delete_specimen(spec_id: str,
                        x_curator_token: str | None = Header(None)):
        spec = curate(spec_id, {"action": "delete"}, x_curator_token)
        return {"ok": True, "specimen": spec.to_doc()}

    @app.get("/api/stats")
    def stats(format: str = Query("json")):
        active = store.list(status=STATUS_ACTIVE)
        samples = [RunSample(s.o2_floor, s.n_steps, True) for s in active
                   if s.n_steps >= 1]
        if not samples:
            if format == "csv":
                return PlainTextResponse("table,key,value\n",
                                         media_type="text/csv")
            return {"ok": True, "insufficient_data": True, "sample_count": 0,
                    "iq": {}, "eq": {}, "fit": None}
        table = estimate_iq_eq(samples)
        if format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(("table", "key", "value"))
            for z, n in table.iq.items():
                writer.writerow(("iq", z, n))
            for n, z in table.eq.items():
                writer.writerow(("eq", n, z))
            return PlainTextResponse(buf.getvalue(), media_type="text/csv")
        doc = tables_to_doc(table)
        try:
            fit = fit_power_law(table).to_doc()
            fit_error = None
        except ValueError as exc:
            fit = None
            fit_error = str(exc)
        return {"ok": True, "insufficient_data": False, "fit": fit,
                "fit_error": fit_error, **doc}

    return app
