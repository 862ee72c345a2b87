"""Client for the catalog service, and the volunteer worker loop.

The worker fetches a search task, runs the evolutionary search with the
seed the server assigned, and submits its best breed plus any breeds it
flagged infinite (those are exactly what curators want to see and delete).
Submissions carry everything the server needs to replay the run.
"""

from __future__ import annotations

from typing import Sequence

from .breeder import Pool, SearchParams, evolve
from .orchestra import Breed, RunResult, orchestrate
from .rand import derive_seed


class ClientError(Exception):
    def __init__(self, message: str, status: int | None = None,
                 payload: dict | None = None):
        super().__init__(message)
        self.status = status
        self.payload = payload or {}


def submission_from_run(run: RunResult, breed: Breed,
                        observer: str | None = None,
                        location: tuple[float, float] | None = None) -> dict:
    """Submission document the service can re-validate."""
    if run.seed is None:
        raise ValueError("run has no seed; it cannot be submitted")
    doc = {
        "machines": [{"name": m.name, "text": m.text}
                     for m in breed.machines()],
        "seed": run.seed,
        "n_steps": run.n_steps,
        "selection_counts": list(run.selection_counts),
        "termination": run.termination,
    }
    if observer is not None:
        doc["observer"] = observer
    if location is not None:
        doc["location"] = {"latitude": location[0], "longitude": location[1]}
    return doc


class GameClient:
    """Thin wrapper over the service endpoints.

    ``http`` is anything with requests-style get/post/patch/delete methods;
    it defaults to a requests session, and tests pass an in-process client.
    """

    def __init__(self, base_url: str, http=None, curator_token: str | None = None):
        if http is None:
            import requests

            http = requests.Session()
        self.base_url = base_url.rstrip("/")
        self.http = http
        self.curator_token = curator_token

    def _url(self, path: str) -> str:
        return f"{self.base_url}{path}"

    def _check(self, resp) -> dict:
        try:
            payload = resp.json()
        except ValueError:
            raise ClientError(f"non-JSON response (HTTP {resp.status_code})",
                              resp.status_code)
        if resp.status_code >= 400 or not payload.get("ok", False):
            error = payload.get("error", {})
            raise ClientError(error.get("message", f"HTTP {resp.status_code}"),
                              resp.status_code, payload)
        return payload

    def fetch_next_task(self) -> dict:
        return self._check(self.http.get(self._url("/api/tasks/next")))["task"]

    def get_task(self, task_id: str) -> dict:
        return self._check(
            self.http.get(self._url(f"/api/tasks/{task_id}")))["task"]

    def submit_results(self, task_id: str, observer: str,
                       candidates: Sequence[dict],
                       location: tuple[float, float] | None = None) -> dict:
        body = {"task_id": task_id, "observer": observer,
                "candidates": list(candidates)}
        if location is not None:
            body["location"] = {"latitude": location[0],
                                "longitude": location[1]}
        return self._check(self.http.post(self._url("/api/results"), json=body))

    def submit_specimen(self, doc: dict) -> dict:
        return self._check(self.http.post(self._url("/api/specimens"), json=doc))

    def list_specimens(self, **filters) -> dict:
        return self._check(
            self.http.get(self._url("/api/specimens"), params=filters))

    def get_specimen(self, spec_id: str, include_deleted: bool = False) -> dict:
        params = {"include_deleted": include_deleted} if include_deleted else {}
        return self._check(
            self.http.get(self._url(f"/api/specimens/{spec_id}"),
                          params=params))["specimen"]

    def curate(self, spec_id: str, action: str,
               fancy_name: str | None = None) -> dict:
        body = {"action": action}
        if fancy_name is not None:
            body["fancy_name"] = fancy_name
        headers = {}
        if self.curator_token is not None:
            headers["X-Curator-Token"] = self.curator_token
        return self._check(
            self.http.patch(self._url(f"/api/specimens/{spec_id}"),
                            json=body, headers=headers))["specimen"]

    def stats(self) -> dict:
        return self._check(self.http.get(self._url("/api/stats")))

    def stats_csv(self) -> str:
        resp = self.http.get(self._url("/api/stats"), params={"format": "csv"})
        if resp.status_code >= 400:
            raise ClientError(f"HTTP {resp.status_code}", resp.status_code)
        return resp.text


def run_worker(client: GameClient, observer: str,
               location: tuple[float, float] | None = None,
               max_flagged: int = 5,
               param_overrides: dict | None = None) -> dict:
    """One volunteer cycle: fetch task, search, submit what was found."""
    task = client.fetch_next_task()
    pool = Pool.from_doc(task["pool"])
    params_doc = dict(task["params"])
    if param_overrides:
        params_doc.update(param_overrides)
    params = SearchParams.from_doc(params_doc)
    params.master_seed = task["assigned_seed"]
    report = evolve(pool, params)
    candidates = []
    if report.best_run is not None and report.best_run.seed is not None:
        candidates.append(submission_from_run(report.best_run,
                                              report.best_breed))
    for i, breed in enumerate(report.flagged_infinite[:max_flagged]):
        run_seed = derive_seed(params.master_seed, 1_000_000 + i)
        run = orchestrate(breed, run_seed, params.run_budget)
        candidates.append(submission_from_run(run, breed))
    outcome = client.submit_results(task["task_id"], observer, candidates,
                                    location=location)
    return {
        "task_id": task["task_id"],
        "best_fitness": report.best_fitness,
        "candidates_submitted": len(candidates),
        "accepted": outcome["accepted"],
        "rejected": outcome["rejected"],
    }
