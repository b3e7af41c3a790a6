"""HTTP/JSON service hosting the elicitation loop for the browser UI.

State is an in-memory problem store (optionally mirrored to a JSON file);
SMAA runs are background jobs polled through ``/jobs/{id}``.  Every
mutation bumps the problem's version so clients can flag stale result
panels.  Errors use the envelope ``{"error": {"code", "message", ...}}``.
"""

from __future__ import annotations

import dataclasses
import json
import threading
import uuid
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import elicitation
from ..elicitation import IncompatiblePreferencesError
from ..indices import importance_profile, interaction_profile
from ..model import EvaluationMatrix, validate
from ..smaa import har_sample
from .fixtures import fixture_file_text, fixture_names
from .io import (
    ProblemBundle,
    ProblemFormatError,
    evaluations_from_csv,
    problem_from_dict,
    problem_to_dict,
    sampler_config_from_dict,
    smaa_result_to_dict,
    statement_from_dict,
)
from .report import describe_statement


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra: Any):
        super().__init__(message)
        self.status = status
        self.code = code
        self.extra = extra


class Store:
    """Problems and jobs, guarded by one lock; desk-scale state."""

    def __init__(self, path: str | None = None):
        self.lock = threading.Lock()
        self.path = Path(path) if path else None
        self.problems: dict[str, dict[str, Any]] = {}
        self.jobs: dict[str, dict[str, Any]] = {}
        self._counter = 0
        if self.path and self.path.exists():
            self._load()

    def _load(self) -> None:
        doc = json.loads(self.path.read_text())
        for pid, entry in doc.get("problems", {}).items():
            evaluations = evaluations_from_csv(entry["evaluations_csv"])
            bundle = problem_from_dict(entry["problem"], evaluations)
            self.problems[pid] = {
                "bundle": bundle,
                "version": entry.get("version", 1),
                "evaluations_csv": entry["evaluations_csv"],
            }
        self._counter = doc.get("counter", len(self.problems))

    def persist(self) -> None:
        if not self.path:
            return
        doc = {
            "counter": self._counter,
            "problems": {
                pid: {
                    "problem": problem_to_dict(e["bundle"]),
                    "evaluations_csv": e["evaluations_csv"],
                    "version": e["version"],
                }
                for pid, e in self.problems.items()
            },
        }
        self.path.write_text(json.dumps(doc, indent=2, sort_keys=True))

    def new_id(self) -> str:
        self._counter += 1
        return f"p{self._counter}"

    def entry(self, pid: str) -> dict[str, Any]:
        if pid not in self.problems:
            raise ApiError(404, "unknown_problem", f"no problem with id {pid!r}")
        return self.problems[pid]

    def running_job_for(self, pid: str) -> str | None:
        for jid, job in self.jobs.items():
            if job["problem_id"] == pid and job["status"] == "running":
                return jid
        return None


def _evaluations_from_body(body: dict[str, Any]) -> tuple[EvaluationMatrix, str]:
    if "evaluations_csv" in body:
        text = str(body["evaluations_csv"])
        return evaluations_from_csv(text), text
    if "evaluations" in body:
        ev = body["evaluations"]
        try:
            matrix = EvaluationMatrix(
                tuple(str(a) for a in ev["alternatives"]),
                tuple(str(c) for c in ev["criteria"]),
                tuple(tuple(float(v) for v in row) for row in ev["values"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFormatError(f"bad evaluations object: {exc}") from exc
        from .io import evaluations_to_csv

        return matrix, evaluations_to_csv(matrix)
    raise ProblemFormatError("body needs 'evaluations_csv' or 'evaluations'")


def _problem_payload(pid: str, entry: dict[str, Any]) -> dict[str, Any]:
    bundle: ProblemBundle = entry["bundle"]
    ev = bundle.problem.evaluations
    return {
        "id": pid,
        "version": entry["version"],
        "problem": problem_to_dict(bundle),
        "evaluations": {
            "alternatives": list(ev.alternatives),
            "criteria": list(ev.criteria),
            "values": [list(row) for row in ev.values],
        },
        "statement_labels": [describe_statement(s) for s in bundle.problem.statements],
    }


def create_app(store_path: str | None = None) -> FastAPI:
    app = FastAPI(title="ldchoquet workbench", version="0.1.0")
    store = Store(store_path)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        payload = {"error": {"code": exc.code, "message": str(exc), **exc.extra}}
        return JSONResponse(status_code=exc.status, content=payload)

    @app.exception_handler(ProblemFormatError)
    async def _format_error(_request: Request, exc: ProblemFormatError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "invalid_problem", "message": str(exc)}},
        )

    def _validated_bundle(bundle: ProblemBundle) -> None:
        report = validate(bundle.problem)
        if not report.ok:
            raise ApiError(422, "invalid_statement", "problem failed validation", issues=report.messages())

    @app.get("/fixtures")
    async def list_fixtures():
        return {"fixtures": fixture_names()}

    @app.post("/problems", status_code=201)
    async def create_problem(body: dict):
        if "fixture" in body:
            problem_text, eval_text = fixture_file_text(str(body["fixture"]))
            doc = json.loads(problem_text)
            evaluations, csv_text = evaluations_from_csv(eval_text), eval_text
        else:
            if "problem" not in body:
                raise ProblemFormatError("body needs 'problem' (or 'fixture')")
            doc = body["problem"]
            evaluations, csv_text = _evaluations_from_body(body)
        bundle = problem_from_dict(doc, evaluations)
        _validated_bundle(bundle)
        with store.lock:
            pid = store.new_id()
            store.problems[pid] = {"bundle": bundle, "version": 1, "evaluations_csv": csv_text}
            store.persist()
            return _problem_payload(pid, store.problems[pid])

    @app.get("/problems")
    async def list_problems():
        with store.lock:
            return {
                "problems": [
                    {"id": pid, "name": e["bundle"].name, "version": e["version"]}
                    for pid, e in store.problems.items()
                ]
            }

    @app.get("/problems/{pid}")
    async def get_problem(pid: str):
        with store.lock:
            return _problem_payload(pid, store.entry(pid))

    @app.put("/problems/{pid}/statements")
    async def put_statements(pid: str, body: dict):
        if "statements" not in body:
            raise ProblemFormatError("body needs 'statements'")
        statements = tuple(statement_from_dict(s) for s in body["statements"])
        with store.lock:
            entry = store.entry(pid)
            bundle: ProblemBundle = entry["bundle"]
            new_problem = dataclasses.replace(bundle.problem, statements=statements)
            new_bundle = ProblemBundle(new_problem, bundle.name, bundle.smaa_defaults)
            _validated_bundle(new_bundle)
            entry["bundle"] = new_bundle
            entry["version"] += 1
            store.persist()
            return _problem_payload(pid, entry)

    @app.get("/problems/{pid}/feasibility")
    async def feasibility(pid: str):
        with store.lock:
            entry = store.entry(pid)
            bundle: ProblemBundle = entry["bundle"]
            version = entry["version"]
        cs = elicitation.build_edm(bundle.problem)
        result = elicitation.check_compatibility(cs)
        payload: dict[str, Any] = {
            "version": version,
            "epsilon_star": result.epsilon_star,
            "compatible": result.feasible,
            "conflicts": [],
        }
        if not result.feasible and bundle.problem.statements:
            conflicts = elicitation.diagnose_incompatibility(cs)
            payload["conflicts"] = [list(c) for c in conflicts]
        return payload

    @app.get("/problems/{pid}/ror")
    async def ror_endpoint(pid: str):
        with store.lock:
            entry = store.entry(pid)
            bundle: ProblemBundle = entry["bundle"]
            version = entry["version"]
        try:
            result = elicitation.ror(bundle.problem)
        except IncompatiblePreferencesError as exc:
            raise ApiError(422, "incompatible", str(exc))
        return {
            "version": version,
            "alternatives": list(result.alternatives),
            "necessary": result.necessary.tolist(),
            "possible": result.possible.tolist(),
            "necessary_pairs": [list(p) for p in result.necessary_pairs()],
        }

    def _run_job(jid: str, bundle: ProblemBundle, cfg) -> None:
        from ..smaa import smaa_run

        try:
            result = smaa_run(bundle.problem, cfg)
            payload = smaa_result_to_dict(result)
            with store.lock:
                store.jobs[jid]["status"] = "done"
                store.jobs[jid]["result"] = payload
        except Exception as exc:  # surfaced through GET /jobs
            with store.lock:
                store.jobs[jid]["status"] = "failed"
                store.jobs[jid]["error"] = str(exc)

    @app.post("/problems/{pid}/smaa", status_code=202)
    async def start_smaa(pid: str, body: dict | None = None):
        with store.lock:
            entry = store.entry(pid)
            bundle: ProblemBundle = entry["bundle"]
            version = entry["version"]
            running = store.running_job_for(pid)
            if running is not None:
                raise ApiError(409, "job_running", f"job {running} is still running for {pid}")
            cfg = sampler_config_from_dict({**(bundle.smaa_defaults or {}), **(body or {})})
            jid = uuid.uuid4().hex[:12]
            store.jobs[jid] = {
                "job_id": jid,
                "problem_id": pid,
                "version": version,
                "status": "running",
                "result": None,
                "error": None,
            }
        thread = threading.Thread(target=_run_job, args=(jid, bundle, cfg), daemon=True)
        thread.start()
        return {"job_id": jid, "problem_id": pid, "version": version, "status": "running"}

    @app.get("/jobs/{jid}")
    async def get_job(jid: str):
        with store.lock:
            if jid not in store.jobs:
                raise ApiError(404, "unknown_job", f"no job with id {jid!r}")
            return dict(store.jobs[jid])

    @app.get("/problems/{pid}/indices")
    async def indices(pid: str, sample: str = "barycenter", samples: int = 4000, seed: int = 0):
        if sample != "barycenter":
            raise ApiError(422, "unknown_sample_mode", f"unsupported sample mode {sample!r}")
        with store.lock:
            entry = store.entry(pid)
            bundle: ProblemBundle = entry["bundle"]
            version = entry["version"]
        cs = elicitation.build_edm(bundle.problem)
        result = elicitation.check_compatibility(cs)
        if not result.feasible:
            raise ApiError(422, "incompatible", "cannot derive indices for an incompatible problem")
        cfg = sampler_config_from_dict({"samples": samples, "seed": seed, "burn_in": 500, "thinning": 5})
        vectors = har_sample(cs, cfg)
        ldc = cs.layout.ldc_from_vector(vectors.mean(axis=1))
        imp = importance_profile(ldc)
        inter = interaction_profile(ldc)
        return {
            "version": version,
            "importance": {
                "labels": list(imp.level_labels),
                "per_level": {c: list(v) for c, v in imp.per_level.items()},
                "comprehensive": imp.comprehensive,
            },
            "interaction": {
                "labels": list(inter.level_labels),
                "per_level": {f"{i}+{j}": list(v) for (i, j), v in inter.per_level.items()},
                "comprehensive": {f"{i}+{j}": v for (i, j), v in inter.comprehensive.items()},
            },
        }

    return app
