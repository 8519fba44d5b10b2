"""HTTP API over sessions, steps, and jobs.

Routes (all JSON):

    GET  /api/health
    GET  /api/taxonomies?session=ID          list loaded taxonomies
    POST /api/taxonomies?session=ID          upload a taxonomy document
    POST /api/entities?session=ID            upload an entity list document
    POST /api/sessions                       create a session {"name": ...}
    GET  /api/sessions/{id}                  session summary
    POST /api/sessions/{id}/steps            {"kind", "params"} -> {"jobId"}
    GET  /api/jobs/{id}                      poll a job (id as returned by steps)
    GET  /api/sessions/{id}/artifacts/{aid}  artifact payload + provenance
    GET  /api/sessions/{id}/entity-table?artifact=ID
    POST /api/sessions/{id}/save             {"path"} -> write session file
    POST /api/sessions/{id}/load             {"path"} -> replace session state

Taxonomy and entity ingestion is session-scoped via the `session` query
parameter. Job ids returned by the steps endpoint are "sessionId.jobId" so
they stay unique across sessions. Errors use {"code", "message", "context"}
with 400 for validation, 404 for unknown ids, 409 for version conflicts.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..errors import (
    CorruptFileError,
    UnknownIdError,
    ValidationError,
    VersionError,
)
from ..taxonomy import parse_taxonomy, taxonomy_to_dict
from .formats import parse_entities
from .jobs import JobRunner
from .report import export_report
from .session import Session, load_session, save_session
from .steps import replay_artifact


class StepRequest(BaseModel):
    kind: str
    params: dict = {}
    seed: Optional[int] = None


class SessionRequest(BaseModel):
    name: str = "session"


class PathRequest(BaseModel):
    path: str


class ReportRequest(BaseModel):
    artifacts: Optional[list[str]] = None


def _error_response(status: int, code: str, exc: ValidationError) -> JSONResponse:
    context = getattr(exc, "context", {}) or {}
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": str(exc), "context": context},
    )


def create_app(sync: bool = False, workers: int = 2) -> FastAPI:
    app = FastAPI(title="taxlab", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    runner = JobRunner(workers=workers, sync=sync)
    registry_lock = threading.Lock()
    counter = {"session": 0}

    def get_session(session_id: Optional[str]) -> Session:
        if not session_id:
            raise ValidationError("session query parameter is required")
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise UnknownIdError("unknown session id", session=session_id)
        return session

    @app.exception_handler(UnknownIdError)
    async def _unknown(request: Request, exc: UnknownIdError):
        return _error_response(404, "unknownId", exc)

    @app.exception_handler(VersionError)
    async def _version(request: Request, exc: VersionError):
        return _error_response(409, "versionConflict", exc)

    @app.exception_handler(CorruptFileError)
    async def _corrupt(request: Request, exc: CorruptFileError):
        return _error_response(400, "corruptFile", exc)

    @app.exception_handler(ValidationError)
    async def _invalid(request: Request, exc: ValidationError):
        return _error_response(400, "validation", exc)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/sessions")
    def create_session(body: SessionRequest):
        with registry_lock:
            counter["session"] += 1
            session_id = f"s{counter['session']}"
            sessions[session_id] = Session(name=body.name)
        return {"id": session_id, "name": body.name}

    def _summary(session_id: str, session: Session) -> dict:
        with session.lock:
            return {
                "id": session_id,
                "name": session.name,
                "taxonomies": sorted(session.taxonomies),
                "entityCount": len(session.entities),
                "plans": sorted(session.plans),
                "artifacts": [
                    {"id": a.id, "kind": a.kind} for a in session.artifacts.values()
                ],
                "jobs": [
                    {"id": f"{session_id}.{j.id}", "kind": j.kind, "status": j.status}
                    for j in session.jobs.values()
                ],
            }

    @app.get("/api/sessions/{session_id}")
    def session_summary(session_id: str):
        return _summary(session_id, get_session(session_id))

    @app.get("/api/taxonomies")
    def list_taxonomies(session: Optional[str] = Query(default=None)):
        s = get_session(session)
        with s.lock:
            return [
                {"name": t.name, "nodes": len(t.nodes)}
                for t in s.taxonomies.values()
            ]

    @app.post("/api/taxonomies")
    async def upload_taxonomy(request: Request, session: Optional[str] = Query(default=None)):
        s = get_session(session)
        taxonomy = parse_taxonomy(await request.body())
        s.add_taxonomy(taxonomy)
        return {"name": taxonomy.name, "nodes": len(taxonomy.nodes)}

    @app.get("/api/taxonomies/{name}")
    def get_taxonomy(name: str, session: Optional[str] = Query(default=None)):
        s = get_session(session)
        with s.lock:
            taxonomy = s.taxonomies.get(name)
        if taxonomy is None:
            raise UnknownIdError("unknown taxonomy", taxonomy=name)
        return taxonomy_to_dict(taxonomy)

    @app.post("/api/entities")
    async def upload_entities(request: Request, session: Optional[str] = Query(default=None)):
        s = get_session(session)
        entities = parse_entities(await request.body())
        return s.ingest_entities(entities)

    @app.post("/api/sessions/{session_id}/steps")
    def submit_step(session_id: str, body: StepRequest):
        session = get_session(session_id)
        job = runner.submit(session, body.kind, body.params, seed=body.seed)
        return {"jobId": f"{session_id}.{job.id}", "status": job.status}

    @app.get("/api/jobs/{job_id}")
    def poll_job(job_id: str):
        if "." not in job_id:
            raise UnknownIdError("unknown job id", job=job_id)
        session_id, local_id = job_id.split(".", 1)
        session = get_session(session_id)
        job = session.job(local_id)
        return {
            "id": job_id,
            "kind": job.kind,
            "status": job.status,
            "result": job.result,
            "error": job.error,
        }

    @app.get("/api/sessions/{session_id}/artifacts/{artifact_id}")
    def get_artifact(session_id: str, artifact_id: str):
        session = get_session(session_id)
        artifact = session.artifact(artifact_id)
        return {
            "id": artifact.id,
            "kind": artifact.kind,
            "payload": artifact.payload,
            "provenance": artifact.provenance,
        }

    @app.get("/api/sessions/{session_id}/entity-table")
    def entity_table(session_id: str, artifact: Optional[str] = Query(default=None)):
        session = get_session(session_id)
        if not artifact:
            raise ValidationError("artifact query parameter is required")
        art = session.artifact(artifact)
        ids = art.payload.get("entityIds")
        if ids is None:
            raise ValidationError(
                "artifact has no entity table", artifact=artifact, kind=art.kind
            )
        digest = art.payload.get("planDigest") or art.provenance["params"].get("planDigest")
        plan = session.plans.get(digest, {}) if digest else {}
        attribute_names = [a["name"] for a in plan.get("attributes", [])]
        taxonomy_of = {a["name"]: a["taxonomy"] for a in plan.get("attributes", [])}

        def label_of(attribute: str, node_id: str) -> str:
            taxonomy = session.taxonomies.get(taxonomy_of.get(attribute, ""))
            if taxonomy is not None and node_id in taxonomy:
                return taxonomy.node(node_id).label
            return node_id

        rows = []
        for entity_id in ids:
            entity = session.entity(entity_id)
            columns = attribute_names or sorted(entity.attributes)
            rows.append(
                {
                    "id": entity.id,
                    "references": dict(entity.references),
                    "values": {
                        attribute: [
                            {"id": v, "label": label_of(attribute, v)}
                            for v in entity.attributes.get(attribute, ())
                        ]
                        for attribute in columns
                    },
                }
            )
        return {"columns": attribute_names, "rows": rows}

    @app.get("/api/sessions/{session_id}/artifacts/{artifact_id}/replay")
    def replay(session_id: str, artifact_id: str):
        session = get_session(session_id)
        artifact = session.artifact(artifact_id)
        fresh = replay_artifact(session, artifact_id)
        return {"id": artifact_id, "identical": fresh == artifact.payload}

    @app.post("/api/sessions/{session_id}/report")
    def report(session_id: str, body: ReportRequest):
        session = get_session(session_id)
        return {"report": export_report(session, body.artifacts)}

    @app.post("/api/sessions/{session_id}/save")
    def save(session_id: str, body: PathRequest):
        session = get_session(session_id)
        save_session(session, body.path)
        return {"path": body.path}

    @app.post("/api/sessions/{session_id}/load")
    def load(session_id: str, body: PathRequest):
        get_session(session_id)  # slot must exist
        loaded = load_session(body.path)
        with registry_lock:
            sessions[session_id] = loaded
        return _summary(session_id, loaded)

    return app


def run_service(host: str = "127.0.0.1", port: int = 8000, sync: bool = False) -> None:
    import uvicorn

    uvicorn.run(create_app(sync=sync), host=host, port=port)
