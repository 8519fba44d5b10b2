"""Sessions: the persistent container every pipeline step works in.

A session holds taxonomies, entities, preparation plans, artifacts, and the
job log. Artifacts are immutable once committed; sessions only ever append
(or delete an artifact nobody references). Every artifact carries provenance
(operation, parameters including seeds, input artifact ids, creation time),
and re-running the operation with the same parameters reproduces the payload
bit-exactly.

Persistence is a single canonical JSON document ({"version": 1, ...},
sorted keys, compact separators), so save -> load -> save is byte-stable.
"""

from __future__ import annotations

import datetime as _dt
import json
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import (
    CorruptFileError,
    UnknownIdError,
    ValidationError,
    VersionError,
)
from ..similarity import Entity
from ..taxonomy import Taxonomy, parse_taxonomy, taxonomy_to_dict
from .formats import entity_to_dict

SESSION_VERSION = 1


@dataclass(eq=False)
class Artifact:
    id: str
    kind: str
    payload: dict
    provenance: dict


@dataclass(eq=False)
class Job:
    id: str
    kind: str
    params: dict
    status: str = "pending"  # pending | running | done | failed
    result: Optional[str] = None  # artifact id when done
    error: Optional[str] = None


class Session:
    def __init__(self, name: str = "session"):
        self.name = name
        self.taxonomies: dict[str, Taxonomy] = {}
        self.entities: list[Entity] = []
        self._entity_index: dict[str, Entity] = {}
        self.plans: dict[str, dict] = {}  # digest -> plan dict
        self.artifacts: dict[str, Artifact] = {}
        self.jobs: dict[str, Job] = {}
        self._counters = {"artifact": 0, "job": 0}
        self.lock = threading.RLock()

    # -- ingest ------------------------------------------------------------

    def add_taxonomy(self, taxonomy: Taxonomy) -> None:
        with self.lock:
            existing = self.taxonomies.get(taxonomy.name)
            if existing is not None:
                if taxonomy_to_dict(existing) == taxonomy_to_dict(taxonomy):
                    return  # identical re-upload is a no-op
                raise ValidationError(
                    "taxonomy with this name already loaded", taxonomy=taxonomy.name
                )
            self.taxonomies[taxonomy.name] = taxonomy

    def _node_known(self, node_id: str) -> bool:
        return any(node_id in t for t in self.taxonomies.values())

    def ingest_entities(self, entities: Sequence[Entity]) -> dict:
        """Append valid entities; reject the rest with a per-entity report.

        An entity is rejected when its id is already taken or any attribute
        value is not a node of any loaded taxonomy. The report names the
        entity and offending attribute.
        """
        accepted: list[str] = []
        rejected: list[dict] = []
        with self.lock:
            for entity in entities:
                problem = None
                if entity.id in self._entity_index:
                    problem = {"entity": entity.id, "reason": "duplicate entity id"}
                else:
                    for attribute, values in entity.attributes.items():
                        missing = [v for v in values if not self._node_known(v)]
                        if missing:
                            problem = {
                                "entity": entity.id,
                                "attribute": attribute,
                                "values": missing,
                                "reason": "unknown taxonomy node",
                            }
                            break
                if problem:
                    rejected.append(problem)
                    continue
                self.entities.append(entity)
                self._entity_index[entity.id] = entity
                accepted.append(entity.id)
        return {"accepted": accepted, "rejected": rejected}

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._entity_index[entity_id]
        except KeyError:
            raise UnknownIdError("unknown entity id", entity=entity_id) from None

    # -- artifacts ---------------------------------------------------------

    def add_artifact(
        self,
        kind: str,
        payload: dict,
        operation: str,
        params: dict,
        inputs: Sequence[str] = (),
    ) -> Artifact:
        with self.lock:
            for input_id in inputs:
                if input_id not in self.artifacts:
                    raise UnknownIdError("unknown input artifact", artifact=input_id)
            self._counters["artifact"] += 1
            artifact = Artifact(
                id=f"a{self._counters['artifact']}",
                kind=kind,
                payload=payload,
                provenance={
                    "operation": operation,
                    "params": params,
                    "inputs": list(inputs),
                    "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
                },
            )
            self.artifacts[artifact.id] = artifact
            return artifact

    def artifact(self, artifact_id: str) -> Artifact:
        try:
            return self.artifacts[artifact_id]
        except KeyError:
            raise UnknownIdError("unknown artifact id", artifact=artifact_id) from None

    def delete_artifact(self, artifact_id: str) -> None:
        """Delete an artifact unless another artifact's provenance needs it."""
        with self.lock:
            self.artifact(artifact_id)
            for other in self.artifacts.values():
                if other.id != artifact_id and artifact_id in other.provenance["inputs"]:
                    raise ValidationError(
                        "artifact is an input of another artifact",
                        artifact=artifact_id, referencedBy=other.id,
                    )
            del self.artifacts[artifact_id]

    def new_job(self, kind: str, params: dict) -> Job:
        with self.lock:
            self._counters["job"] += 1
            job = Job(id=f"j{self._counters['job']}", kind=kind, params=params)
            self.jobs[job.id] = job
            return job

    def job(self, job_id: str) -> Job:
        try:
            return self.jobs[job_id]
        except KeyError:
            raise UnknownIdError("unknown job id", job=job_id) from None


# -- persistence -------------------------------------------------------------


def session_to_dict(session: Session) -> dict:
    with session.lock:
        return {
            "version": SESSION_VERSION,
            "name": session.name,
            "taxonomies": [taxonomy_to_dict(t) for t in session.taxonomies.values()],
            "entities": [entity_to_dict(e) for e in session.entities],
            "plans": dict(session.plans),
            "artifacts": [
                {
                    "id": a.id,
                    "kind": a.kind,
                    "payload": a.payload,
                    "provenance": a.provenance,
                }
                for a in session.artifacts.values()
            ],
            "jobs": [
                {
                    "id": j.id,
                    "kind": j.kind,
                    "params": j.params,
                    "status": j.status,
                    "result": j.result,
                    "error": j.error,
                }
                for j in session.jobs.values()
            ],
            "counters": dict(session._counters),
        }


def session_from_dict(data: dict) -> Session:
    if not isinstance(data, dict):
        raise CorruptFileError("session document must be a JSON object")
    version = data.get("version")
    if version != SESSION_VERSION:
        raise VersionError(
            "unsupported session version", found=version, supported=SESSION_VERSION
        )
    session = Session(name=data.get("name", "session"))
    for raw in data.get("taxonomies", []):
        session.taxonomies[raw["name"]] = parse_taxonomy(json.dumps(raw))
    for raw in data.get("entities", []):
        entity = Entity(
            id=raw["id"],
            references=dict(raw.get("references", {})),
            attributes={k: tuple(v) for k, v in raw.get("attributes", {}).items()},
        )
        session.entities.append(entity)
        session._entity_index[entity.id] = entity
    session.plans = dict(data.get("plans", {}))
    for raw in data.get("artifacts", []):
        session.artifacts[raw["id"]] = Artifact(
            id=raw["id"], kind=raw["kind"], payload=raw["payload"],
            provenance=raw["provenance"],
        )
    for raw in data.get("jobs", []):
        session.jobs[raw["id"]] = Job(
            id=raw["id"], kind=raw["kind"], params=raw["params"],
            status=raw["status"], result=raw.get("result"), error=raw.get("error"),
        )
    session._counters = dict(data.get("counters", {"artifact": 0, "job": 0}))
    return session


def save_session(session: Session, path: str) -> None:
    document = json.dumps(
        session_to_dict(session), sort_keys=True, separators=(",", ":")
    )
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(document)


def load_session(path: str) -> Session:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise UnknownIdError("session file does not exist", path=path) from None
    except json.JSONDecodeError as exc:
        raise CorruptFileError(
            "session file is not valid JSON", path=path, detail=str(exc)
        ) from None
    return session_from_dict(data)
