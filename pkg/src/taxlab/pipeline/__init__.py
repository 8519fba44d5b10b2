from .formats import entities_to_document, entity_to_dict, parse_entities
from .jobs import JobRunner, poll_job
from .report import export_report
from .session import (
    Artifact,
    Job,
    Session,
    load_session,
    save_session,
    session_from_dict,
    session_to_dict,
)
from .steps import execute_step, replay_artifact, validate_step

__all__ = [
    "Artifact",
    "Job",
    "JobRunner",
    "Session",
    "entities_to_document",
    "entity_to_dict",
    "execute_step",
    "export_report",
    "load_session",
    "parse_entities",
    "poll_job",
    "replay_artifact",
    "save_session",
    "session_from_dict",
    "session_to_dict",
    "validate_step",
]
