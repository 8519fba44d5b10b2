"""Asynchronous job execution around the pipeline steps.

Steps are validated in the caller's thread (so bad requests fail fast with a
validation error), then run either inline (sync mode) or on a worker pool.
Only the commit of the finished artifact and the job status transitions take
the session lock, so at most one mutation lands at a time; jobs never touch
existing artifacts.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from ..errors import JobFailedError
from .session import Job, Session
from .steps import execute_step, validate_step


class JobRunner:
    def __init__(self, workers: int = 2, sync: bool = False):
        self.sync = sync
        self._pool: Optional[ThreadPoolExecutor] = None
        if not sync:
            self._pool = ThreadPoolExecutor(max_workers=workers)
        self._events: dict[str, threading.Event] = {}

    def submit(
        self, session: Session, kind: str, params: dict, seed: Optional[int] = None
    ) -> Job:
        normalized = validate_step(session, kind, params, seed=seed)
        job = session.new_job(kind, normalized)
        if self.sync:
            self._run(session, job)
            return job
        self._events[job.id] = threading.Event()
        assert self._pool is not None
        self._pool.submit(self._run, session, job)
        return job

    def _run(self, session: Session, job: Job) -> None:
        with session.lock:
            job.status = "running"
        try:
            kind, payload, inputs = execute_step(session, job.kind, job.params)
            artifact = session.add_artifact(
                kind, payload, operation=job.kind, params=job.params, inputs=inputs
            )
            with session.lock:
                job.status = "done"
                job.result = artifact.id
        except Exception as exc:  # job errors surface via status, not raises
            with session.lock:
                job.status = "failed"
                job.error = f"{type(exc).__name__}: {exc}"
        finally:
            # The worker owns the pop: a waiter that finds no event can only
            # have arrived after the job finished, so returning is correct.
            event = self._events.pop(job.id, None)
            if event is not None:
                event.set()

    def wait(self, job: Job, timeout: float = 120.0) -> Job:
        """Block until the job leaves the queue (no-op in sync mode)."""
        event = self._events.get(job.id)
        if event is not None and not event.wait(timeout):
            raise TimeoutError(f"job {job.id} did not finish within {timeout}s")
        return job

    def run_to_artifact(
        self, session: Session, kind: str, params: dict, seed: Optional[int] = None
    ) -> str:
        """Submit, wait, and return the artifact id; raise on failure."""
        job = self.submit(session, kind, params, seed=seed)
        self.wait(job)
        if job.status == "failed":
            raise JobFailedError(job.error or "job failed")
        assert job.result is not None
        return job.result

    def shutdown(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)


def poll_job(session: Session, job_id: str, interval: float = 0.01, timeout: float = 120.0) -> Job:
    """Poll a job by id until it is done or failed."""
    deadline = time.monotonic() + timeout
    while True:
        job = session.job(job_id)
        if job.status in ("done", "failed"):
            return job
        if time.monotonic() > deadline:
            raise TimeoutError(f"job {job_id} still {job.status} after {timeout}s")
        time.sleep(interval)
