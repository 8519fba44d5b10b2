"""Markdown reports over session artifacts.

The report is a pure function of the session content, so regenerating it
from a reloaded session yields byte-identical text. Sections: the plans
involved, a summary per artifact (matrix statistics, embedding stress,
cluster sizes with per-cluster attribute-value frequencies, training
results), and a provenance appendix.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional, Sequence

import numpy as np

from .session import Artifact, Session


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _matrix_section(artifact: Artifact) -> list[str]:
    values = np.asarray(artifact.payload["values"], dtype=np.float64)
    off = values[~np.eye(values.shape[0], dtype=bool)]
    return [
        f"- order: {values.shape[0]}",
        f"- transformer: {artifact.payload['transformer']}",
        f"- off-diagonal min/mean/max: {_fmt(off.min())} / {_fmt(off.mean())} / {_fmt(off.max())}",
        f"- plan digest: {artifact.payload['planDigest']}",
    ]


def _embedding_section(artifact: Artifact) -> list[str]:
    return [
        f"- method: {artifact.payload['method']}",
        f"- dimension: {artifact.payload['dimension']}",
        f"- points: {len(artifact.payload['entityIds'])}",
        f"- stress: {_fmt(artifact.payload['stress'])}",
    ]


def _attribute_frequencies(session: Session, ids: Sequence[str]) -> dict[str, Counter]:
    frequencies: dict[str, Counter] = {}
    for entity_id in ids:
        entity = session.entity(entity_id)
        for attribute, values in sorted(entity.attributes.items()):
            frequencies.setdefault(attribute, Counter()).update(values)
    return frequencies


def _label_of(session: Session, node_id: str) -> str:
    for taxonomy in session.taxonomies.values():
        if node_id in taxonomy:
            return taxonomy.node(node_id).label
    return node_id


def _cluster_section(session: Session, artifact: Artifact) -> list[str]:
    ids = artifact.payload["entityIds"]
    labels = artifact.payload["labels"]
    lines = [
        f"- method: {artifact.payload['method']}",
        f"- clusters: {artifact.payload['clusters']}",
    ]
    groups: dict[int, list[str]] = {}
    for entity_id, label in zip(ids, labels):
        groups.setdefault(int(label), []).append(entity_id)
    for label in sorted(groups):
        members = groups[label]
        lines.append(f"- cluster {label} ({len(members)} entities): {', '.join(members)}")
        for attribute, counts in sorted(_attribute_frequencies(session, members).items()):
            shown = ", ".join(
                f"{_label_of(session, node)} x{count}"
                for node, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            )
            lines.append(f"  - {attribute}: {shown}")
    return lines


def _training_section(artifact: Artifact) -> list[str]:
    if artifact.kind == "perceptron":
        return [
            f"- final error: {_fmt(artifact.payload['error'])}",
            f"- iterations: {artifact.payload['iterations']}",
            f"- converged: {artifact.payload['converged']}",
        ]
    trace = artifact.payload["lossTrace"]
    return [
        f"- layer sizes: {'-'.join(str(s) for s in artifact.payload['sizes'])}",
        f"- initial loss: {_fmt(trace[0])}",
        f"- final loss: {_fmt(trace[-1])}",
        f"- epochs: {len(trace) - 1}",
    ]


def export_report(session: Session, artifact_ids: Optional[Sequence[str]] = None) -> str:
    """Render the report for the given artifacts (default: all, in order)."""
    ids = list(artifact_ids) if artifact_ids is not None else list(session.artifacts)
    artifacts = [session.artifact(a) for a in ids]
    lines = [f"# Session report: {session.name}", ""]

    digests = []
    for artifact in artifacts:
        digest = artifact.payload.get("planDigest") or artifact.provenance["params"].get(
            "planDigest"
        )
        if digest and digest not in digests:
            digests.append(digest)
    if digests:
        lines.append("## Plans")
        for digest in digests:
            plan = session.plans.get(digest)
            if plan is None:
                lines.append(f"- {digest} (not recorded)")
                continue
            attrs = ", ".join(a["name"] for a in plan["attributes"])
            lines.append(
                f"- {digest[:12]}: aggregator={plan['aggregator']}, "
                f"transformer={plan['transformer']}, attributes=[{attrs}]"
            )
        lines.append("")

    for artifact in artifacts:
        lines.append(f"## Artifact {artifact.id} ({artifact.kind})")
        if artifact.kind == "distanceMatrix":
            lines.extend(_matrix_section(artifact))
        elif artifact.kind == "embedding":
            lines.extend(_embedding_section(artifact))
        elif artifact.kind == "labels":
            lines.extend(_cluster_section(session, artifact))
        elif artifact.kind in ("perceptron", "autoencoder"):
            lines.extend(_training_section(artifact))
        else:
            lines.append(f"- entities: {len(artifact.payload.get('entityIds', []))}")
        lines.append("")

    lines.append("## Provenance")
    for artifact in artifacts:
        prov = artifact.provenance
        inputs = ", ".join(prov["inputs"]) if prov["inputs"] else "none"
        lines.append(
            f"- {artifact.id}: operation={prov['operation']}, inputs={inputs}, "
            f"seed={prov['params'].get('seed')}, created={prov['created']}"
        )
    lines.append("")
    return "\n".join(lines)
