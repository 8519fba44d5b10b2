"""Pipeline steps: validation before enqueue, execution inside a job.

A step is (kind, params) where kind is one of prepare, embed, cluster,
train. validate_step checks everything that can be checked without running
(referenced artifacts exist and have compatible kinds, hyperparameters in
range) and returns the params normalized with all defaults filled in, so the
stored provenance is complete. execute_step is pure: same session content
and params give a bitwise identical payload, which is what makes artifact
replay reproducible.

Artifact kinds produced: distanceMatrix or vectors (prepare), embedding
(embed), labels (cluster), perceptron / autoencoder (train).
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import clustering, embedding, neural, similarity
from ..errors import UnknownIdError, ValidationError
from ..optimize import OptimizerConfig
from .session import Artifact, Session

STEP_KINDS = ("prepare", "embed", "cluster", "train")
EMBED_METHODS = ("mds", "smacof", "pca")
CLUSTER_METHODS = clustering.MAXCUT_METHODS + ("kmeans",)


def _require(params: dict, key: str):
    if key not in params:
        raise ValidationError("missing step parameter", parameter=key)
    return params[key]


def _artifact_of_kind(session: Session, artifact_id, kinds: tuple[str, ...]) -> Artifact:
    if not isinstance(artifact_id, str):
        raise ValidationError("artifact id must be a string", artifact=artifact_id)
    artifact = session.artifact(artifact_id)
    if artifact.kind not in kinds:
        raise ValidationError(
            "artifact kind not usable for this step",
            artifact=artifact_id, kind=artifact.kind, expected=list(kinds),
        )
    return artifact


def validate_step(session: Session, kind: str, params: dict, seed: Optional[int] = None) -> dict:
    """Check a step before enqueueing; returns params with defaults filled.

    `seed` is the global fallback used when the step has no seed of its own.
    Prepare steps also record their plan in the session's plan registry.
    """
    if kind not in STEP_KINDS:
        raise ValidationError("unknown step kind", kind=kind)
    if not isinstance(params, dict):
        raise ValidationError("step params must be an object")
    p = dict(params)
    if p.get("seed") is None:
        p["seed"] = 0 if seed is None else int(seed)

    if kind == "prepare":
        plan = similarity.plan_from_dict(_require(p, "plan"))
        p["plan"] = similarity.plan_to_dict(plan)
        for attr in plan.attributes:
            if attr.taxonomy not in session.taxonomies:
                raise UnknownIdError(
                    "plan references a taxonomy that is not loaded",
                    taxonomy=attr.taxonomy,
                )
        p["oneHot"] = bool(p.get("oneHot", False))
        ids = p.get("ids")
        count = p.get("count")
        if ids is not None and count is not None:
            raise ValidationError("selection is either ids or count, not both")
        minimum = 1 if p["oneHot"] else 2
        selected = similarity.select_entities(
            session.entities, ids=ids, count=count, seed=p["seed"]
        )
        if len(selected) < minimum:
            raise ValidationError(
                "not enough entities selected", selected=len(selected), minimum=minimum
            )
        digest = similarity.plan_digest(plan)
        with session.lock:
            session.plans[digest] = p["plan"]
        p["planDigest"] = digest
        return p

    if kind == "embed":
        method = p.get("method", "mds")
        if method not in EMBED_METHODS:
            raise ValidationError("unknown embedding method", method=method)
        p["method"] = method
        source_kinds = ("vectors", "embedding") if method == "pca" else ("distanceMatrix",)
        artifact = _artifact_of_kind(session, _require(p, "artifact"), source_kinds)
        key = "vectors" if artifact.kind == "vectors" else (
            "coordinates" if artifact.kind == "embedding" else "values"
        )
        order = len(artifact.payload[key])
        width = len(artifact.payload[key][0]) if order else 0
        dimension = int(p.get("dimension", 2))
        upper = width if method == "pca" else order - 1
        if not 1 <= dimension <= upper:
            raise ValidationError(
                "dimension out of range", dimension=dimension, maximum=upper
            )
        p["dimension"] = dimension
        p["normExponent"] = float(p.get("normExponent", 2.0))
        if method == "smacof":
            p["maxIterations"] = int(p.get("maxIterations", 300))
            p["tolerance"] = float(p.get("tolerance", 1e-9))
            p["useClassicalInit"] = bool(p.get("useClassicalInit", False))
        return p

    if kind == "cluster":
        method = p.get("method", "bruteforce")
        if method not in CLUSTER_METHODS:
            raise ValidationError("unknown cluster method", method=method)
        p["method"] = method
        clusters = int(p.get("clusters", 2))
        p["clusters"] = clusters
        if method == "kmeans":
            artifact = _artifact_of_kind(session, _require(p, "artifact"), ("embedding",))
            points = len(artifact.payload["entityIds"])
            if not 1 <= clusters <= points:
                raise ValidationError(
                    "cluster count out of range", clusters=clusters, points=points
                )
            p["maxIterations"] = int(p.get("maxIterations", 100))
            return p
        artifact = _artifact_of_kind(session, _require(p, "artifact"), ("distanceMatrix",))
        if clusters < 2 or clusters & (clusters - 1):
            raise ValidationError(
                "cluster count must be a power of two >= 2", clusters=clusters
            )
        if clusters > len(artifact.payload["entityIds"]):
            raise ValidationError(
                "more clusters than entities", clusters=clusters,
                entities=len(artifact.payload["entityIds"]),
            )
        p["reps"] = int(p.get("reps", 1))
        if p["reps"] < 1:
            raise ValidationError("reps must be >= 1", reps=p["reps"])
        p["maxTrials"] = int(p.get("maxTrials", 100 if method == "qaoa" else 400))
        if p["maxTrials"] < 1:
            raise ValidationError("maxTrials must be >= 1", maxTrials=p["maxTrials"])
        entanglement = p.get("entanglement", "linear")
        if entanglement not in clustering.ENTANGLEMENTS:
            raise ValidationError("unknown entanglement scheme", scheme=entanglement)
        p["entanglement"] = entanglement
        p["restarts"] = int(p.get("restarts", 10))
        return p

    # train
    model = p.get("model")
    if model not in ("perceptron", "autoencoder"):
        raise ValidationError("unknown model", model=model)
    features = _artifact_of_kind(
        session, _require(p, "features"), ("embedding", "vectors")
    )
    p["learningRate"] = float(p.get("learningRate", 1.0 if model == "perceptron" else 0.01))
    if model == "perceptron":
        labels = _artifact_of_kind(session, _require(p, "labels"), ("labels",))
        if labels.payload["entityIds"] != features.payload["entityIds"]:
            raise ValidationError(
                "labels and features cover different entities",
                features=p["features"], labels=p["labels"],
            )
        if any(v not in (0, 1) for v in labels.payload["labels"]):
            raise ValidationError("perceptron needs binary (0/1) labels")
        p["gamma"] = float(p.get("gamma", 1e-6))
        p["maxIterations"] = int(p.get("maxIterations", 1000))
    else:
        p["epochs"] = int(p.get("epochs", 500))
        if p["epochs"] < 1:
            raise ValidationError("epochs must be >= 1", epochs=p["epochs"])
        width = len(_feature_rows(features)[0])
        p["codeDimension"] = int(p.get("codeDimension", 1))
        if not 1 <= p["codeDimension"] <= width:
            raise ValidationError(
                "code dimension out of range", codeDimension=p["codeDimension"], width=width
            )
    return p


def _feature_rows(artifact: Artifact) -> list[list[float]]:
    key = "vectors" if artifact.kind == "vectors" else "coordinates"
    return artifact.payload[key]


def _optimizer_for(method: str, p: dict) -> OptimizerConfig:
    if method == "qaoa":
        return OptimizerConfig(kind="spsa", max_iterations=p["maxTrials"], seed=p["seed"])
    return OptimizerConfig(kind="nelderMead", max_iterations=p["maxTrials"])


def execute_step(session: Session, kind: str, params: dict) -> tuple[str, dict, list[str]]:
    """Run a validated step; returns (artifact kind, payload, input ids)."""
    p = params
    if kind == "prepare":
        plan = similarity.plan_from_dict(p["plan"])
        selected = similarity.select_entities(
            session.entities, ids=p.get("ids"), count=p.get("count"), seed=p["seed"]
        )
        if p["oneHot"]:
            vectors, coordinates = similarity.one_hot_encode(
                selected, plan, session.taxonomies
            )
            payload = {
                "entityIds": [e.id for e in selected],
                "vectors": vectors.tolist(),
                "coordinates": coordinates,
                "planDigest": p["planDigest"],
            }
            return "vectors", payload, []
        sim, dist = similarity.build_matrices(plan, session.taxonomies, selected)
        payload = {
            "entityIds": dist.entity_ids,
            "values": dist.values.tolist(),
            "similarityValues": sim.values.tolist(),
            "transformer": plan.transformer,
            "planDigest": p["planDigest"],
        }
        return "distanceMatrix", payload, []

    if kind == "embed":
        artifact = session.artifact(p["artifact"])
        ids = artifact.payload["entityIds"]
        if p["method"] == "pca":
            source = np.asarray(_feature_rows(artifact), dtype=np.float64)
            points = embedding.pca(source, entity_ids=ids, dimension=p["dimension"])
        else:
            values = np.asarray(artifact.payload["values"], dtype=np.float64)
            if p["method"] == "mds":
                points = embedding.classical_mds(
                    values, entity_ids=ids, dimension=p["dimension"],
                    norm_exponent=p["normExponent"],
                )
            else:
                init = None
                if p["useClassicalInit"]:
                    init = embedding.classical_mds(
                        values, entity_ids=ids, dimension=p["dimension"]
                    ).coordinates
                points = embedding.smacof(
                    values, entity_ids=ids, dimension=p["dimension"],
                    norm_exponent=p["normExponent"],
                    max_iterations=p["maxIterations"], tolerance=p["tolerance"],
                    seed=p["seed"], init=init,
                )
        payload = {
            "entityIds": points.entity_ids,
            "coordinates": points.coordinates.tolist(),
            "dimension": points.dimension,
            "normExponent": points.norm_exponent,
            "stress": points.stress,
            "stressTrace": list(points.stress_trace),
            "method": p["method"],
        }
        return "embedding", payload, [p["artifact"]]

    if kind == "cluster":
        artifact = session.artifact(p["artifact"])
        ids = artifact.payload["entityIds"]
        if p["method"] == "kmeans":
            coords = np.asarray(artifact.payload["coordinates"], dtype=np.float64)
            result = clustering.kmeans(
                coords, k=p["clusters"], max_iterations=p["maxIterations"], seed=p["seed"]
            )
            payload = {
                "entityIds": ids,
                "labels": [int(v) for v in result.labels],
                "method": "kmeans",
                "clusters": p["clusters"],
                "centers": result.centers.tolist(),
                "inertia": result.inertia,
                "inertiaTrace": list(result.inertia_trace),
                "iterations": result.iterations,
            }
            return "labels", payload, [p["artifact"]]
        values = np.asarray(artifact.payload["values"], dtype=np.float64)
        result = clustering.maxcut_cluster(
            values,
            entity_ids=ids,
            method=p["method"],
            clusters=p["clusters"],
            seed=p["seed"],
            reps=p["reps"],
            entanglement=p["entanglement"],
            optimizer=_optimizer_for(p["method"], p),
            restarts=p["restarts"],
        )
        payload = {
            "entityIds": ids,
            "labels": [int(v) for v in result.labels],
            "method": p["method"],
            "clusters": p["clusters"],
            "details": result.details,
        }
        return "labels", payload, [p["artifact"]]

    # train
    features = session.artifact(p["features"])
    rows = np.asarray(_feature_rows(features), dtype=np.float64)
    if p["model"] == "perceptron":
        labels_artifact = session.artifact(p["labels"])
        targets = labels_artifact.payload["labels"]
        samples = np.hstack([np.ones((rows.shape[0], 1)), rows])
        outcome = neural.train_perceptron(
            samples, targets,
            learning_rate=p["learningRate"], gamma=p["gamma"],
            max_iterations=p["maxIterations"], seed=p["seed"],
        )
        payload = {
            "entityIds": features.payload["entityIds"],
            "weights": outcome.model.weights.tolist(),
            "bias": outcome.model.bias,
            "error": outcome.error,
            "iterations": outcome.iterations,
            "converged": outcome.converged,
        }
        return "perceptron", payload, [p["features"], p["labels"]]
    outcome = neural.train_autoencoder(
        rows, code_dimension=p["codeDimension"], epochs=p["epochs"],
        learning_rate=p["learningRate"], seed=p["seed"],
    )
    net = outcome.model.network
    payload = {
        "entityIds": features.payload["entityIds"],
        "sizes": list(net.sizes),
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
        "activations": list(net.activations),
        "codeDimension": outcome.model.code_dimension,
        "lossTrace": list(outcome.loss_trace),
    }
    return "autoencoder", payload, [p["features"]]


def replay_artifact(session: Session, artifact_id: str) -> dict:
    """Re-run the operation recorded in an artifact's provenance and return
    the freshly computed payload (callers compare it to the stored one)."""
    artifact = session.artifact(artifact_id)
    operation = artifact.provenance["operation"]
    _, payload, _ = execute_step(session, operation, artifact.provenance["params"])
    return payload
