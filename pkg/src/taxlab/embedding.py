"""Metric embeddings of distance matrices.

Two routes into n-dimensional space:

* classical_mds: Torgerson's method. Double-center the squared distances,
  B = -1/2 * J D^2 J, take the top-n eigenpairs of B and scale eigenvectors
  by sqrt(eigenvalue). Deterministic; negative eigenvalues are clamped to
  zero (their axes collapse) with a warning.
* smacof: iterative stress majorization from a seeded random start (or a
  given init). Each Guttman transform cannot increase stress, so the
  recorded per-iteration stress trace is non-increasing; iteration stops
  when the improvement drops below `tolerance` or `max_iterations` is hit.
  Majorization operates in Euclidean geometry (the trace is p=2 stress);
  the final reported stress uses the requested norm exponent.

Both attach the achieved stress. Axis signs follow one convention
everywhere: the coordinate of largest magnitude on each axis is positive.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError


@dataclass(eq=False)
class EmbeddedPoints:
    entity_ids: list[str]
    coordinates: np.ndarray  # shape (points, dimension)
    dimension: int
    norm_exponent: float = 2.0
    stress: float = 0.0
    stress_trace: list[float] = field(default_factory=list)


def _check_distance_matrix(values: np.ndarray) -> np.ndarray:
    d = np.asarray(values, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError("distance matrix must be square")
    if d.shape[0] < 2:
        raise ValidationError("distance matrix must have order >= 2")
    if not np.allclose(d, d.T, atol=1e-12):
        raise ValidationError("distance matrix must be symmetric")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise ValidationError("distances must be finite and non-negative")
    return d


def pairwise_distances(coordinates: np.ndarray, p: float = 2.0) -> np.ndarray:
    """p-norm distances between all rows."""
    diff = coordinates[:, None, :] - coordinates[None, :, :]
    if p == 2.0:
        return np.sqrt(np.sum(diff * diff, axis=-1))
    return np.sum(np.abs(diff) ** p, axis=-1) ** (1.0 / p)


def stress(coordinates: np.ndarray, target: np.ndarray, p: float = 2.0) -> float:
    """Raw stress: sum over unordered pairs of squared residual distance."""
    d = pairwise_distances(np.asarray(coordinates, dtype=np.float64), p)
    t = np.asarray(target, dtype=np.float64)
    iu = np.triu_indices(t.shape[0], k=1)
    residual = t[iu] - d[iu]
    return float(np.sum(residual * residual))


def _orient_signs(coordinates: np.ndarray) -> np.ndarray:
    """Flip each axis so its largest-magnitude coordinate is positive."""
    out = coordinates.copy()
    for axis in range(out.shape[1]):
        column = out[:, axis]
        if column.size and column[np.argmax(np.abs(column))] < 0:
            out[:, axis] = -column
    return out


def classical_mds(
    values: np.ndarray,
    entity_ids: Optional[Sequence[str]] = None,
    dimension: int = 2,
    norm_exponent: float = 2.0,
) -> EmbeddedPoints:
    d = _check_distance_matrix(values)
    n = d.shape[0]
    if not 1 <= dimension < n:
        raise ValidationError(
            "dimension must satisfy 1 <= dimension < order", dimension=dimension, order=n
        )
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (d * d) @ j
    eigenvalues, eigenvectors = np.linalg.eigh(b)
    order = np.argsort(eigenvalues)[::-1][:dimension]
    top = eigenvalues[order]
    if np.any(top < 0):
        warnings.warn(
            "distance matrix is not Euclidean for this dimension; "
            "negative eigenvalues clamped to zero",
            stacklevel=2,
        )
    coords = eigenvectors[:, order] * np.sqrt(np.clip(top, 0.0, None))
    coords = _orient_signs(coords)
    ids = list(entity_ids) if entity_ids is not None else [str(i) for i in range(n)]
    return EmbeddedPoints(
        entity_ids=ids,
        coordinates=coords,
        dimension=dimension,
        norm_exponent=norm_exponent,
        stress=stress(coords, d, norm_exponent),
    )


def smacof(
    values: np.ndarray,
    entity_ids: Optional[Sequence[str]] = None,
    dimension: int = 2,
    norm_exponent: float = 2.0,
    max_iterations: int = 300,
    tolerance: float = 1e-9,
    seed: Optional[int] = None,
    init: Optional[np.ndarray] = None,
) -> EmbeddedPoints:
    d = _check_distance_matrix(values)
    n = d.shape[0]
    if not 1 <= dimension < n:
        raise ValidationError(
            "dimension must satisfy 1 <= dimension < order", dimension=dimension, order=n
        )
    if max_iterations < 1:
        raise ValidationError("max_iterations must be >= 1")
    if init is not None:
        x = np.array(init, dtype=np.float64)
        if x.shape != (n, dimension):
            raise ValidationError("init shape must be (order, dimension)")
    else:
        rng = np.random.default_rng(seed)
        x = rng.uniform(-1.0, 1.0, size=(n, dimension))

    # Guttman transform under Euclidean geometry; zero current distances
    # contribute nothing (standard SMACOF convention).
    current = stress(x, d, 2.0)
    trace = [current]
    for _ in range(max_iterations):
        dist = pairwise_distances(x, 2.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0, d / np.where(dist > 0, dist, 1.0), 0.0)
        b = -ratio
        b[np.arange(n), np.arange(n)] = ratio.sum(axis=1)
        x_next = (b @ x) / n
        next_stress = stress(x_next, d, 2.0)
        if next_stress > current:
            # Only float round-off can get here; keep the trace monotone.
            break
        x = x_next
        improvement = current - next_stress
        current = next_stress
        trace.append(current)
        if improvement < tolerance:
            break
    coords = _orient_signs(x)
    return EmbeddedPoints(
        entity_ids=list(entity_ids) if entity_ids is not None else [str(i) for i in range(n)],
        coordinates=coords,
        dimension=dimension,
        norm_exponent=norm_exponent,
        stress=stress(coords, d, norm_exponent),
        stress_trace=trace,
    )


def pca(
    vectors: np.ndarray,
    entity_ids: Optional[Sequence[str]] = None,
    dimension: int = 2,
) -> EmbeddedPoints:
    """Project mean-centered vectors onto the top principal axes."""
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValidationError("pca needs at least two vectors")
    if not 1 <= dimension <= x.shape[1]:
        raise ValidationError(
            "dimension must satisfy 1 <= dimension <= width",
            dimension=dimension, width=x.shape[1],
        )
    centered = x - x.mean(axis=0)
    # Right singular vectors of the centered data are the principal axes,
    # already ordered by descending singular value.
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    coords = _orient_signs(centered @ vt[:dimension].T)
    ids = list(entity_ids) if entity_ids is not None else [str(i) for i in range(x.shape[0])]
    return EmbeddedPoints(
        entity_ids=ids, coordinates=coords, dimension=dimension,
        norm_exponent=2.0, stress=0.0,
    )
