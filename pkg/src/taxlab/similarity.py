"""Entity similarity built from taxonomy-valued attributes.

An entity carries set-valued attributes; each attribute names the taxonomy
its values come from. Pairwise element similarity (Wu-Palmer) is lifted to
sets with a symmetric max-mean, to tuples with an arithmetic mean over
attributes, and finally to a distance via an inverse transform.

Matrix construction is embarrassingly parallel over pairs: every cell is a
pure function of the two entities, so results are bitwise independent of
evaluation order (cells are only ever assigned, never accumulated across
pairs). The implementation here fills cells sequentially.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import UnknownIdError, ValidationError
from .taxonomy import Taxonomy, wu_palmer

ELEMENT_COMPARERS = ("wuPalmer",)
ATTRIBUTE_COMPARERS = ("symMaxMean",)
EMPTY_ACTIONS = ("ignore", "asMaxDistance")
AGGREGATORS = ("mean",)
TRANSFORMERS = ("squareInverse", "linearInverse")


@dataclass(frozen=True)
class Entity:
    """One data record: reference links plus set-valued attributes."""

    id: str
    references: Mapping[str, str] = field(default_factory=dict)
    attributes: Mapping[str, tuple[str, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class PlanAttribute:
    name: str
    taxonomy: str
    element_comparer: str = "wuPalmer"
    attribute_comparer: str = "symMaxMean"
    empty_action: str = "ignore"


@dataclass(frozen=True)
class PreparationPlan:
    """Everything needed to turn entities into a distance matrix."""

    attributes: tuple[PlanAttribute, ...]
    aggregator: str = "mean"
    transformer: str = "squareInverse"

    def __post_init__(self):
        if self.aggregator not in AGGREGATORS:
            raise ValidationError("unknown aggregator", aggregator=self.aggregator)
        if self.transformer not in TRANSFORMERS:
            raise ValidationError("unknown transformer", transformer=self.transformer)
        if not self.attributes:
            raise ValidationError("plan must select at least one attribute")
        seen = set()
        for attr in self.attributes:
            if attr.element_comparer not in ELEMENT_COMPARERS:
                raise ValidationError(
                    "unknown element comparer", attribute=attr.name,
                    comparer=attr.element_comparer,
                )
            if attr.attribute_comparer not in ATTRIBUTE_COMPARERS:
                raise ValidationError(
                    "unknown attribute comparer", attribute=attr.name,
                    comparer=attr.attribute_comparer,
                )
            if attr.empty_action not in EMPTY_ACTIONS:
                raise ValidationError(
                    "unknown empty action", attribute=attr.name,
                    action=attr.empty_action,
                )
            if attr.name in seen:
                raise ValidationError("duplicate attribute in plan", attribute=attr.name)
            seen.add(attr.name)


def plan_to_dict(plan: PreparationPlan) -> dict:
    return {
        "aggregator": plan.aggregator,
        "transformer": plan.transformer,
        "attributes": [
            {
                "name": a.name,
                "taxonomy": a.taxonomy,
                "elementComparer": a.element_comparer,
                "attributeComparer": a.attribute_comparer,
                "emptyAction": a.empty_action,
            }
            for a in plan.attributes
        ],
    }


def plan_from_dict(data: Mapping) -> PreparationPlan:
    if not isinstance(data, Mapping):
        raise ValidationError("plan must be a JSON object")
    raw_attrs = data.get("attributes")
    if not isinstance(raw_attrs, list) or not raw_attrs:
        raise ValidationError("plan attributes must be a non-empty list")
    attrs = []
    for raw in raw_attrs:
        if not isinstance(raw, Mapping) or "name" not in raw or "taxonomy" not in raw:
            raise ValidationError("plan attribute needs name and taxonomy")
        attrs.append(
            PlanAttribute(
                name=raw["name"],
                taxonomy=raw["taxonomy"],
                element_comparer=raw.get("elementComparer", "wuPalmer"),
                attribute_comparer=raw.get("attributeComparer", "symMaxMean"),
                empty_action=raw.get("emptyAction", "ignore"),
            )
        )
    return PreparationPlan(
        attributes=tuple(attrs),
        aggregator=data.get("aggregator", "mean"),
        transformer=data.get("transformer", "squareInverse"),
    )


def plan_digest(plan: PreparationPlan) -> str:
    canonical = json.dumps(plan_to_dict(plan), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(eq=False)
class SimilarityMatrix:
    entity_ids: list[str]
    values: np.ndarray
    provenance: dict = field(default_factory=dict)


@dataclass(eq=False)
class DistanceMatrix:
    entity_ids: list[str]
    values: np.ndarray
    provenance: dict = field(default_factory=dict)


def set_similarity(taxonomy: Taxonomy, left: Sequence[str], right: Sequence[str]) -> float:
    """Symmetric max-mean over element similarities.

    sigma(A, B) = 1/2 * ( mean_a max_b omega(a, b) + mean_b max_a omega(a, b) ).
    Both sides must be non-empty; empty-set policy lives in tuple_similarity.
    """
    if not left or not right:
        raise ValidationError("set similarity needs non-empty sets")
    forward = 0.0
    for a in left:
        forward += max(wu_palmer(taxonomy, a, b) for b in right)
    backward = 0.0
    for b in right:
        backward += max(wu_palmer(taxonomy, a, b) for a in left)
    return 0.5 * (forward / len(left) + backward / len(right))


def tuple_similarity(
    plan: PreparationPlan,
    taxonomies: Mapping[str, Taxonomy],
    x: Entity,
    y: Entity,
) -> float:
    """Mean of per-attribute set similarities under the plan's empty actions.

    "ignore" drops an attribute from the mean when either side is empty;
    "asMaxDistance" scores 0 when exactly one side is empty and 1 when both
    are. If every attribute is dropped the result is 1 with a warning.
    """
    total = 0.0
    used = 0
    for attr in plan.attributes:
        taxonomy = taxonomies.get(attr.taxonomy)
        if taxonomy is None:
            raise UnknownIdError(
                "plan references a taxonomy that is not loaded",
                attribute=attr.name, taxonomy=attr.taxonomy,
            )
        a = x.attributes.get(attr.name, ())
        b = y.attributes.get(attr.name, ())
        if not a or not b:
            if attr.empty_action == "ignore":
                continue
            total += 1.0 if (not a and not b) else 0.0
            used += 1
            continue
        total += set_similarity(taxonomy, a, b)
        used += 1
    if used == 0:
        warnings.warn(
            f"all plan attributes empty for pair ({x.id}, {y.id}); similarity set to 1",
            stacklevel=2,
        )
        return 1.0
    return total / used


def similarity_to_distance(similarity: float, transformer: str) -> float:
    """squareInverse: sqrt(2 - 2s), range [0, sqrt(2)]. linearInverse: 1 - s."""
    if transformer == "squareInverse":
        # Clamp guards tiny negative arguments from float round-off at s=1.
        return float(np.sqrt(max(2.0 - 2.0 * similarity, 0.0)))
    if transformer == "linearInverse":
        return 1.0 - similarity
    raise ValidationError("unknown transformer", transformer=transformer)


def select_entities(
    entities: Sequence[Entity],
    ids: Optional[Sequence[str]] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[Entity]:
    """Explicit id selection, or a seeded draw without replacement."""
    by_id = {e.id: e for e in entities}
    if ids is not None:
        missing = [i for i in ids if i not in by_id]
        if missing:
            raise UnknownIdError("unknown entity ids in selection", ids=missing)
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate entity ids in selection")
        return [by_id[i] for i in ids]
    if count is None:
        return list(entities)
    if count < 1 or count > len(entities):
        raise ValidationError(
            "selection count out of range", count=count, available=len(entities)
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(entities), size=count, replace=False)
    return [entities[int(i)] for i in chosen]


def build_matrices(
    plan: PreparationPlan,
    taxonomies: Mapping[str, Taxonomy],
    entities: Sequence[Entity],
    ids: Optional[Sequence[str]] = None,
    count: Optional[int] = None,
    seed: Optional[int] = None,
) -> tuple[SimilarityMatrix, DistanceMatrix]:
    """Pairwise similarity and distance matrices over a selection of entities.

    The selection is either explicit ids (order preserved) or a seeded draw
    of `count` entities without replacement; with neither given, all entities
    are used in input order. Similarity diagonal is exactly 1, distance
    diagonal exactly 0, both matrices symmetric by construction (each
    unordered pair is computed once and mirrored).
    """
    chosen = select_entities(entities, ids=ids, count=count, seed=seed)
    if len(chosen) < 2:
        raise ValidationError("matrix construction needs at least two entities")
    order = [e.id for e in chosen]
    if len(set(order)) != len(order):
        raise ValidationError("duplicate entity ids")
    n = len(chosen)
    sim = np.ones((n, n), dtype=np.float64)
    dist = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            s = tuple_similarity(plan, taxonomies, chosen[i], chosen[j])
            d = similarity_to_distance(s, plan.transformer)
            sim[i, j] = sim[j, i] = s
            dist[i, j] = dist[j, i] = d
    prov: dict = {"planDigest": plan_digest(plan), "transformer": plan.transformer}
    if count is not None:
        prov["selectionSeed"] = seed
    return (
        SimilarityMatrix(entity_ids=order, values=sim, provenance=dict(prov)),
        DistanceMatrix(entity_ids=order, values=dist, provenance=dict(prov)),
    )


def one_hot_encode(
    entities: Sequence[Entity],
    plan: PreparationPlan,
    taxonomies: Mapping[str, Taxonomy],
) -> tuple[np.ndarray, list[str]]:
    """Binary vectors with one coordinate per (attribute, taxonomy node).

    Coordinate order is canonical: plan attribute order, then node document
    order within each attribute's taxonomy. Returns (matrix, coordinate names)
    where names read "attribute=nodeId".
    """
    coords: list[tuple[str, str]] = []
    for attr in plan.attributes:
        taxonomy = taxonomies.get(attr.taxonomy)
        if taxonomy is None:
            raise UnknownIdError(
                "plan references a taxonomy that is not loaded",
                attribute=attr.name, taxonomy=attr.taxonomy,
            )
        coords.extend((attr.name, node.id) for node in taxonomy.nodes)
    index = {pair: k for k, pair in enumerate(coords)}
    matrix = np.zeros((len(entities), len(coords)), dtype=np.float64)
    for row, entity in enumerate(entities):
        for attr in plan.attributes:
            for value in entity.attributes.get(attr.name, ()):
                key = (attr.name, value)
                if key not in index:
                    raise UnknownIdError(
                        "entity value not a node of the attribute's taxonomy",
                        entity=entity.id, attribute=attr.name, value=value,
                    )
                matrix[row, index[key]] = 1.0
    names = [f"{attr}={node}" for attr, node in coords]
    return matrix, names
