"""On-disk JSON formats: taxonomies, entities, preparation plans.

All files are UTF-8 JSON. The taxonomy format lives in taxlab.taxonomy, the
plan format in taxlab.similarity; this module adds the entity list format

    [{"id": text, "references": {name: url-or-text},
      "attributes": {attributeName: [nodeId, ...]}}, ...]

Parsing is structural only; checking attribute values against loaded
taxonomies is the session's job at ingest time.
"""

from __future__ import annotations

import json
from typing import Sequence

from ..errors import CorruptFileError, ValidationError
from ..similarity import Entity


def parse_entities(document: str | bytes) -> list[Entity]:
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CorruptFileError("entity document is not valid JSON", detail=str(exc))
    if not isinstance(data, list):
        raise ValidationError("entity document must be a JSON list")
    entities = []
    for raw in data:
        if not isinstance(raw, dict):
            raise ValidationError("entity must be an object")
        entity_id = raw.get("id")
        if not isinstance(entity_id, str) or not entity_id:
            raise ValidationError("entity id must be a non-empty string")
        references = raw.get("references", {})
        if not isinstance(references, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in references.items()
        ):
            raise ValidationError("entity references must map strings to strings",
                                  entity=entity_id)
        raw_attributes = raw.get("attributes", {})
        if not isinstance(raw_attributes, dict):
            raise ValidationError("entity attributes must be an object", entity=entity_id)
        attributes: dict[str, tuple[str, ...]] = {}
        for name, values in raw_attributes.items():
            if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
                raise ValidationError(
                    "attribute values must be a list of node ids",
                    entity=entity_id, attribute=name,
                )
            attributes[name] = tuple(values)
        entities.append(Entity(id=entity_id, references=dict(references),
                               attributes=attributes))
    return entities


def entity_to_dict(entity: Entity) -> dict:
    return {
        "id": entity.id,
        "references": dict(entity.references),
        "attributes": {k: list(v) for k, v in entity.attributes.items()},
    }


def entities_to_document(entities: Sequence[Entity]) -> str:
    return json.dumps([entity_to_dict(e) for e in entities], indent=2)
