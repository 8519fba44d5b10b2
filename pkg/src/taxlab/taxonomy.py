"""Rooted taxonomy trees and Wu-Palmer similarity.

A taxonomy is a labelled tree: every node except the single root has exactly
one parent. Node depth counts edges from the root. Similarity between two
nodes is

    omega(a, b) = 2 * L3 / (L1 + L2 + 2 * L3)

where L3 is the depth of the lowest common ancestor and L1, L2 are the
remaining edge counts from a and b up to that ancestor. omega(a, a) = 1 by
definition, which also covers the root/root case where the fraction would be
0/0. Two distinct nodes whose only common ancestor is the root have
similarity 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import CorruptFileError, UnknownIdError, ValidationError


@dataclass(frozen=True)
class TaxonomyNode:
    id: str
    label: str
    parent: Optional[str]  # None marks the root


class Taxonomy:
    """Immutable rooted tree with O(1) parent/depth lookup per node."""

    def __init__(self, name: str, nodes: Iterable[TaxonomyNode]):
        self.name = name
        self.nodes = list(nodes)
        self._by_id: dict[str, TaxonomyNode] = {}
        for node in self.nodes:
            if node.id in self._by_id:
                raise ValidationError(
                    "duplicate node id in taxonomy", taxonomy=name, node=node.id
                )
            self._by_id[node.id] = node

        roots = [n.id for n in self.nodes if n.parent is None]
        if len(roots) != 1:
            raise ValidationError(
                "taxonomy must have exactly one root",
                taxonomy=name,
                roots=roots,
            )
        self.root = roots[0]

        for node in self.nodes:
            if node.parent is not None and node.parent not in self._by_id:
                raise UnknownIdError(
                    "node parent not present in taxonomy",
                    taxonomy=name,
                    node=node.id,
                    parent=node.parent,
                )

        # Depths double as the cycle check: a cycle never reaches the root.
        self._depth: dict[str, int] = {self.root: 0}
        for node in self.nodes:
            self._resolve_depth(node.id)

    def _resolve_depth(self, node_id: str) -> int:
        chain = []
        current = node_id
        while current not in self._depth:
            chain.append(current)
            current = self._by_id[current].parent
            if len(chain) > len(self.nodes):
                raise ValidationError(
                    "cycle detected in taxonomy", taxonomy=self.name, node=node_id
                )
        base = self._depth[current]
        for offset, nid in enumerate(reversed(chain), start=1):
            self._depth[nid] = base + offset
        return self._depth[node_id]

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._by_id

    def node(self, node_id: str) -> TaxonomyNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownIdError(
                "unknown node id", taxonomy=self.name, node=node_id
            ) from None

    def parent(self, node_id: str) -> Optional[str]:
        return self.node(node_id).parent

    def ancestors(self, node_id: str) -> list[str]:
        """Path from the node up to and including the root."""
        path = [node_id]
        current = self.node(node_id)
        while current.parent is not None:
            path.append(current.parent)
            current = self._by_id[current.parent]
        return path


def depth(taxonomy: Taxonomy, node_id: str) -> int:
    taxonomy.node(node_id)
    return taxonomy._depth[node_id]


def lowest_common_ancestor(taxonomy: Taxonomy, a: str, b: str) -> str:
    """Deepest node lying on both root paths (two-path intersection)."""
    up_a = taxonomy.ancestors(a)
    on_a = set(up_a)
    for candidate in taxonomy.ancestors(b):
        if candidate in on_a:
            return candidate
    # Unreachable for a valid tree: both paths end at the root.
    raise ValidationError("nodes share no ancestor", taxonomy=taxonomy.name)


def wu_palmer(taxonomy: Taxonomy, a: str, b: str) -> float:
    if a == b:
        taxonomy.node(a)
        return 1.0
    lca = lowest_common_ancestor(taxonomy, a, b)
    l3 = depth(taxonomy, lca)
    l1 = depth(taxonomy, a) - l3
    l2 = depth(taxonomy, b) - l3
    return 2.0 * l3 / (l1 + l2 + 2.0 * l3)


def parse_taxonomy(document: str | bytes) -> Taxonomy:
    """Parse the JSON taxonomy format.

    Expected shape: {"name": text, "nodes": [{"id", "label", "parent"}]}
    with exactly one node whose parent is null.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CorruptFileError("taxonomy document is not valid JSON", detail=str(exc))
    if not isinstance(data, dict):
        raise ValidationError("taxonomy document must be a JSON object")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ValidationError("taxonomy name must be a non-empty string")
    raw_nodes = data.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise ValidationError("taxonomy nodes must be a non-empty list", taxonomy=name)
    nodes = []
    for raw in raw_nodes:
        if not isinstance(raw, dict):
            raise ValidationError("taxonomy node must be an object", taxonomy=name)
        node_id = raw.get("id")
        label = raw.get("label", node_id)
        parent = raw.get("parent")
        if not isinstance(node_id, str) or not node_id:
            raise ValidationError("node id must be a non-empty string", taxonomy=name)
        if parent is not None and not isinstance(parent, str):
            raise ValidationError(
                "node parent must be a string or null", taxonomy=name, node=node_id
            )
        if not isinstance(label, str):
            raise ValidationError("node label must be a string", taxonomy=name, node=node_id)
        nodes.append(TaxonomyNode(id=node_id, label=label, parent=parent))
    return Taxonomy(name, nodes)


def taxonomy_to_dict(taxonomy: Taxonomy) -> dict:
    return {
        "name": taxonomy.name,
        "nodes": [
            {"id": n.id, "label": n.label, "parent": n.parent} for n in taxonomy.nodes
        ],
    }
