import json
import os

import pytest

from taxlab import similarity
from taxlab.pipeline import Session, parse_entities
from taxlab.taxonomy import Taxonomy, TaxonomyNode, parse_taxonomy

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def read_data(name: str) -> str:
    with open(os.path.join(DATA_DIR, name), "r", encoding="utf-8") as handle:
        return handle.read()


@pytest.fixture(scope="session")
def depth_taxonomy() -> Taxonomy:
    """Chain of depth 4 to a hub, one child below it on one side and a
    grandchild on the other: the similarity of the two leaves is 8/11."""
    nodes = [
        TaxonomyNode("root", "root", None),
        TaxonomyNode("d1", "d1", "root"),
        TaxonomyNode("d2", "d2", "d1"),
        TaxonomyNode("d3", "d3", "d2"),
        TaxonomyNode("hub", "hub", "d3"),
        TaxonomyNode("near", "near", "hub"),
        TaxonomyNode("mid", "mid", "hub"),
        TaxonomyNode("far", "far", "mid"),
    ]
    return Taxonomy("depth-fixture", nodes)


@pytest.fixture(scope="session")
def garments() -> Taxonomy:
    return parse_taxonomy(read_data("garments.json"))


@pytest.fixture(scope="session")
def colors() -> Taxonomy:
    return parse_taxonomy(read_data("colors.json"))


@pytest.fixture(scope="session")
def taxonomies(garments, colors) -> dict:
    return {"garments": garments, "colors": colors}


@pytest.fixture()
def entities():
    return parse_entities(read_data("entities.json"))


@pytest.fixture()
def plan() -> similarity.PreparationPlan:
    return similarity.plan_from_dict(json.loads(read_data("plan.json")))


@pytest.fixture()
def plan_dict() -> dict:
    return json.loads(read_data("plan.json"))


@pytest.fixture()
def loaded_session(garments, colors, entities) -> Session:
    session = Session(name="test")
    session.add_taxonomy(garments)
    session.add_taxonomy(colors)
    report = session.ingest_entities(entities)
    assert not report["rejected"]
    return session
