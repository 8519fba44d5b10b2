"""End-to-end demo on the bundled costume fixtures.

Ingests the taxonomies and entities shipped with the test suite, builds the
similarity plan, embeds the distance matrix, clusters the embedding with the
brute-force max-cut backend, trains a perceptron on the cluster labels, and
prints the resulting report.
"""

import argparse
import json
from pathlib import Path

from taxlab.pipeline.formats import parse_entities
from taxlab.pipeline.jobs import JobRunner
from taxlab.pipeline.report import export_report
from taxlab.pipeline.session import Session, save_session
from taxlab.taxonomy import parse_taxonomy

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", help="optional path to save the session file")
    parser.add_argument("--clusters", type=int, default=2)
    args = parser.parse_args()

    session = Session(name="demo")
    for name in ("garments.json", "colors.json"):
        session.add_taxonomy(parse_taxonomy((DATA / name).read_text()))
    report = session.ingest_entities(parse_entities((DATA / "entities.json").read_text()))
    print(f"ingested {len(report['accepted'])} entities, "
          f"{len(report['rejected'])} rejected")

    plan = json.loads((DATA / "plan.json").read_text())
    runner = JobRunner(sync=True)
    matrix = runner.run_to_artifact(session, "prepare", {"plan": plan}, seed=0)
    embedding = runner.run_to_artifact(
        session, "embed", {"artifact": matrix, "method": "mds"})
    clusters = runner.run_to_artifact(
        session, "cluster",
        {"artifact": matrix, "method": "bruteforce", "clusters": args.clusters})
    model = runner.run_to_artifact(
        session, "train",
        {"model": "perceptron", "features": embedding, "labels": clusters},
        seed=2)

    print(export_report(session, [matrix, embedding, clusters, model]))
    if args.out:
        save_session(session, args.out)
        print(f"session saved to {args.out}")


if __name__ == "__main__":
    main()
