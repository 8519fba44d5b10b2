"""Command line interface.

Every analysis command loads the session file, runs one pipeline step as a
job, saves the session back, and prints the resulting artifact id. Exit
codes: 0 success, 1 validation problem (bad input, unknown id, bad file),
2 job failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ..errors import JobFailedError, ValidationError
from ..taxonomy import parse_taxonomy
from .formats import parse_entities
from .jobs import JobRunner
from .report import export_report
from .session import Session, load_session, save_session
from .steps import replay_artifact


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--session", required=False, help="session file path")
    common.add_argument("--seed", type=int, default=None, help="seed for seeded steps")
    common.add_argument(
        "--sync", action="store_true",
        help="run the job inline instead of on a worker thread",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taxlab",
        description="taxonomy data workbench: distances, embeddings, clusterings",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("ingest", parents=[common], help="load taxonomies and entities")
    p.add_argument("--taxonomy", action="append", default=[], help="taxonomy JSON file")
    p.add_argument("--entities", help="entity list JSON file")

    p = sub.add_parser("prepare", parents=[common], help="build distance matrix or one-hot vectors")
    p.add_argument("--plan", required=True, help="preparation plan JSON file")
    p.add_argument("--ids", help="comma-separated entity ids")
    p.add_argument("--count", type=int, help="random selection size")
    p.add_argument("--one-hot", action="store_true", help="emit one-hot vectors instead")

    p = sub.add_parser("embed", parents=[common], help="embed a distance matrix")
    p.add_argument("--artifact", required=True)
    p.add_argument("--method", default="mds", choices=["mds", "smacof", "pca"])
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--norm-exponent", type=float, default=2.0)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--classical-init", action="store_true")

    p = sub.add_parser("cluster", parents=[common], help="cluster entities")
    p.add_argument("--artifact", required=True)
    p.add_argument(
        "--method", default="bruteforce",
        choices=["bruteforce", "localsearch", "qaoa", "vqe", "kmeans"],
    )
    p.add_argument("--clusters", type=int, default=2)
    p.add_argument("--reps", type=int)
    p.add_argument("--max-trials", type=int)
    p.add_argument("--entanglement", choices=["linear", "full", "circular"])
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iterations", type=int)

    p = sub.add_parser("train", parents=[common], help="train a model on an artifact")
    p.add_argument("--model", required=True, choices=["perceptron", "autoencoder"])
    p.add_argument("--features", required=True)
    p.add_argument("--labels")
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--code-dimension", type=int)

    p = sub.add_parser("report", parents=[common], help="render a markdown report")
    p.add_argument("--artifacts", help="comma-separated artifact ids (default: all)")
    p.add_argument("--out", help="write to file instead of stdout")

    p = sub.add_parser("replay", parents=[common], help="re-run an artifact's provenance")
    p.add_argument("--artifact", required=True)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _session_path(args) -> str:
    if not args.session:
        raise ValidationError("--session PATH is required for this command")
    return args.session


def _load(args) -> Session:
    return load_session(_session_path(args))


def _run_step(args, kind: str, params: dict) -> int:
    session = _load(args)
    runner = JobRunner(sync=args.sync)
    try:
        artifact_id = runner.run_to_artifact(session, kind, params, seed=args.seed)
    finally:
        runner.shutdown()
    save_session(session, args.session)
    artifact = session.artifact(artifact_id)
    print(f"artifact {artifact_id} ({artifact.kind})")
    return 0


def _cmd_ingest(args) -> int:
    path = _session_path(args)
    session = load_session(path) if os.path.exists(path) else Session(
        name=os.path.splitext(os.path.basename(path))[0]
    )
    for taxonomy_path in args.taxonomy:
        with open(taxonomy_path, "r", encoding="utf-8") as handle:
            taxonomy = parse_taxonomy(handle.read())
        session.add_taxonomy(taxonomy)
        print(f"taxonomy {taxonomy.name}: {len(taxonomy.nodes)} nodes")
    if args.entities:
        with open(args.entities, "r", encoding="utf-8") as handle:
            report = session.ingest_entities(parse_entities(handle.read()))
        print(f"entities accepted: {len(report['accepted'])}")
        for item in report["rejected"]:
            print(f"entities rejected: {json.dumps(item, sort_keys=True)}")
    save_session(session, path)
    return 0


def _cmd_prepare(args) -> int:
    with open(args.plan, "r", encoding="utf-8") as handle:
        plan = json.load(handle)
    params: dict = {"plan": plan, "oneHot": args.one_hot}
    if args.ids:
        params["ids"] = [i.strip() for i in args.ids.split(",") if i.strip()]
    if args.count is not None:
        params["count"] = args.count
    return _run_step(args, "prepare", params)


def _cmd_embed(args) -> int:
    params = {
        "artifact": args.artifact,
        "method": args.method,
        "dimension": args.dimension,
        "normExponent": args.norm_exponent,
    }
    if args.max_iterations is not None:
        params["maxIterations"] = args.max_iterations
    if args.tolerance is not None:
        params["tolerance"] = args.tolerance
    if args.classical_init:
        params["useClassicalInit"] = True
    return _run_step(args, "embed", params)


def _cmd_cluster(args) -> int:
    params = {"artifact": args.artifact, "method": args.method, "clusters": args.clusters}
    for key, value in (
        ("reps", args.reps),
        ("maxTrials", args.max_trials),
        ("entanglement", args.entanglement),
        ("restarts", args.restarts),
        ("maxIterations", args.max_iterations),
    ):
        if value is not None:
            params[key] = value
    return _run_step(args, "cluster", params)


def _cmd_train(args) -> int:
    params = {"model": args.model, "features": args.features}
    for key, value in (
        ("labels", args.labels),
        ("learningRate", args.learning_rate),
        ("gamma", args.gamma),
        ("maxIterations", args.max_iterations),
        ("epochs", args.epochs),
        ("codeDimension", args.code_dimension),
    ):
        if value is not None:
            params[key] = value
    return _run_step(args, "train", params)


def _cmd_report(args) -> int:
    session = _load(args)
    ids = None
    if args.artifacts:
        ids = [i.strip() for i in args.artifacts.split(",") if i.strip()]
    text = export_report(session, ids)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(f"report written to {args.out}")
    else:
        print(text)
    return 0


def _cmd_replay(args) -> int:
    session = _load(args)
    fresh = replay_artifact(session, args.artifact)
    stored = session.artifact(args.artifact).payload
    identical = fresh == stored
    print(f"artifact {args.artifact} replay identical: {identical}")
    return 0 if identical else 2


def _cmd_serve(args) -> int:
    from .service import run_service

    run_service(host=args.host, port=args.port, sync=args.sync)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "prepare": _cmd_prepare,
    "embed": _cmd_embed,
    "cluster": _cmd_cluster,
    "train": _cmd_train,
    "report": _cmd_report,
    "replay": _cmd_replay,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if getattr(exc, "context", None):
            print(f"context: {json.dumps(exc.context, sort_keys=True, default=str)}",
                  file=sys.stderr)
        return 1
    except JobFailedError as exc:
        print(f"job failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
