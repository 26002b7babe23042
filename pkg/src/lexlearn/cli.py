"""Command line entry points.

Exit codes: 0 when a scenario commits (and for successful batch,
validate, serve runs), 1 when a scenario finishes without committing,
2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import sys

from .elicitation import ElicitationConfig
from .ontology import OntologyError, load_ontology_path
from .simulate import (
    LEARNERS,
    GeneratorSpec,
    SimulationError,
    emit_report,
    run_batch,
    run_scenario,
)


def _split_observations(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexlearn")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="replay one observation sequence")
    sim.add_argument("--ontology", required=True)
    sim.add_argument("--word", required=True)
    sim.add_argument("--observations", default="", help="comma-separated entity ids or labels")
    sim.add_argument("--k", type=int, default=3)
    sim.add_argument("--strategy", choices=("diverse", "infogain"), default="infogain")
    sim.add_argument("--threshold", type=float, default=0.9)
    sim.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sim.add_argument("--out", default=None)

    bat = sub.add_parser("batch", help="benchmark learners on simulated users")
    bat.add_argument("--trials", type=int, required=True)
    bat.add_argument("--seed", type=int, required=True)
    bat.add_argument("--learner", choices=LEARNERS, required=True)
    group = bat.add_mutually_exclusive_group(required=True)
    group.add_argument("--ontology")
    group.add_argument("--gen", help="depth:D,branch:B,leaves:E")
    bat.add_argument("--true-concept", default=None)
    bat.add_argument("--max-steps", type=int, default=20)
    bat.add_argument("--k", type=int, default=3)
    bat.add_argument("--strategy", choices=("diverse", "infogain"), default="infogain")
    bat.add_argument("--threshold", type=float, default=0.9)
    bat.add_argument("--format", choices=("table", "json", "csv"), default="table")
    bat.add_argument("--out", default=None)

    val = sub.add_parser("validate", help="check an ontology document")
    val.add_argument("--ontology", required=True)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--config", required=True)

    return parser


def _cmd_simulate(args) -> int:
    cfg = ElicitationConfig(k=args.k, strategy=args.strategy, threshold=args.threshold)
    result = run_scenario(
        args.ontology, args.word, _split_observations(args.observations), cfg
    )
    text = emit_report(result, fmt=args.format, out=args.out)
    if args.out is None:
        print(text)
    return 0 if result.commit_step is not None else 1


def _cmd_batch(args) -> int:
    cfg = ElicitationConfig(k=args.k, strategy=args.strategy, threshold=args.threshold)
    source = GeneratorSpec.parse(args.gen) if args.gen else args.ontology
    report = run_batch(
        source,
        trials=args.trials,
        learner=args.learner,
        seed=args.seed,
        cfg=cfg,
        true_concept=args.true_concept,
        max_steps=args.max_steps,
    )
    text = emit_report(report, fmt=args.format, out=args.out)
    if args.out is None:
        print(text)
    return 0


def _cmd_validate(args) -> int:
    ontology = load_ontology_path(args.ontology)
    print(
        f"ok: {len(ontology.concepts)} concepts, {len(ontology.entities)} entities, "
        f"root {ontology.root!r}"
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_file(args.config)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    commands = {
        "simulate": _cmd_simulate,
        "batch": _cmd_batch,
        "validate": _cmd_validate,
        "serve": _cmd_serve,
    }
    try:
        return commands[args.command](args)
    except (OntologyError, SimulationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
