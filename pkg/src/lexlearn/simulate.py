"""Scenario runner and batch benchmark used by the command line.

A scenario replays a fixed observation sequence for one word and
records the posterior trajectory. A batch run simulates a cooperative
user, drawing observations uniformly from a hidden true concept's
extension, and measures how many observations each learner needs to
identify that concept.
"""

from __future__ import annotations

import csv
import io
import json
import random
import statistics
from dataclasses import asdict, dataclass
from pathlib import Path

from .elicitation import ElicitationConfig, commit_decision
from .inference import (
    build_space,
    entropy,
    map_hypothesis,
    posterior_batch,
    posterior_update,
    serialize_posterior,
)
from .ontology import Ontology, load_ontology, load_ontology_path

LEARNERS = ("bayes", "rule_intersection", "frequency_baseline")


class SimulationError(Exception):
    pass


def resolve_observation(ontology: Ontology, token: str) -> str:
    """Map an id or a unique entity label to an entity id."""
    token = token.strip()
    if token in ontology.entities:
        return token
    matches = [
        eid
        for eid in ontology.entity_ids()
        if ontology.entities[eid].label.lower() == token.lower()
    ]
    if len(matches) == 1:
        return matches[0]
    if len(matches) > 1:
        raise SimulationError(f"label {token!r} is ambiguous: {matches}")
    raise SimulationError(f"unknown entity {token!r}")


@dataclass
class ScenarioResult:
    word: str
    observations: list[str]
    steps: list[dict]
    map_nodes: list[str]
    map_probs: list[float]
    entropies: list[float]
    commit_step: int | None
    committed_node: str | None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioResult":
        return cls(**raw)


def run_scenario(
    source: Ontology | str | Path,
    word: str,
    observations: list[str],
    cfg: ElicitationConfig | None = None,
) -> ScenarioResult:
    """Posterior trajectory for a fixed observation sequence.

    Step 0 is the prior; step i folds in the i-th observation. The
    commit step is the first step whose MAP mass reaches the threshold;
    later observations are still processed so the full trajectory is
    reported either way.
    """
    ontology = source if isinstance(source, Ontology) else load_ontology_path(source)
    cfg = cfg or ElicitationConfig()
    resolved = [resolve_observation(ontology, tok) for tok in observations]

    posterior = posterior_batch(build_space(ontology, word), [])
    steps = [serialize_posterior(posterior)]
    node, prob = map_hypothesis(posterior)
    map_nodes, map_probs = [node], [float(prob)]
    entropies = [entropy(posterior)]
    commit_step: int | None = None
    committed_node: str | None = None

    for i, x in enumerate(resolved, start=1):
        posterior = posterior_update(posterior, x)
        steps.append(serialize_posterior(posterior))
        node, prob = map_hypothesis(posterior)
        map_nodes.append(node)
        map_probs.append(float(prob))
        entropies.append(entropy(posterior))
        if commit_step is None:
            decision = commit_decision(posterior, cfg)
            if decision.committed:
                commit_step = i
                committed_node = decision.node

    return ScenarioResult(
        word=word,
        observations=resolved,
        steps=steps,
        map_nodes=map_nodes,
        map_probs=map_probs,
        entropies=entropies,
        commit_step=commit_step,
        committed_node=committed_node,
    )


@dataclass(frozen=True)
class GeneratorSpec:
    """Random tree shape: depth levels of concepts, then entities on leaves."""

    depth: int
    branch: int
    leaves: int

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        parts = dict(item.split(":", 1) for item in text.split(",") if item)
        try:
            spec = cls(
                depth=int(parts.pop("depth")),
                branch=int(parts.pop("branch")),
                leaves=int(parts.pop("leaves")),
            )
        except (KeyError, ValueError) as exc:
            raise SimulationError(f"bad generator spec {text!r}: {exc}") from exc
        if parts:
            raise SimulationError(f"bad generator spec key {sorted(parts)[0]!r}")
        if spec.depth < 0 or spec.branch < 1 or spec.leaves < 1:
            raise SimulationError("generator spec values out of range")
        return spec


def generate_ontology(spec: GeneratorSpec, rng: random.Random) -> Ontology:
    """Random single-rooted tree within the spec's bounds."""
    concepts = [{"id": "c0", "label": "c0", "parent": None}]
    level = ["c0"]
    counter = 1
    for _ in range(spec.depth):
        nxt = []
        for parent in level:
            for _ in range(rng.randint(1, spec.branch)):
                cid = f"c{counter}"
                counter += 1
                concepts.append({"id": cid, "label": cid, "parent": parent})
                nxt.append(cid)
        level = nxt
    entities = []
    eid = 0
    for leaf in level:
        for _ in range(rng.randint(1, spec.leaves)):
            entities.append({"id": f"e{eid}", "label": f"e{eid}", "concept": leaf})
            eid += 1
    return load_ontology({"concepts": concepts, "entities": entities})


@dataclass
class BatchReport:
    learner: str
    trials: int
    mean_obs: float | None
    median_obs: float | None
    failures: int

    def to_dict(self) -> dict:
        return asdict(self)


def _run_bayes(ontology, true_concept, rng, cfg, max_steps):
    pool = sorted(ontology.extension(true_concept))
    posterior = posterior_batch(build_space(ontology, "target"), [])
    for step in range(1, max_steps + 1):
        posterior = posterior_update(posterior, rng.choice(pool))
        decision = commit_decision(posterior, cfg)
        if decision.committed:
            return step if decision.node == true_concept else None
    return None


def _run_rule_intersection(ontology, true_concept, rng, cfg, max_steps):
    # Keeps every node consistent with all observations; identified
    # only when a single node remains.
    pool = sorted(ontology.extension(true_concept))
    space = build_space(ontology, "target")
    consistent = {h.node for h in space.hypotheses}
    ext = {h.node: h.extension for h in space.hypotheses}
    for step in range(1, max_steps + 1):
        x = rng.choice(pool)
        consistent = {node for node in consistent if x in ext[node]}
        if len(consistent) == 1:
            only = next(iter(consistent))
            return step if only == true_concept else None
    return None


def _run_frequency_baseline(ontology, true_concept, rng, cfg, max_steps):
    # Counts how often each node covers an observation, ignoring
    # extension sizes; identified when the argmax is unique and right.
    pool = sorted(ontology.extension(true_concept))
    space = build_space(ontology, "target")
    ext = {h.node: h.extension for h in space.hypotheses}
    counts = {h.node: 0 for h in space.hypotheses}
    for step in range(1, max_steps + 1):
        x = rng.choice(pool)
        for node, extension in ext.items():
            if x in extension:
                counts[node] += 1
        top = max(counts.values())
        leaders = [node for node, c in counts.items() if c == top]
        if len(leaders) == 1:
            return step if leaders[0] == true_concept else None
    return None


_LEARNER_FNS = {
    "bayes": _run_bayes,
    "rule_intersection": _run_rule_intersection,
    "frequency_baseline": _run_frequency_baseline,
}


def run_batch(
    source: Ontology | str | Path | GeneratorSpec,
    trials: int,
    learner: str,
    seed: int,
    cfg: ElicitationConfig | None = None,
    true_concept: str | None = None,
    max_steps: int = 20,
) -> BatchReport:
    """Simulate ``trials`` learning runs and summarize the outcomes.

    Each trial draws observations uniformly from the true concept's
    extension. A trial fails when the learner commits to (or singles
    out) the wrong node, or runs past ``max_steps``.
    """
    if learner not in _LEARNER_FNS:
        raise SimulationError(f"unknown learner {learner!r}")
    cfg = cfg or ElicitationConfig()
    fixed: Ontology | None
    if isinstance(source, GeneratorSpec):
        fixed = None
    elif isinstance(source, Ontology):
        fixed = source
    else:
        fixed = load_ontology_path(source)

    run = _LEARNER_FNS[learner]
    successes: list[int] = []
    failures = 0
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        ontology = fixed if fixed is not None else generate_ontology(source, rng)
        if true_concept is not None:
            target = true_concept
            if target not in ontology.concepts or not ontology.extension(target):
                raise SimulationError(f"true concept {target!r} unusable")
        else:
            options = [c for c in ontology.concept_ids() if ontology.extension(c)]
            target = rng.choice(options)
        steps = run(ontology, target, rng, cfg, max_steps)
        if steps is None:
            failures += 1
        else:
            successes.append(steps)

    return BatchReport(
        learner=learner,
        trials=trials,
        mean_obs=statistics.mean(successes) if successes else None,
        median_obs=statistics.median(successes) if successes else None,
        failures=failures,
    )


# -- report formatting ---------------------------------------------------


def _scenario_table(result: ScenarioResult) -> str:
    lines = [f"word: {result.word}"]
    for i, step in enumerate(result.steps):
        obs = f" after {result.observations[i - 1]!r}" if i else " (prior)"
        committed = "  << commit" if result.commit_step == i else ""
        lines.append(
            f"step {i}{obs}  map={result.map_nodes[i]} "
            f"p={result.map_probs[i]:.6f} H={result.entropies[i]:.4f} bits{committed}"
        )
        for entry in step["mass"]:
            lines.append(f"    {entry['node']:<24} {entry['level']:<10} {entry['p']:.6f}")
    if result.commit_step is None:
        lines.append("no commit")
    else:
        lines.append(f"committed: {result.committed_node} at step {result.commit_step}")
    return "\n".join(lines)


def _scenario_csv(result: ScenarioResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["step", "node", "p"])
    for i, step in enumerate(result.steps):
        for entry in step["mass"]:
            writer.writerow([i, entry["node"], entry["p"]])
    return buf.getvalue()


def _batch_table(report: BatchReport) -> str:
    mean = "-" if report.mean_obs is None else f"{report.mean_obs:.3f}"
    median = "-" if report.median_obs is None else f"{report.median_obs:.3f}"
    return (
        f"learner: {report.learner}\n"
        f"trials: {report.trials}\n"
        f"mean observations to identify: {mean}\n"
        f"median observations to identify: {median}\n"
        f"failures: {report.failures}"
    )


def _batch_csv(report: BatchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["learner", "trials", "mean_obs", "median_obs", "failures"])
    writer.writerow(
        [report.learner, report.trials, report.mean_obs, report.median_obs, report.failures]
    )
    return buf.getvalue()


def emit_report(
    result: ScenarioResult | BatchReport,
    fmt: str = "table",
    out: str | Path | None = None,
) -> str:
    """Render a result and write it to ``out`` or return it."""
    if fmt not in ("table", "json", "csv"):
        raise SimulationError(f"unknown format {fmt!r}")
    if isinstance(result, ScenarioResult):
        if fmt == "table":
            text = _scenario_table(result)
        elif fmt == "json":
            text = json.dumps(result.to_dict(), indent=2)
        else:
            text = _scenario_csv(result)
    else:
        if fmt == "table":
            text = _batch_table(result)
        elif fmt == "json":
            text = json.dumps(result.to_dict(), indent=2)
        else:
            text = _batch_csv(result)
    if out is not None:
        Path(out).write_text(text + ("\n" if not text.endswith("\n") else ""), encoding="utf-8")
    return text
