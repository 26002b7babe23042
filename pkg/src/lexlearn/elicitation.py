"""Candidate selection and commit policy for learning episodes.

When the learner does not know a word it shows the user a short list of
entities and asks which one the word applies to. Two strategies:

``diverse``
    Walk the root's child branches in id order and take the smallest
    unused entity id from each, cycling until k candidates are picked.
    Cheap and spread out, ignores the posterior.

``infogain``
    Greedily grow the candidate set, each step adding the entity whose
    inclusion minimizes the expected posterior entropy after the user
    responds. Assumes a cooperative user: given the true meaning h they
    pick uniformly among offered entities inside ext(h), or answer
    "none of these" when no offered entity fits, which zeroes every
    hypothesis whose extension touches the offered set.

Ties in expected entropy are broken toward the entity the user is most
likely able to select (highest posterior coverage), then by node id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .inference import Posterior, UnknownEntity, map_hypothesis, shannon_bits
from .ontology import Ontology

STRATEGIES = ("diverse", "infogain")


@dataclass(frozen=True)
class ElicitationConfig:
    k: int = 3
    strategy: str = "infogain"
    threshold: float = 0.9
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if not (0.0 < self.threshold <= 1.0):
            raise ValueError("threshold must be in (0, 1]")


@dataclass(frozen=True)
class CommitDecision:
    committed: bool
    node: str | None = None
    probability: Fraction | None = None


def commit_decision(posterior: Posterior, cfg: ElicitationConfig) -> CommitDecision:
    """Commit to the MAP node once its mass reaches the threshold."""
    node, prob = map_hypothesis(posterior)
    if prob >= cfg.threshold:
        return CommitDecision(committed=True, node=node, probability=prob)
    return CommitDecision(committed=False)


def expected_entropy_after(
    ontology: Ontology,
    posterior: Posterior,
    candidates: Sequence[str],
) -> float:
    """Expected posterior entropy after showing ``candidates``.

    Enumerates every outcome: the user selects one of the candidates,
    or none of them fits. Outcome probabilities and the conditional
    posteriors follow the cooperative-user model described in the
    module docstring.
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    if len(set(candidates)) != len(candidates):
        raise ValueError("candidates must be distinct")
    for c in candidates:
        if c not in ontology.entities:
            raise UnknownEntity(f"unknown entity id {c!r}")

    hyps = posterior.space.hypotheses
    expected = 0.0

    for x in candidates:
        weight = Fraction(0)
        cond: dict[str, Fraction] = {}
        for h in hyps:
            m = posterior.mass[h.node]
            if m == 0 or x not in h.extension:
                continue
            overlap = sum(1 for c in candidates if c in h.extension)
            w = m * Fraction(1, overlap)
            cond[h.node] = w
            weight += w
        if weight:
            expected += float(weight) * shannon_bits(v / weight for v in cond.values())

    none_weight = Fraction(0)
    none_cond: dict[str, Fraction] = {}
    for h in hyps:
        m = posterior.mass[h.node]
        if m and not any(c in h.extension for c in candidates):
            none_cond[h.node] = m
            none_weight += m
    if none_weight:
        expected += float(none_weight) * shannon_bits(
            v / none_weight for v in none_cond.values()
        )
    return expected


def _coverage(posterior: Posterior, entity: str) -> Fraction:
    return sum(
        (posterior.mass[h.node] for h in posterior.space.hypotheses if entity in h.extension),
        Fraction(0),
    )


def _select_diverse(ontology: Ontology, k: int) -> list[str]:
    branches = [
        sorted(ontology.extension(child))
        for child in ontology.child_concepts(ontology.root)
    ]
    picked: list[str] = []
    used: set[str] = set()
    progressed = True
    while len(picked) < k and progressed:
        progressed = False
        for branch in branches:
            nxt = next((e for e in branch if e not in used), None)
            if nxt is None:
                continue
            picked.append(nxt)
            used.add(nxt)
            progressed = True
            if len(picked) == k:
                break
    # Entities attached directly to the root sit in no branch.
    for eid in ontology.entity_ids():
        if len(picked) == k:
            break
        if eid not in used:
            picked.append(eid)
            used.add(eid)
    return picked


def _select_infogain(ontology: Ontology, posterior: Posterior, k: int) -> list[str]:
    remaining = list(ontology.entity_ids())
    chosen: list[str] = []
    for _ in range(k):
        best_key = None
        best_entity = None
        for e in remaining:
            ee = expected_entropy_after(ontology, posterior, chosen + [e])
            key = (ee, -_coverage(posterior, e), e)
            if best_key is None or key < best_key:
                best_key = key
                best_entity = e
        chosen.append(best_entity)
        remaining.remove(best_entity)
    return chosen


def select_candidates(
    ontology: Ontology,
    posterior: Posterior,
    cfg: ElicitationConfig,
) -> list[str]:
    """Pick min(k, number of entities) distinct entities to offer."""
    k = min(cfg.k, len(ontology.entities))
    if cfg.strategy == "diverse":
        return _select_diverse(ontology, k)
    return _select_infogain(ontology, posterior, k)
