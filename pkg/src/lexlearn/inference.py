"""Exact Bayesian inference over graph-constrained hypothesis spaces.

A hypothesis for the meaning of an unknown word is a node of the
ontology: the root concept (general), a non-root concept (specific), or
a single entity (individual). Concepts with empty extensions cannot
explain any observation and are left out of the space.

Prior: proportional to the node's sibling count plus one, so words are
assumed a bit more likely to name finer distinctions that actually get
drawn in the graph. Likelihood of n independently sampled positive
examples: (1 / extension_size)^n when every example falls under the
node, else 0. Smaller hypotheses therefore gain exponentially with
every consistent example (the size principle).

All masses are kept as exact fractions internally; only serialization
and entropy convert to floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ontology import Ontology

LEVEL_GENERAL = "general"
LEVEL_SPECIFIC = "specific"
LEVEL_INDIVIDUAL = "individual"


class InferenceError(Exception):
    pass


class UnknownEntity(InferenceError):
    """An observation is not an entity id of the ontology."""


class NoConsistentHypothesis(InferenceError):
    """Every hypothesis has zero likelihood.

    Unreachable for spaces built from a valid ontology: the root covers
    every entity, so it stays consistent with any observation sequence.
    """


@dataclass(frozen=True)
class Hypothesis:
    """One candidate meaning.

    ``extension`` is the set of entity ids the node covers and
    ``universe`` the set of all entity ids, shared across the space so
    consistency checks need no back-reference to the ontology.
    """

    node: str
    prior_weight: int
    extension_size: int
    level: str
    extension: frozenset[str]
    universe: frozenset[str]


@dataclass(frozen=True)
class HypothesisSpace:
    word: str
    hypotheses: tuple[Hypothesis, ...]
    prior: Mapping[str, Fraction]


@dataclass(frozen=True)
class Posterior:
    word: str
    observations: tuple[str, ...]
    mass: Mapping[str, Fraction]
    n: int
    space: HypothesisSpace


def make_space(word: str, hypotheses: Sequence[Hypothesis]) -> HypothesisSpace:
    """Normalize prior weights into a distribution.

    Exposed separately from :func:`build_space` so alternative weight
    assignments can reuse the same normalization path.
    """
    if not hypotheses:
        raise InferenceError("hypothesis space is empty")
    total = sum(Fraction(h.prior_weight) for h in hypotheses)
    if total <= 0:
        raise InferenceError("prior weights must sum to a positive value")
    prior = {h.node: Fraction(h.prior_weight) / total for h in hypotheses}
    return HypothesisSpace(word=word, hypotheses=tuple(hypotheses), prior=prior)


def build_space(ontology: Ontology, word: str) -> HypothesisSpace:
    """Hypothesis space for one unknown word.

    Contains every concept with a non-empty extension plus every
    entity, in node-id order.
    """
    universe = frozenset(ontology.entities)
    hyps: list[Hypothesis] = []
    for cid in ontology.concept_ids():
        ext = ontology.extension(cid)
        if not ext:
            continue
        level = LEVEL_GENERAL if cid == ontology.root else LEVEL_SPECIFIC
        hyps.append(
            Hypothesis(
                node=cid,
                prior_weight=ontology.sibling_weight(cid),
                extension_size=len(ext),
                level=level,
                extension=ext,
                universe=universe,
            )
        )
    for eid in ontology.entity_ids():
        hyps.append(
            Hypothesis(
                node=eid,
                prior_weight=ontology.sibling_weight(eid),
                extension_size=1,
                level=LEVEL_INDIVIDUAL,
                extension=frozenset((eid,)),
                universe=universe,
            )
        )
    hyps.sort(key=lambda h: h.node)
    return make_space(word, hyps)


def likelihood(h: Hypothesis, observations: Sequence[str]) -> Fraction:
    """Size-principle likelihood of the observation sequence under h."""
    for x in observations:
        if x not in h.universe:
            raise UnknownEntity(f"unknown entity id {x!r}")
        if x not in h.extension:
            return Fraction(0)
    n = len(observations)
    if n == 0:
        return Fraction(1)
    return Fraction(1, h.extension_size**n)


def _check_observations(space: HypothesisSpace, observations: Iterable[str]) -> tuple[str, ...]:
    obs = tuple(observations)
    universe = space.hypotheses[0].universe
    for x in obs:
        if x not in universe:
            raise UnknownEntity(f"unknown entity id {x!r}")
    return obs


def posterior_batch(space: HypothesisSpace, observations: Sequence[str]) -> Posterior:
    """Posterior over the space given all observations at once."""
    obs = _check_observations(space, observations)
    unnorm = {h.node: space.prior[h.node] * likelihood(h, obs) for h in space.hypotheses}
    z = sum(unnorm.values())
    if z == 0:
        raise NoConsistentHypothesis(f"no hypothesis covers {list(obs)!r}")
    mass = {node: v / z for node, v in unnorm.items()}
    return Posterior(word=space.word, observations=obs, mass=mass, n=len(obs), space=space)


def posterior_update(p: Posterior, x: str) -> Posterior:
    """Fold one more observed entity into the posterior."""
    universe = p.space.hypotheses[0].universe
    if x not in universe:
        raise UnknownEntity(f"unknown entity id {x!r}")
    unnorm: dict[str, Fraction] = {}
    for h in p.space.hypotheses:
        m = p.mass[h.node]
        if m and x in h.extension:
            unnorm[h.node] = m * Fraction(1, h.extension_size)
        else:
            unnorm[h.node] = Fraction(0)
    z = sum(unnorm.values())
    if z == 0:
        raise NoConsistentHypothesis(f"no hypothesis covers {x!r}")
    mass = {node: v / z for node, v in unnorm.items()}
    return Posterior(
        word=p.word,
        observations=p.observations + (x,),
        mass=mass,
        n=p.n + 1,
        space=p.space,
    )


def map_hypothesis(p: Posterior) -> tuple[str, Fraction]:
    """Maximum a posteriori node.

    Ties go to the smaller extension, then the lexicographically
    smaller node id, so the result is deterministic.
    """
    best = min(
        p.space.hypotheses,
        key=lambda h: (-p.mass[h.node], h.extension_size, h.node),
    )
    return best.node, p.mass[best.node]


def shannon_bits(masses: Iterable[Fraction | float]) -> float:
    """Shannon entropy in bits; zero-probability terms contribute 0."""
    total = 0.0
    for m in masses:
        v = float(m)
        if v > 0.0:
            total -= v * math.log2(v)
    return total


def entropy(p: Posterior) -> float:
    return shannon_bits(p.mass.values())


def serialize_posterior(p: Posterior) -> dict:
    """JSON-ready form: mass entries sorted by descending p, then node id."""
    ranked = sorted(p.space.hypotheses, key=lambda h: (-p.mass[h.node], h.node))
    return {
        "word": p.word,
        "n": p.n,
        "mass": [
            {"node": h.node, "level": h.level, "p": float(p.mass[h.node])} for h in ranked
        ],
    }
