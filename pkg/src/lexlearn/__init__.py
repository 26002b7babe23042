"""Few-shot word meaning learning over a concept graph.

The learner treats every graph node (concepts and entities) as a
candidate meaning for an unknown word, scores them with an exact
Bayesian posterior, asks the user to pick clarifying examples, and
commits the word to its lexicon once the best hypothesis is probable
enough.
"""

from .elicitation import (
    CommitDecision,
    ElicitationConfig,
    commit_decision,
    expected_entropy_after,
    select_candidates,
)
from .inference import (
    Hypothesis,
    HypothesisSpace,
    NoConsistentHypothesis,
    Posterior,
    UnknownEntity,
    build_space,
    entropy,
    likelihood,
    map_hypothesis,
    posterior_batch,
    posterior_update,
    serialize_posterior,
)
from .ontology import (
    ConceptNode,
    Entity,
    Ontology,
    OntologyError,
    ParseError,
    UnknownNode,
    ValidationError,
    load_ontology,
    load_ontology_path,
)
from .session import (
    CandidateNotOffered,
    CorruptLog,
    Lexicon,
    LexiconEntry,
    NoActiveEpisode,
    Session,
    SessionClosed,
    detect_unknown_terms,
)

__all__ = [
    "CandidateNotOffered",
    "CommitDecision",
    "ConceptNode",
    "CorruptLog",
    "ElicitationConfig",
    "Entity",
    "Hypothesis",
    "HypothesisSpace",
    "Lexicon",
    "LexiconEntry",
    "NoActiveEpisode",
    "NoConsistentHypothesis",
    "Ontology",
    "OntologyError",
    "ParseError",
    "Posterior",
    "Session",
    "SessionClosed",
    "UnknownEntity",
    "UnknownNode",
    "ValidationError",
    "build_space",
    "commit_decision",
    "detect_unknown_terms",
    "entropy",
    "expected_entropy_after",
    "likelihood",
    "load_ontology",
    "load_ontology_path",
    "map_hypothesis",
    "posterior_batch",
    "posterior_update",
    "select_candidates",
    "serialize_posterior",
]
