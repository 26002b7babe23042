"""Knowledge graph of concepts and entities.

The graph is a single-rooted tree: every concept except the root has
exactly one parent concept, and every entity hangs off exactly one
concept. An ontology is parsed from a JSON document, validated once,
and never mutated afterwards, so instances can be shared freely between
sessions and threads.

Document shape::

    {
      "concepts": [{"id": ..., "label": ..., "parent": <id or null>}, ...],
      "entities": [{"id": ..., "label": ..., "concept": <id>}, ...]
    }

Ids are unique across concepts and entities together. Unknown keys are
rejected so that typos in hand-written documents fail loudly.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping


class OntologyError(Exception):
    """Base class for all ontology failures."""


class ParseError(OntologyError):
    """Document is not valid JSON or is not shaped like an ontology."""


class ValidationError(OntologyError):
    """Document parsed fine but violates a structural invariant."""


class UnknownNode(OntologyError):
    """An operation referenced a node id the ontology does not contain."""


@dataclass(frozen=True)
class ConceptNode:
    """A category in the tree; ``parent`` is None only for the root."""

    id: str
    label: str
    parent: str | None


@dataclass(frozen=True)
class Entity:
    """A concrete individual attached to exactly one concept."""

    id: str
    label: str
    concept: str


_CONCEPT_KEYS = {"id", "label", "parent"}
_ENTITY_KEYS = {"id", "label", "concept"}


class Ontology:
    """Validated, immutable concept/entity tree.

    Built by :func:`load_ontology`; the constructor trusts its inputs.
    All lookups are precomputed dictionaries, so query operations are
    cheap and never touch the original document again.
    """

    def __init__(
        self,
        concepts: dict[str, ConceptNode],
        entities: dict[str, Entity],
        root: str,
        document: dict[str, Any],
    ) -> None:
        self.concepts = concepts
        self.entities = entities
        self.root = root
        self.document = document

        self._children: dict[str, list[str]] = {cid: [] for cid in concepts}
        for node in concepts.values():
            if node.parent is not None:
                self._children[node.parent].append(node.id)
        for kids in self._children.values():
            kids.sort()

        attached: dict[str, list[str]] = {cid: [] for cid in concepts}
        for ent in entities.values():
            attached[ent.concept].append(ent.id)
        self._attached = attached

        self._extension: dict[str, frozenset[str]] = {}
        self._fill_extensions(self.root)
        for eid in entities:
            self._extension[eid] = frozenset((eid,))

    def _fill_extensions(self, concept_id: str) -> frozenset[str]:
        acc = set(self._attached[concept_id])
        for child in self._children[concept_id]:
            acc |= self._fill_extensions(child)
        ext = frozenset(acc)
        self._extension[concept_id] = ext
        return ext

    # -- queries -------------------------------------------------------

    def has_node(self, node_id: str) -> bool:
        return node_id in self.concepts or node_id in self.entities

    def is_entity(self, node_id: str) -> bool:
        return node_id in self.entities

    def label(self, node_id: str) -> str:
        if node_id in self.concepts:
            return self.concepts[node_id].label
        if node_id in self.entities:
            return self.entities[node_id].label
        raise UnknownNode(f"unknown node id {node_id!r}")

    def extension(self, node_id: str) -> frozenset[str]:
        """Entity ids covered by the node (itself, for an entity)."""
        try:
            return self._extension[node_id]
        except KeyError:
            raise UnknownNode(f"unknown node id {node_id!r}") from None

    def extension_size(self, node_id: str) -> int:
        """Number of entities under the node; entities count as 1."""
        return len(self.extension(node_id))

    def sibling_weight(self, node_id: str) -> int:
        """Siblings of the node plus one.

        Siblings of a concept are the other concepts with the same
        parent; the root has none. Siblings of an entity are the other
        entities attached to the same concept. The count includes the
        node itself, so the result is always a positive integer.
        """
        if node_id in self.concepts:
            parent = self.concepts[node_id].parent
            if parent is None:
                return 1
            return len(self._children[parent])
        if node_id in self.entities:
            return len(self._attached[self.entities[node_id].concept])
        raise UnknownNode(f"unknown node id {node_id!r}")

    def covers(self, node_id: str, entity_id: str) -> bool:
        """True when the entity lies in the node's extension."""
        if entity_id not in self.entities:
            raise UnknownNode(f"unknown entity id {entity_id!r}")
        return entity_id in self.extension(node_id)

    def child_concepts(self, concept_id: str) -> tuple[str, ...]:
        if concept_id not in self.concepts:
            raise UnknownNode(f"unknown concept id {concept_id!r}")
        return tuple(self._children[concept_id])

    def concept_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.concepts))

    def entity_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.entities))


def _require_str(obj: Mapping[str, Any], key: str, where: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where}: {key!r} must be a non-empty string")
    return value


def load_ontology(doc: Mapping[str, Any] | str | bytes) -> Ontology:
    """Parse and validate an ontology document.

    Accepts an already-parsed mapping or raw JSON text. Raises
    :class:`ParseError` for malformed documents and
    :class:`ValidationError` for structural violations; validation
    messages name the offending id.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise ParseError("document must be a JSON object")

    extra = set(doc) - {"concepts", "entities"}
    if extra:
        raise ParseError(f"unexpected top-level key {sorted(extra)[0]!r}")
    missing = {"concepts", "entities"} - set(doc)
    if missing:
        raise ParseError(f"missing top-level key {sorted(missing)[0]!r}")
    if not isinstance(doc["concepts"], list) or not isinstance(doc["entities"], list):
        raise ParseError("'concepts' and 'entities' must be arrays")

    concepts: dict[str, ConceptNode] = {}
    entities: dict[str, Entity] = {}
    seen: set[str] = set()

    for i, raw in enumerate(doc["concepts"]):
        where = f"concepts[{i}]"
        if not isinstance(raw, Mapping):
            raise ParseError(f"{where}: must be an object")
        if set(raw) != _CONCEPT_KEYS:
            bad = set(raw) ^ _CONCEPT_KEYS
            raise ParseError(f"{where}: unexpected or missing key {sorted(bad)[0]!r}")
        cid = _require_str(raw, "id", where)
        label = _require_str(raw, "label", where)
        parent = raw["parent"]
        if parent is not None and (not isinstance(parent, str) or not parent):
            raise ParseError(f"{where}: 'parent' must be a node id or null")
        if cid in seen:
            raise ValidationError(f"duplicate id {cid!r}")
        seen.add(cid)
        concepts[cid] = ConceptNode(id=cid, label=label, parent=parent)

    for i, raw in enumerate(doc["entities"]):
        where = f"entities[{i}]"
        if not isinstance(raw, Mapping):
            raise ParseError(f"{where}: must be an object")
        if set(raw) != _ENTITY_KEYS:
            bad = set(raw) ^ _ENTITY_KEYS
            raise ParseError(f"{where}: unexpected or missing key {sorted(bad)[0]!r}")
        eid = _require_str(raw, "id", where)
        label = _require_str(raw, "label", where)
        concept = _require_str(raw, "concept", where)
        if eid in seen:
            raise ValidationError(f"duplicate id {eid!r}")
        seen.add(eid)
        entities[eid] = Entity(id=eid, label=label, concept=concept)

    roots = [c.id for c in concepts.values() if c.parent is None]
    if not roots:
        raise ValidationError("no root concept: exactly one concept must have parent null")
    if len(roots) > 1:
        raise ValidationError(f"multiple roots: {roots[1]!r} also has parent null")
    root = roots[0]

    for node in concepts.values():
        if node.parent is not None and node.parent not in concepts:
            raise ValidationError(f"concept {node.id!r} references unknown parent {node.parent!r}")

    # Walk each parent chain; revisiting a node within one walk is a cycle.
    for node in concepts.values():
        chain: set[str] = set()
        cur: str | None = node.id
        while cur is not None:
            if cur in chain:
                raise ValidationError(f"cycle through concept {cur!r}")
            chain.add(cur)
            cur = concepts[cur].parent

    for ent in entities.values():
        if ent.concept not in concepts:
            raise ValidationError(f"entity {ent.id!r} references unknown concept {ent.concept!r}")

    if not entities:
        raise ValidationError("ontology must contain at least one entity")

    return Ontology(concepts, entities, root, copy.deepcopy(dict(doc)))


def load_ontology_path(path: str | Path) -> Ontology:
    """Load an ontology document from a JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    return load_ontology(text)
