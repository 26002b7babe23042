"""Independent reference computations used to freeze expected values.

Everything in this module works straight off raw ontology document
dicts with exact fractions and deliberately avoids the library's own
traversal code: extensions are found by climbing each entity's parent
chain, not by walking children. Slow and simple on purpose.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction


def concept_index(doc):
    return {c["id"]: c for c in doc["concepts"]}


def entity_index(doc):
    return {e["id"]: e for e in doc["entities"]}


def ancestors_of_entity(doc, entity_id):
    """Concept ids on the path from the entity's concept up to the root."""
    concepts = concept_index(doc)
    chain = []
    cur = entity_index(doc)[entity_id]["concept"]
    while cur is not None:
        chain.append(cur)
        cur = concepts[cur]["parent"]
    return chain


def extension(doc, node_id):
    """Entity ids covered by the node, by brute-force membership tests."""
    if node_id in entity_index(doc):
        return {node_id}
    return {
        eid for eid in entity_index(doc) if node_id in ancestors_of_entity(doc, eid)
    }


def sibling_weight(doc, node_id):
    concepts = concept_index(doc)
    entities = entity_index(doc)
    if node_id in concepts:
        parent = concepts[node_id]["parent"]
        if parent is None:
            return 1
        return sum(1 for c in concepts.values() if c["parent"] == parent)
    concept = entities[node_id]["concept"]
    return sum(1 for e in entities.values() if e["concept"] == concept)


def space_nodes(doc):
    """Hypothesis node ids: non-empty concepts plus all entities, sorted."""
    nodes = [cid for cid in concept_index(doc) if extension(doc, cid)]
    nodes.extend(entity_index(doc))
    return sorted(nodes)


def prior(doc):
    weights = {node: Fraction(sibling_weight(doc, node)) for node in space_nodes(doc)}
    total = sum(weights.values())
    return {node: w / total for node, w in weights.items()}


def posterior(doc, observations):
    """Exact posterior by direct enumeration of every hypothesis."""
    masses = {}
    for node, pr in prior(doc).items():
        ext = extension(doc, node)
        like = Fraction(1)
        for x in observations:
            if x in ext:
                like *= Fraction(1, len(ext))
            else:
                like = Fraction(0)
                break
        masses[node] = pr * like
    z = sum(masses.values())
    return {node: m / z for node, m in masses.items()}


def entropy_bits(masses):
    total = 0.0
    for m in masses:
        v = float(m)
        if v > 0.0:
            total -= v * math.log2(v)
    return total


def expected_entropy(doc, masses, candidates):
    """Expected entropy after offering ``candidates``, every outcome enumerated.

    ``masses`` maps node id to exact mass. The user picks uniformly
    among offered entities inside the true hypothesis's extension; when
    none fits, the outcome removes every hypothesis whose extension
    meets the offered set.
    """
    exts = {node: extension(doc, node) for node in masses}
    total = 0.0
    for x in candidates:
        weight = Fraction(0)
        cond = {}
        for node, m in masses.items():
            if m and x in exts[node]:
                overlap = len(exts[node] & set(candidates))
                cond[node] = m * Fraction(1, overlap)
                weight += cond[node]
        if weight:
            total += float(weight) * entropy_bits(v / weight for v in cond.values())
    weight = Fraction(0)
    cond = {}
    for node, m in masses.items():
        if m and not (exts[node] & set(candidates)):
            cond[node] = m
            weight += m
    if weight:
        total += float(weight) * entropy_bits(v / weight for v in cond.values())
    return total


def random_tree_doc(rng: random.Random, max_nodes: int = 50):
    """Random valid ontology document with at most ``max_nodes`` nodes.

    Concepts attach to earlier concepts only, which keeps the tree
    acyclic and single-rooted by construction.
    """
    n_concepts = rng.randint(1, max(1, max_nodes // 2))
    concepts = [{"id": "c000", "label": "c000", "parent": None}]
    for i in range(1, n_concepts):
        parent = f"c{rng.randrange(i):03d}"
        concepts.append({"id": f"c{i:03d}", "label": f"c{i:03d}", "parent": parent})
    n_entities = rng.randint(1, max_nodes - n_concepts)
    entities = []
    for j in range(n_entities):
        concept = f"c{rng.randrange(n_concepts):03d}"
        entities.append({"id": f"e{j:03d}", "label": f"e{j:03d}", "concept": concept})
    return {"concepts": concepts, "entities": entities}


def random_observations(doc, rng: random.Random, max_len: int = 5):
    """Observation sequence drawn from one concept's extension.

    Drawing from a single concept keeps at least the root consistent
    and mirrors how a cooperative user would answer.
    """
    concepts = [cid for cid in concept_index(doc) if extension(doc, cid)]
    pool = sorted(extension(doc, rng.choice(concepts)))
    return [rng.choice(pool) for _ in range(rng.randint(0, max_len))]
