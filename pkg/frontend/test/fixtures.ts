// Canned service responses, captured verbatim from a live run of the
// Python service against the bundled hr1099 graph.

import type {
  ElicitationJson,
  LexiconJson,
  OntologyJson,
  PosteriorJson,
  SelectionResponseJson,
} from "../src/types.js";

export const ONTOLOGY: OntologyJson = {
  concepts: [
    { id: "supplier", label: "Supplier", parent: null },
    { id: "company", label: "Company", parent: "supplier" },
    { id: "contractor", label: "Contractor", parent: "supplier" },
    { id: "subscription", label: "Subscription", parent: "supplier" },
  ],
  entities: [
    { id: "acme_corp", label: "Acme Corp", concept: "company" },
    { id: "company_b", label: "Company B", concept: "company" },
    { id: "john_contractor", label: "John Contractor", concept: "contractor" },
    { id: "mary_lawyer", label: "Mary Lawyer", concept: "contractor" },
    { id: "mike_lawyer", label: "Mike Lawyer", concept: "contractor" },
    { id: "cloudsub", label: "Cloud Sub", concept: "subscription" },
  ],
};

export const ELICITATION: ElicitationJson = {
  type: "elicitation",
  word: "external",
  candidates: [
    { id: "john_contractor", label: "John Contractor" },
    { id: "acme_corp", label: "Acme Corp" },
    { id: "cloudsub", label: "Cloud Sub" },
  ],
};

export const PRIOR: PosteriorJson = {
  word: "external",
  n: 0,
  mass: [
    { node: "company", level: "specific", p: 0.125 },
    { node: "contractor", level: "specific", p: 0.125 },
    { node: "john_contractor", level: "individual", p: 0.125 },
    { node: "mary_lawyer", level: "individual", p: 0.125 },
    { node: "mike_lawyer", level: "individual", p: 0.125 },
    { node: "subscription", level: "specific", p: 0.125 },
    { node: "acme_corp", level: "individual", p: 0.08333333333333333 },
    { node: "company_b", level: "individual", p: 0.08333333333333333 },
    { node: "cloudsub", level: "individual", p: 0.041666666666666664 },
    { node: "supplier", level: "general", p: 0.041666666666666664 },
  ],
};

export const AFTER_JOHN: SelectionResponseJson = {
  posterior: {
    word: "external",
    n: 1,
    mass: [
      { node: "john_contractor", level: "individual", p: 0.72 },
      { node: "contractor", level: "specific", p: 0.24 },
      { node: "supplier", level: "general", p: 0.04 },
      { node: "acme_corp", level: "individual", p: 0.0 },
      { node: "cloudsub", level: "individual", p: 0.0 },
      { node: "company", level: "specific", p: 0.0 },
      { node: "company_b", level: "individual", p: 0.0 },
      { node: "mary_lawyer", level: "individual", p: 0.0 },
      { node: "mike_lawyer", level: "individual", p: 0.0 },
      { node: "subscription", level: "specific", p: 0.0 },
    ],
  },
  status: "learning",
  candidates: [
    { id: "mary_lawyer", label: "Mary Lawyer" },
    { id: "acme_corp", label: "Acme Corp" },
    { id: "cloudsub", label: "Cloud Sub" },
  ],
};

export const AFTER_MARY: SelectionResponseJson = {
  posterior: {
    word: "external",
    n: 2,
    mass: [
      { node: "contractor", level: "specific", p: 0.9230769230769231 },
      { node: "supplier", level: "general", p: 0.07692307692307693 },
      { node: "acme_corp", level: "individual", p: 0.0 },
      { node: "cloudsub", level: "individual", p: 0.0 },
      { node: "company", level: "specific", p: 0.0 },
      { node: "company_b", level: "individual", p: 0.0 },
      { node: "john_contractor", level: "individual", p: 0.0 },
      { node: "mary_lawyer", level: "individual", p: 0.0 },
      { node: "mike_lawyer", level: "individual", p: 0.0 },
      { node: "subscription", level: "specific", p: 0.0 },
    ],
  },
  status: "committed",
  committed_node: "contractor",
};

export const LEXICON: LexiconJson = {
  external: {
    node: "contractor",
    confidence: 0.9230769230769231,
    n: 2,
    committed_at: "2026-08-19T12:19:38.518094+00:00",
  },
};

export function labelOf(id: string): string {
  for (const c of ONTOLOGY.concepts) if (c.id === id) return c.label;
  for (const e of ONTOLOGY.entities) if (e.id === id) return e.label;
  return id;
}
