// Shapes of the service's JSON responses. The server is the source of
// truth; nothing here is computed client-side.

export interface CandidateJson {
  id: string;
  label: string;
}

export interface ElicitationJson {
  type: "elicitation";
  word: string;
  candidates: CandidateJson[];
}

export interface AnswerJson {
  type: "answer";
  bindings: { term: string; node: string }[];
}

export type BotReplyJson = ElicitationJson | AnswerJson;

export interface PosteriorEntryJson {
  node: string;
  level: string;
  p: number;
}

export interface PosteriorJson {
  word: string;
  n: number;
  mass: PosteriorEntryJson[];
}

export interface SelectionResponseJson {
  posterior: PosteriorJson;
  status: "learning" | "committed";
  committed_node?: string;
  candidates?: CandidateJson[];
  next_elicitation?: ElicitationJson;
}

export interface LexiconEntryJson {
  node: string;
  confidence: number;
  n: number;
  committed_at: string;
}

export type LexiconJson = Record<string, LexiconEntryJson>;

export interface OntologyJson {
  concepts: { id: string; label: string; parent: string | null }[];
  entities: { id: string; label: string; concept: string }[];
}

export interface ErrorJson {
  error: string;
  detail: string;
}
