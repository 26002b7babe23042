// Pure transcript state. Every arrival (user input, bot reply, error)
// folds into a new state; the DOM is re-rendered from it, so the view
// is a function of the event stream and nothing else.

import type {
  BotReplyJson,
  CandidateJson,
  SelectionResponseJson,
} from "./types.js";

export interface TextItem {
  author: "user" | "bot";
  kind: "text";
  text: string;
  error?: boolean;
}

export interface ElicitationItem {
  author: "bot";
  kind: "elicitation";
  word: string;
  candidates: CandidateJson[];
}

export interface CommitNoticeItem {
  author: "bot";
  kind: "commit_notice";
  word: string;
  node: string;
  label: string;
  p: number;
}

export type TranscriptItem = TextItem | ElicitationItem | CommitNoticeItem;

export interface PendingElicitation {
  itemIndex: number;
  word: string;
  candidates: CandidateJson[];
}

export interface TranscriptState {
  items: TranscriptItem[];
  // the one elicitation whose buttons are live; older button sets stay
  // disabled in the rendered view
  pending: PendingElicitation | null;
}

export type LabelOf = (nodeId: string) => string;

export function emptyTranscript(): TranscriptState {
  return { items: [], pending: null };
}

function push(state: TranscriptState, item: TranscriptItem): TranscriptState {
  return { items: [...state.items, item], pending: state.pending };
}

export function addUserText(state: TranscriptState, text: string): TranscriptState {
  return push(state, { author: "user", kind: "text", text });
}

export function addError(state: TranscriptState, text: string): TranscriptState {
  return push(state, { author: "bot", kind: "text", text, error: true });
}

function pushElicitation(
  state: TranscriptState,
  word: string,
  candidates: CandidateJson[],
): TranscriptState {
  if (candidates.length === 0) {
    return addError(state, "service sent an elicitation with no candidates");
  }
  const items: TranscriptItem[] = [
    ...state.items,
    { author: "bot", kind: "elicitation", word, candidates },
  ];
  return {
    items,
    pending: { itemIndex: items.length - 1, word, candidates },
  };
}

export function addBotReply(
  state: TranscriptState,
  reply: BotReplyJson,
  labelOf: LabelOf,
): TranscriptState {
  if (reply.type === "elicitation") {
    return pushElicitation(state, reply.word, reply.candidates);
  }
  const text =
    reply.bindings.length === 0
      ? "I understood everything in that message."
      : reply.bindings
          .map((b) => `"${b.term}" means ${labelOf(b.node)}`)
          .join("; ");
  return push(state, { author: "bot", kind: "text", text });
}

export function addSelectionResult(
  state: TranscriptState,
  word: string,
  result: SelectionResponseJson,
  labelOf: LabelOf,
): TranscriptState {
  if (result.status === "committed") {
    const node = result.committed_node ?? "";
    const topMass = result.posterior.mass[0];
    const committed: TranscriptState = {
      items: [
        ...state.items,
        {
          author: "bot",
          kind: "commit_notice",
          word,
          node,
          label: labelOf(node),
          p: topMass ? topMass.p : 1,
        },
      ],
      pending: null,
    };
    if (result.next_elicitation) {
      return pushElicitation(
        committed,
        result.next_elicitation.word,
        result.next_elicitation.candidates,
      );
    }
    return committed;
  }
  if (!result.candidates || result.candidates.length === 0) {
    return addError(state, "service kept learning but offered no candidates");
  }
  return pushElicitation(state, word, result.candidates);
}
