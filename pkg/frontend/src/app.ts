// DOM wiring. All state lives in plain values here; render() rebuilds
// the view from them after every change. At most one mutating request
// is in flight at a time.

import { ApiClient, ApiError } from "./api.js";
import { toBarModel } from "./posterior.js";
import {
  addBotReply,
  addError,
  addSelectionResult,
  addUserText,
  emptyTranscript,
  type TranscriptState,
} from "./transcript.js";
import type { LexiconJson, PosteriorJson } from "./types.js";

export interface App {
  sessionId: string;
  state(): TranscriptState;
  // resolves when the last user-triggered request has settled
  flush(): Promise<void>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export async function boot(root: HTMLElement, api: ApiClient): Promise<App> {
  const sessionId = await api.createSession();
  const ontology = await api.getOntology();
  const labels = new Map<string, string>();
  for (const c of ontology.concepts) labels.set(c.id, c.label);
  for (const e of ontology.entities) labels.set(e.id, e.label);
  const labelOf = (id: string) => labels.get(id) ?? id;

  let transcript = emptyTranscript();
  let lastPosterior: PosteriorJson | null = null;
  let lexicon: LexiconJson | null = null;
  let activeTab: "posterior" | "lexicon" = "posterior";
  let showZeros = false;
  let inFlight = false;
  let lastOp: Promise<void> = Promise.resolve();

  root.innerHTML = "";
  const header = el("header", "header");
  header.appendChild(el("h1", "", "lexlearn"));
  header.appendChild(el("span", "session", `session ${sessionId.slice(0, 8)}`));
  const layout = el("div", "layout");
  const chat = el("div", "chat");
  const transcriptEl = el("div", "transcript");
  const form = el("form", "input-bar");
  const input = el("input");
  input.placeholder = "Type a message...";
  input.autocomplete = "off";
  const send = el("button", "send", "Send");
  send.type = "submit";
  form.appendChild(input);
  form.appendChild(send);
  chat.appendChild(transcriptEl);
  chat.appendChild(form);
  const side = el("div", "side");
  const tabs = el("div", "tabs");
  const posteriorTab = el("button", "tab active", "Posterior");
  const lexiconTab = el("button", "tab", "Lexicon");
  posteriorTab.type = "button";
  lexiconTab.type = "button";
  tabs.appendChild(posteriorTab);
  tabs.appendChild(lexiconTab);
  const panel = el("div", "panel");
  side.appendChild(tabs);
  side.appendChild(panel);
  layout.appendChild(chat);
  layout.appendChild(side);
  root.appendChild(header);
  root.appendChild(layout);

  function renderTranscript() {
    transcriptEl.innerHTML = "";
    transcript.items.forEach((item, index) => {
      if (item.kind === "text") {
        const cls = item.error ? "msg bot error" : `msg ${item.author}`;
        transcriptEl.appendChild(el("div", cls, item.text));
        return;
      }
      if (item.kind === "commit_notice") {
        const pct = (item.p * 100).toFixed(1);
        transcriptEl.appendChild(
          el(
            "div",
            "msg bot commit",
            `Got it: "${item.word}" means ${item.label} (${pct}%).`,
          ),
        );
        return;
      }
      const bubble = el("div", "msg bot elicitation");
      bubble.appendChild(
        el(
          "div",
          "",
          `I don't know "${item.word}" yet. Which of these does it apply to?`,
        ),
      );
      const row = el("div", "elicit-buttons");
      const live =
        transcript.pending !== null && transcript.pending.itemIndex === index;
      for (const candidate of item.candidates) {
        const button = el("button", "candidate", candidate.label);
        button.type = "button";
        button.dataset.entity = candidate.id;
        button.disabled = !live || inFlight;
        button.onclick = () => pick(item.word, candidate.id, candidate.label);
        row.appendChild(button);
      }
      bubble.appendChild(row);
      transcriptEl.appendChild(bubble);
    });
    transcriptEl.scrollTop = transcriptEl.scrollHeight;
  }

  function renderPanel() {
    posteriorTab.className = activeTab === "posterior" ? "tab active" : "tab";
    lexiconTab.className = activeTab === "lexicon" ? "tab active" : "tab";
    panel.innerHTML = "";
    if (activeTab === "lexicon") {
      renderLexicon();
      return;
    }
    if (lastPosterior === null) {
      panel.appendChild(el("div", "placeholder", "No posterior yet."));
      return;
    }
    const model = toBarModel(lastPosterior, labelOf);
    if (model === null) {
      panel.appendChild(
        el("div", "placeholder error", "Could not read the posterior."),
      );
      return;
    }
    panel.appendChild(
      el("div", "panel-title", `p(meaning of "${model.word}") after n=${model.n}`),
    );
    const chart = el("div", "bars");
    const rows = showZeros ? [...model.bars, ...model.zeros] : model.bars;
    for (const bar of rows) {
      const row = el("div", "bar-row");
      row.dataset.node = bar.node;
      row.appendChild(el("span", "bar-label", `${bar.label} (${bar.level})`));
      const track = el("div", "bar-track");
      const fill = el("div", "bar-fill");
      fill.style.width = `${bar.width}%`;
      track.appendChild(fill);
      row.appendChild(track);
      row.appendChild(el("span", "bar-pct", bar.pctText));
      chart.appendChild(row);
    }
    panel.appendChild(chart);
    if (model.zeros.length > 0) {
      const toggle = el(
        "button",
        "toggle-zeros",
        showZeros ? "hide zero-mass" : `show all (${model.zeros.length} at 0%)`,
      );
      toggle.type = "button";
      toggle.onclick = () => {
        showZeros = !showZeros;
        render();
      };
      panel.appendChild(toggle);
    }
  }

  function renderLexicon() {
    if (lexicon === null) {
      panel.appendChild(el("div", "placeholder", "Loading..."));
      return;
    }
    const words = Object.keys(lexicon).sort();
    if (words.length === 0) {
      panel.appendChild(el("div", "placeholder", "Nothing committed yet."));
      return;
    }
    const list = el("div", "lexicon");
    for (const word of words) {
      const entry = lexicon[word];
      if (!entry) continue;
      const row = el("div", "lexicon-row");
      row.dataset.word = word;
      row.appendChild(el("span", "lexicon-word", `"${word}"`));
      row.appendChild(
        el(
          "span",
          "lexicon-node",
          `${labelOf(entry.node)} (p=${entry.confidence.toFixed(3)}, n=${entry.n})`,
        ),
      );
      list.appendChild(row);
    }
    panel.appendChild(list);
  }

  function render() {
    renderTranscript();
    renderPanel();
    send.disabled = inFlight || input.value.trim() === "";
  }

  function track(run: () => Promise<void>) {
    lastOp = run();
  }

  function submitMessage() {
    const text = input.value.trim();
    if (!text || inFlight) return;
    inFlight = true;
    transcript = addUserText(transcript, text);
    render();
    track(async () => {
      try {
        const reply = await api.sendMessage(sessionId, text);
        transcript = addBotReply(transcript, reply, labelOf);
        if (reply.type === "elicitation") {
          // show the prior for the word being learned; display only,
          // the numbers come from the service
          lastPosterior = await api
            .getPosterior(sessionId, reply.word)
            .catch(() => lastPosterior);
        }
        input.value = "";
      } catch (err) {
        transcript = addError(transcript, describe(err));
      } finally {
        inFlight = false;
        render();
      }
    });
  }

  function pick(word: string, entity: string, label: string) {
    if (inFlight) return;
    inFlight = true;
    transcript = addUserText(transcript, label);
    render();
    track(async () => {
      try {
        const result = await api.sendSelection(sessionId, word, entity);
        lastPosterior = result.posterior;
        transcript = addSelectionResult(transcript, word, result, labelOf);
        if (result.status === "committed") {
          lexicon = await api.getLexicon().catch(() => lexicon);
        }
      } catch (err) {
        transcript = addError(transcript, describe(err));
      } finally {
        inFlight = false;
        render();
      }
    });
  }

  function describe(err: unknown): string {
    if (err instanceof ApiError) return `${err.code}: ${err.message}`;
    return err instanceof Error ? err.message : String(err);
  }

  form.onsubmit = (event) => {
    event.preventDefault();
    submitMessage();
  };
  input.oninput = () => {
    send.disabled = inFlight || input.value.trim() === "";
  };
  posteriorTab.onclick = () => {
    activeTab = "posterior";
    render();
  };
  lexiconTab.onclick = () => {
    activeTab = "lexicon";
    render();
    track(async () => {
      lexicon = await api.getLexicon().catch(() => lexicon);
      render();
    });
  };

  render();
  return {
    sessionId,
    state: () => transcript,
    flush: async () => {
      // ops can queue follow-up ops; settle until quiet
      let previous;
      do {
        previous = lastOp;
        await previous;
      } while (previous !== lastOp);
    },
  };
}
