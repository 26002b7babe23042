"""Chat sessions that learn word meanings from user selections.

A session owns a FIFO queue of unknown words and at most one open
learning episode. Every state change is driven by an event; live
operations append events to a JSONL log and apply them, and
:meth:`Session.replay` rebuilds an identical session from the same
events. Timestamps live on the events, so replay reproduces lexicon
timestamps too.

Event kinds: user_message, bot_elicitation, user_selection,
bot_commit, bot_answer.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .elicitation import CommitDecision, ElicitationConfig, commit_decision, select_candidates
from .inference import Posterior, UnknownEntity, build_space, posterior_batch, posterior_update
from .ontology import Ontology


class SessionError(Exception):
    pass


class SessionClosed(SessionError):
    pass


class NoActiveEpisode(SessionError):
    pass


class CandidateNotOffered(SessionError):
    pass


class CorruptLog(SessionError):
    pass


class StorageUnavailable(SessionError):
    pass


STATUS_AWAITING = "awaiting_selection"
STATUS_COMMITTED = "committed"
STATUS_ABANDONED = "abandoned"

EVENT_KINDS = ("user_message", "bot_elicitation", "user_selection", "bot_commit", "bot_answer")

# Function words only; content verbs stay out so they can be learned.
DEFAULT_STOPWORDS = frozenset(
    """
    a about above after again all am an and any are as at be because been
    before being below between both but by can could did do does doing down
    during each few for from further had has have having he her here hers
    him his how i if in into is it its just me more most my no nor not now
    of off on once only or other our ours out over own please same she
    should so some such than thanks thank that the their theirs them then
    there these they this those through to too under until up very was we
    were what when where which while who whom why will with would you your
    yours hi hello hey ok okay yes
    """.split()
)

_TOKEN_CLEAN = re.compile(r"[^a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace.

    Tokens containing digits are dropped: numbers and form names like
    1099 are never treated as words to learn.
    """
    out: list[str] = []
    for raw in text.lower().split():
        tok = _TOKEN_CLEAN.sub("", raw)
        if not tok or any(ch.isdigit() for ch in tok):
            continue
        out.append(tok)
    return out


def _singular(token: str) -> str | None:
    if len(token) >= 4 and token.endswith("s"):
        return token[:-1]
    return None


def detect_unknown_terms(text: str, vocab: set[str]) -> list[str]:
    """Tokens of ``text`` not covered by ``vocab``, in first-seen order.

    A token of length >= 4 ending in "s" is also tried with the final
    "s" stripped; if either form is known the token is known, otherwise
    the stripped form is what gets reported.
    """
    unknown: list[str] = []
    seen: set[str] = set()
    for tok in tokenize(text):
        stripped = _singular(tok)
        if tok in vocab or (stripped is not None and stripped in vocab):
            continue
        reported = stripped if stripped is not None else tok
        if reported not in seen:
            seen.add(reported)
            unknown.append(reported)
    return unknown


def label_vocabulary(ontology: Ontology) -> set[str]:
    """All tokens occurring in concept and entity labels."""
    vocab: set[str] = set()
    for cid in ontology.concepts:
        vocab.update(tokenize(ontology.concepts[cid].label))
    for eid in ontology.entities:
        vocab.update(tokenize(ontology.entities[eid].label))
    return vocab


def _write_atomic(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


@dataclass(frozen=True)
class LexiconEntry:
    node: str
    confidence: float
    n: int
    committed_at: str


class Lexicon:
    """Committed word meanings, persisted as a single JSON file.

    With no path the lexicon is an in-memory view, which is what
    replay uses. File writes go through temp-file-plus-rename so a
    crash never leaves a half-written file behind.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[str, LexiconEntry] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            raw = json.loads(self.path.read_text(encoding="utf-8"))
            for word, entry in raw.items():
                self._entries[word] = LexiconEntry(**entry)

    def get(self, word: str) -> LexiconEntry | None:
        return self._entries.get(word)

    def words(self) -> set[str]:
        return set(self._entries)

    def as_dict(self) -> dict[str, dict]:
        return {word: asdict(entry) for word, entry in sorted(self._entries.items())}

    def commit(self, word: str, entry: LexiconEntry) -> None:
        with self._lock:
            self._entries[word] = entry
            if self.path is not None:
                try:
                    payload = json.dumps(self.as_dict(), indent=2, sort_keys=True)
                    _write_atomic(self.path, payload + "\n")
                except OSError as exc:
                    raise StorageUnavailable(f"cannot write lexicon: {exc}") from exc


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    ts: str
    kind: str
    payload: dict


@dataclass
class LearningEpisode:
    word: str
    observations: list[str]
    posterior: Posterior
    status: str
    pending_candidates: list[str]


@dataclass(frozen=True)
class Candidate:
    id: str
    label: str


@dataclass(frozen=True)
class Elicitation:
    word: str
    candidates: tuple[Candidate, ...]


@dataclass(frozen=True)
class Binding:
    term: str
    node: str


@dataclass(frozen=True)
class Answer:
    bindings: tuple[Binding, ...]


BotReply = Elicitation | Answer


@dataclass(frozen=True)
class SelectionResult:
    posterior: Posterior
    decision: CommitDecision
    candidates: tuple[str, ...] | None = None
    next_elicitation: Elicitation | None = None


def read_event_log(path: str | Path) -> list[SessionEvent]:
    """Parse a JSONL event log; malformed lines raise CorruptLog."""
    events: list[SessionEvent] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            events.append(
                SessionEvent(
                    seq=int(raw["seq"]),
                    ts=str(raw["ts"]),
                    kind=str(raw["kind"]),
                    payload=dict(raw["payload"]),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptLog(f"line {lineno}: {exc}") from exc
    return events


class Session:
    """One conversation. Public operations serialize on an internal lock."""

    def __init__(
        self,
        ontology: Ontology,
        lexicon: Lexicon,
        config: ElicitationConfig | None = None,
        session_id: str = "local",
        log_path: str | Path | None = None,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    ) -> None:
        self.ontology = ontology
        self.lexicon = lexicon
        self.config = config or ElicitationConfig()
        self.session_id = session_id
        self.log_path = Path(log_path) if log_path is not None else None
        self.stopwords = stopwords
        self.events: list[SessionEvent] = []
        self.episodes: dict[str, LearningEpisode] = {}
        self.active_word: str | None = None
        self.queue: list[str] = []
        self.closed = False
        self._lock = threading.RLock()
        self._label_index = self._build_label_index()

    # -- vocabulary ----------------------------------------------------

    def _build_label_index(self) -> dict[str, str]:
        index: dict[str, str] = {}
        for cid in self.ontology.concept_ids():
            index.setdefault(self.ontology.concepts[cid].label.lower(), cid)
        for eid in self.ontology.entity_ids():
            index.setdefault(self.ontology.entities[eid].label.lower(), eid)
        return index

    def vocabulary(self) -> set[str]:
        return set(self.stopwords) | label_vocabulary(self.ontology) | self.lexicon.words()

    def _resolve_bindings(self, text: str) -> list[Binding]:
        bindings: list[Binding] = []
        seen: set[str] = set()
        for tok in tokenize(text):
            for form in (tok, _singular(tok)):
                if form is None:
                    continue
                entry = self.lexicon.get(form)
                if entry is not None:
                    found = Binding(term=form, node=entry.node)
                elif form in self._label_index:
                    found = Binding(term=form, node=self._label_index[form])
                else:
                    continue
                if found.term not in seen:
                    seen.add(found.term)
                    bindings.append(found)
                break
        return bindings

    # -- event plumbing ------------------------------------------------

    def _now(self) -> str:
        return datetime.now(timezone.utc).isoformat()

    def _record(self, kind: str, payload: dict) -> SessionEvent:
        event = SessionEvent(seq=len(self.events) + 1, ts=self._now(), kind=kind, payload=payload)
        self.events.append(event)
        self._persist()
        self._apply(event)
        return event

    def _persist(self) -> None:
        if self.log_path is None:
            return
        lines = [
            json.dumps(
                {"seq": e.seq, "ts": e.ts, "kind": e.kind, "payload": e.payload},
                sort_keys=True,
            )
            for e in self.events
        ]
        try:
            _write_atomic(self.log_path, "\n".join(lines) + ("\n" if lines else ""))
        except OSError as exc:
            raise StorageUnavailable(f"cannot write event log: {exc}") from exc

    def _apply(self, event: SessionEvent) -> None:
        try:
            handler = {
                "user_message": self._apply_user_message,
                "bot_elicitation": self._apply_bot_elicitation,
                "user_selection": self._apply_user_selection,
                "bot_commit": self._apply_bot_commit,
                "bot_answer": self._apply_bot_answer,
            }[event.kind]
        except KeyError:
            raise CorruptLog(f"event {event.seq}: unknown kind {event.kind!r}") from None
        try:
            handler(event)
        except (KeyError, TypeError) as exc:
            raise CorruptLog(f"event {event.seq}: malformed payload: {exc}") from exc

    def _apply_user_message(self, event: SessionEvent) -> None:
        unknowns = detect_unknown_terms(event.payload["text"], self.vocabulary())
        for word in unknowns:
            if word != self.active_word and word not in self.queue:
                self.queue.append(word)

    def _apply_bot_elicitation(self, event: SessionEvent) -> None:
        word = event.payload["word"]
        candidates = list(event.payload["candidates"])
        if self.active_word == word:
            self.episodes[word].pending_candidates = candidates
            return
        if word in self.queue:
            self.queue.remove(word)
        space = build_space(self.ontology, word)
        self.episodes[word] = LearningEpisode(
            word=word,
            observations=[],
            posterior=posterior_batch(space, []),
            status=STATUS_AWAITING,
            pending_candidates=candidates,
        )
        self.active_word = word

    def _apply_user_selection(self, event: SessionEvent) -> None:
        episode = self.episodes[event.payload["word"]]
        entity = event.payload["entity"]
        episode.observations.append(entity)
        episode.posterior = posterior_update(episode.posterior, entity)

    def _apply_bot_commit(self, event: SessionEvent) -> None:
        word = event.payload["word"]
        episode = self.episodes[word]
        episode.status = STATUS_COMMITTED
        episode.pending_candidates = []
        self.active_word = None
        self.lexicon.commit(
            word,
            LexiconEntry(
                node=event.payload["node"],
                confidence=float(event.payload["confidence"]),
                n=int(event.payload["n"]),
                committed_at=event.ts,
            ),
        )

    def _apply_bot_answer(self, event: SessionEvent) -> None:
        pass  # transcript only, no state change

    # -- public operations ---------------------------------------------

    def _elicitation_reply(self, word: str) -> Elicitation:
        episode = self.episodes[word]
        return Elicitation(
            word=word,
            candidates=tuple(
                Candidate(id=eid, label=self.ontology.label(eid))
                for eid in episode.pending_candidates
            ),
        )

    def _open_next_episode(self) -> Elicitation:
        word = self.queue[0]
        space = build_space(self.ontology, word)
        prior = posterior_batch(space, [])
        candidates = select_candidates(self.ontology, prior, self.config)
        self._record("bot_elicitation", {"word": word, "candidates": candidates})
        return self._elicitation_reply(word)

    def handle_message(self, text: str) -> BotReply:
        with self._lock:
            if self.closed:
                raise SessionClosed("session is closed")
            self._record("user_message", {"text": text})
            if self.active_word is not None:
                # A selection is already pending; repeat the open question.
                word = self.active_word
                self._record(
                    "bot_elicitation",
                    {"word": word, "candidates": list(self.episodes[word].pending_candidates)},
                )
                return self._elicitation_reply(word)
            if self.queue:
                return self._open_next_episode()
            bindings = self._resolve_bindings(text)
            self._record(
                "bot_answer",
                {"bindings": [{"term": b.term, "node": b.node} for b in bindings]},
            )
            return Answer(bindings=tuple(bindings))

    def handle_selection(self, word: str, entity: str) -> SelectionResult:
        with self._lock:
            if self.closed:
                raise SessionClosed("session is closed")
            word = word.strip().lower()
            if self.active_word != word:
                raise NoActiveEpisode(f"no selection pending for {word!r}")
            episode = self.episodes[word]
            if entity not in self.ontology.entities:
                raise UnknownEntity(f"unknown entity id {entity!r}")
            if entity not in episode.pending_candidates:
                raise CandidateNotOffered(f"{entity!r} was not offered for {word!r}")

            self._record("user_selection", {"word": word, "entity": entity})
            posterior = episode.posterior
            decision = commit_decision(posterior, self.config)
            if decision.committed:
                self._record(
                    "bot_commit",
                    {
                        "word": word,
                        "node": decision.node,
                        "confidence": float(decision.probability),
                        "n": posterior.n,
                    },
                )
                next_elicitation = self._open_next_episode() if self.queue else None
                return SelectionResult(
                    posterior=posterior,
                    decision=decision,
                    candidates=None,
                    next_elicitation=next_elicitation,
                )
            refreshed = select_candidates(self.ontology, posterior, self.config)
            self._record("bot_elicitation", {"word": word, "candidates": refreshed})
            return SelectionResult(
                posterior=posterior,
                decision=decision,
                candidates=tuple(refreshed),
            )

    def posterior_for(self, word: str) -> Posterior:
        """Current posterior for a word; the prior when nothing was observed."""
        with self._lock:
            word = word.strip().lower()
            episode = self.episodes.get(word)
            if episode is not None:
                return episode.posterior
            return posterior_batch(build_space(self.ontology, word), [])

    def close(self) -> None:
        # Closing is operational, not event-sourced: there is no event
        # kind for it, so replay rebuilds the session in its open state.
        with self._lock:
            if self.active_word is not None:
                self.episodes[self.active_word].status = STATUS_ABANDONED
                self.episodes[self.active_word].pending_candidates = []
                self.active_word = None
            self.closed = True

    # -- replay ----------------------------------------------------------

    @classmethod
    def replay(
        cls,
        events: Sequence[SessionEvent],
        ontology: Ontology,
        config: ElicitationConfig | None = None,
        lexicon: Lexicon | None = None,
        session_id: str = "replay",
        log_path: str | Path | None = None,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    ) -> "Session":
        """Rebuild a session from its event log.

        Raises CorruptLog on a sequence gap or malformed payload. The
        rebuilt session writes nothing while replaying; pass
        ``log_path`` to re-attach persistence afterwards.
        """
        session = cls(
            ontology,
            lexicon if lexicon is not None else Lexicon(),
            config,
            session_id=session_id,
            log_path=None,
            stopwords=stopwords,
        )
        for i, event in enumerate(events, start=1):
            if event.seq != i:
                raise CorruptLog(f"sequence gap: expected {i}, found {event.seq}")
            session.events.append(event)
            session._apply(event)
        session.log_path = Path(log_path) if log_path is not None else None
        return session
