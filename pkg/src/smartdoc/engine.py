"""Dialogue state machine: one question per step, one answer per step.

A session starts from the best complaint match, walks the disease tree by
consuming answer labels, and completes when the cursor reaches a leaf. The
engine has no clock: callers supply ``now`` so every behavior is reproducible.
Sessions are single-writer; distinct sessions over a shared knowledge base may
run fully concurrently.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .matching import ComplaintIndex, build_index, match_complaint, normalize
from .model import Disease, KnowledgeBase, MedicineDirective


class EngineError(Exception):
    pass


class NoMatch(EngineError):
    """The complaint matched no entry point; the caller should re-prompt."""

    def __init__(self, complaint: str, tokens: list[str]):
        self.complaint = complaint
        self.tokens = tokens
        super().__init__(f"no entry point matches complaint {complaint!r}")


class InvalidAnswer(EngineError):
    def __init__(self, label: str, valid: tuple[str, ...], step: int):
        self.label = label
        self.valid = valid
        self.step = step
        super().__init__(f"answer {label!r} at step {step} is not one of {list(valid)}")


class SessionCompleted(EngineError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"session {session_id} is already completed")


class TooManyAnswers(EngineError):
    def __init__(self, leaf_id: str, leftover: int):
        self.leaf_id = leaf_id
        self.leftover = leftover
        super().__init__(f"{leftover} answer(s) left after reaching leaf '{leaf_id}'")


@dataclass(frozen=True)
class Question:
    node_id: str
    text: str
    answers: tuple[str, ...]  # edge labels in declaration order


@dataclass(frozen=True)
class Recommendation:
    leaf_id: str
    advice: str
    medicines: tuple[MedicineDirective, ...]


Prompt = Question | Recommendation


class SessionState(Enum):
    ACTIVE = "active"
    COMPLETED = "completed"


@dataclass
class Step:
    node: str
    question: str
    answer: str
    answered_at: datetime


@dataclass
class Transcript:
    complaint: str
    steps: list[Step] = field(default_factory=list)


@dataclass
class Session:
    """One live dialogue: a cursor into a disease tree plus its history."""

    session_id: str
    disease: str
    cursor: str
    state: SessionState
    transcript: Transcript
    started_at: datetime


def _utc_second(now: datetime) -> datetime:
    if now.tzinfo is None:
        now = now.replace(tzinfo=timezone.utc)
    return now.astimezone(timezone.utc).replace(microsecond=0)


def _prompt_at(disease: Disease, cursor: str) -> Prompt:
    if disease.is_leaf(cursor):
        leaf = disease.leaves[cursor]
        return Recommendation(leaf_id=leaf.id, advice=leaf.advice, medicines=leaf.medicines)
    node = disease.nodes[cursor]
    return Question(node_id=node.id, text=node.question, answers=node.labels)


def start_session(
    kb: KnowledgeBase,
    index: ComplaintIndex,
    complaint: str,
    now: datetime,
    session_id: str | None = None,
) -> tuple[Session, Prompt]:
    """Match *complaint*, seat the cursor on the top candidate's root.

    Returns the session and its first prompt; a leaf root completes the
    session immediately. Raises ``NoMatch`` when nothing matches.
    """
    candidates = match_complaint(index, complaint)
    if not candidates:
        raise NoMatch(complaint, normalize(complaint))
    top = candidates[0]
    disease = kb.disease(top.disease)
    root = disease.entries[top.entry].root
    session = Session(
        session_id=session_id or uuid.uuid4().hex,
        disease=disease.id,
        cursor=root,
        state=SessionState.COMPLETED if disease.is_leaf(root) else SessionState.ACTIVE,
        transcript=Transcript(complaint=complaint),
        started_at=_utc_second(now),
    )
    return session, _prompt_at(disease, root)


def answer(kb: KnowledgeBase, session: Session, label: str, now: datetime) -> Prompt:
    """Consume one answer percept and advance the cursor.

    On an unknown label the session is left observably unchanged and
    ``InvalidAnswer`` carries the valid labels.
    """
    if session.state is SessionState.COMPLETED:
        raise SessionCompleted(session.session_id)
    disease = kb.disease(session.disease)
    node = disease.nodes[session.cursor]
    edge = next((e for e in node.answers if e.label == label), None)
    if edge is None:
        raise InvalidAnswer(label, node.labels, step=len(session.transcript.steps))
    session.transcript.steps.append(
        Step(node=node.id, question=node.question, answer=label, answered_at=_utc_second(now))
    )
    session.cursor = edge.target
    if disease.is_leaf(edge.target):
        session.state = SessionState.COMPLETED
    return _prompt_at(disease, session.cursor)


def current_prompt(kb: KnowledgeBase, session: Session) -> Prompt:
    """The prompt for the cursor; pure, repeated calls identical."""
    return _prompt_at(kb.disease(session.disease), session.cursor)


_REPLAY_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def replay(
    kb: KnowledgeBase,
    complaint: str,
    labels: list[str] | tuple[str, ...],
    index: ComplaintIndex | None = None,
) -> Prompt:
    """Batch form of the dialogue: start, feed every label, return the final prompt.

    Fails exactly like the interactive path on a bad label (``InvalidAnswer``
    carries the 0-based step index). Labels left over after a leaf raise
    ``TooManyAnswers``; running out of labels mid-tree simply returns the
    pending question.
    """
    if index is None:
        index = build_index(kb)
    session, prompt = start_session(kb, index, complaint, now=_REPLAY_EPOCH)
    for i, label in enumerate(labels):
        if session.state is SessionState.COMPLETED:
            raise TooManyAnswers(session.cursor, leftover=len(labels) - i)
        prompt = answer(kb, session, label, now=_REPLAY_EPOCH)
    return prompt
