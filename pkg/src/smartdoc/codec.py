"""Canonical JSON interchange encoding for sessions, prompts, plans, findings.

This is the wire format of the HTTP service and the payload format of the
session store, so persisted transcripts stay inspectable with ordinary JSON
tooling. Timestamps are RFC 3339 in UTC at seconds precision.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

from .engine import (
    Prompt,
    Question,
    Recommendation,
    Session,
    SessionState,
    Step,
    Transcript,
)
from .model import Finding, MedicineDirective
from .reminders import DoseEvent, ReminderPlan


def utc_second(dt: datetime) -> datetime:
    """Clamp to the interchange resolution: UTC, whole seconds."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def ts_to_str(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def ts_from_str(s: str) -> datetime:
    # Python 3.10's fromisoformat does not accept a trailing Z
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def medicine_to_dict(med: MedicineDirective) -> dict:
    return {
        "name": med.name,
        "interval_hours": med.interval_hours,
        "duration_hours": med.duration_hours,
    }


def prompt_to_dict(prompt: Prompt) -> dict:
    if isinstance(prompt, Question):
        return {
            "type": "question",
            "node": prompt.node_id,
            "text": prompt.text,
            "answers": list(prompt.answers),
        }
    return {
        "type": "recommendation",
        "leaf": prompt.leaf_id,
        "advice": prompt.advice,
        "medicines": [medicine_to_dict(m) for m in prompt.medicines],
    }


def session_to_dict(session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "disease": session.disease,
        "cursor": session.cursor,
        "state": session.state.value,
        "started_at": ts_to_str(session.started_at),
    }


def transcript_to_dict(transcript: Transcript) -> dict:
    return {
        "complaint": transcript.complaint,
        "steps": [
            {
                "node": s.node,
                "question": s.question,
                "answer": s.answer,
                "answered_at": ts_to_str(s.answered_at),
            }
            for s in transcript.steps
        ],
    }


def session_from_dicts(session: dict, transcript: dict) -> Session:
    return Session(
        session_id=session["session_id"],
        disease=session["disease"],
        cursor=session["cursor"],
        state=SessionState(session["state"]),
        transcript=Transcript(
            complaint=transcript["complaint"],
            steps=[
                Step(
                    node=s["node"],
                    question=s["question"],
                    answer=s["answer"],
                    answered_at=ts_from_str(s["answered_at"]),
                )
                for s in transcript["steps"]
            ],
        ),
        started_at=ts_from_str(session["started_at"]),
    )


def dose_to_dict(dose: DoseEvent) -> dict:
    return {
        "medicine": dose.medicine,
        "due": ts_to_str(dose.due),
        "sequence": dose.sequence,
        "acknowledged": dose.acknowledged,
    }


def plan_to_dict(plan: ReminderPlan) -> dict:
    return {
        "session_id": plan.session_id,
        "doses": [dose_to_dict(d) for d in plan.doses],
    }


def plan_from_dict(data: dict) -> ReminderPlan:
    return ReminderPlan(
        session_id=data["session_id"],
        doses=tuple(
            DoseEvent(
                medicine=d["medicine"],
                due=ts_from_str(d["due"]),
                sequence=d["sequence"],
                acknowledged=d["acknowledged"],
            )
            for d in data["doses"]
        ),
    )


def finding_to_dict(finding: Finding) -> dict:
    return {
        "severity": finding.severity.value,
        "code": finding.code,
        "disease": finding.disease,
        "node": finding.node,
        "message": finding.message,
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))
