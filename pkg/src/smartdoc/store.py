"""Durable append-only session persistence.

One log file per session under ``<data-dir>/sessions/<session-id>.log``. Each
committed record is framed as a 4-byte big-endian payload length followed by
the JSON payload (the codec interchange encoding), so a file truncated at any
record boundary still loads as a prefix of revisions; a partially written
trailing record is ignored on load. Saves take an optimistic revision check
and are serialized per session id; reads and distinct sessions are fully
concurrent.
"""

from __future__ import annotations

import json
import struct
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path

from . import codec
from .engine import Session, SessionState
from .reminders import ReminderPlan

_FRAME = struct.Struct(">I")


class StoreError(Exception):
    pass


class NotFound(StoreError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"no session {session_id!r} in store")


class RevisionConflict(StoreError):
    def __init__(self, session_id: str, expected: int, actual: int):
        self.session_id = session_id
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"stale save for {session_id!r}: record revision {actual}, latest is {expected}"
        )


class StorageFailure(StoreError):
    pass


@dataclass(frozen=True)
class SessionRecord:
    """A session snapshot plus its optimistic-concurrency revision."""

    session: Session
    plan: ReminderPlan | None = None
    revision: int = 0

    def to_payload(self) -> bytes:
        doc = {
            "session": codec.session_to_dict(self.session),
            "transcript": codec.transcript_to_dict(self.session.transcript),
            "plan": codec.plan_to_dict(self.plan) if self.plan is not None else None,
            "revision": self.revision,
        }
        return codec.dumps(doc).encode("utf-8")

    @staticmethod
    def from_payload(payload: bytes) -> "SessionRecord":
        doc = json.loads(payload.decode("utf-8"))
        return SessionRecord(
            session=codec.session_from_dicts(doc["session"], doc["transcript"]),
            plan=codec.plan_from_dict(doc["plan"]) if doc.get("plan") else None,
            revision=doc["revision"],
        )


def _read_frames(raw: bytes) -> list[bytes]:
    frames = []
    offset = 0
    while offset + _FRAME.size <= len(raw):
        (length,) = _FRAME.unpack_from(raw, offset)
        if offset + _FRAME.size + length > len(raw):
            break  # partial trailing record: crashed mid-write
        frames.append(raw[offset + _FRAME.size : offset + _FRAME.size + length])
        offset += _FRAME.size + length
    return frames


class SessionStore:
    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir) / "sessions"
        self.root.mkdir(parents=True, exist_ok=True)
        self._guard = threading.Lock()
        self._locks: dict[str, threading.RLock] = {}
        self._latest: dict[str, int] = {}

    def lock(self, session_id: str) -> threading.RLock:
        """Per-session mutex; also used by callers to serialize read-modify-write."""
        with self._guard:
            return self._locks.setdefault(session_id, threading.RLock())

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.log"

    def _latest_revision(self, session_id: str) -> int:
        if session_id in self._latest:
            return self._latest[session_id]
        path = self._path(session_id)
        if not path.exists():
            return 0
        record = self._load_latest(session_id)
        return record.revision

    def save(self, record: SessionRecord) -> int:
        """Append the record, bumping its revision by one.

        The record's revision must equal the latest stored revision for its
        session id (0 for a fresh session) or ``RevisionConflict`` is raised
        and the store is left unchanged.
        """
        sid = record.session.session_id
        with self.lock(sid):
            latest = self._latest_revision(sid)
            if record.revision != latest:
                raise RevisionConflict(sid, expected=latest, actual=record.revision)
            committed = replace(record, revision=latest + 1)
            payload = committed.to_payload()
            try:
                with open(self._path(sid), "ab") as fh:
                    fh.write(_FRAME.pack(len(payload)) + payload)
                    fh.flush()
            except OSError as exc:
                raise StorageFailure(f"cannot append session {sid!r}: {exc}") from exc
            self._latest[sid] = committed.revision
            return committed.revision

    def _load_latest(self, session_id: str) -> SessionRecord:
        path = self._path(session_id)
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            raise NotFound(session_id) from None
        except OSError as exc:
            raise StorageFailure(f"cannot read session {session_id!r}: {exc}") from exc
        frames = _read_frames(raw)
        if not frames:
            raise NotFound(session_id)
        try:
            record = SessionRecord.from_payload(frames[-1])
        except (ValueError, KeyError) as exc:
            raise StorageFailure(f"corrupt record for session {session_id!r}: {exc}") from exc
        self._latest[session_id] = record.revision
        return record

    def load(self, session_id: str) -> SessionRecord:
        """The highest-revision record for *session_id*."""
        with self.lock(session_id):
            return self._load_latest(session_id)

    def list_sessions(
        self, state: SessionState | None = None
    ) -> list[tuple[str, SessionState, datetime]]:
        """(session-id, state, started-at) of every stored session, oldest first."""
        rows = []
        for path in self.root.glob("*.log"):
            try:
                record = self.load(path.stem)
            except NotFound:
                continue
            s = record.session
            if state is None or s.state is state:
                rows.append((s.session_id, s.state, s.started_at))
        rows.sort(key=lambda r: (r[2], r[0]))
        return rows
