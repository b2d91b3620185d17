"""Append-only JSONL interaction log and its replay.

One event per line, flat lowercase fields, strict per-code payload schemas.
The file is the whole persistence story: diffable, greppable, and replayable
into per-session event streams for analysis.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import SchemaViolation, StorageFailure

__all__ = [
    "EVENT_SCHEMAS",
    "EventRecord",
    "EventLog",
    "Session",
    "ReplayResult",
    "replay_log",
    "replay_path",
    "serialize_sessions",
]

# payload fields per event code, in canonical serialization order
EVENT_SCHEMAS: dict[str, tuple[str, ...]] = {
    "START": ("queue",),
    "NEXT": ("sid", "reason"),
    "CONFIRM": ("sid", "txt1", "txt2"),
    "SKIP": ("reason",),
    "TRANSLATE1": ("txt1", "txt2"),
    "TRANSLATE2": ("txt2", "txt3"),
    "ESTIMATE": ("estimation",),
    "ALIGN": ("alignment",),
}

_STRING_FIELDS = {"queue", "sid", "reason", "txt1", "txt2", "txt3"}


def _check_payload_types(code: str, payload: dict) -> None:
    for name, value in payload.items():
        if name in _STRING_FIELDS:
            if not isinstance(value, str):
                raise SchemaViolation(f"{code}.{name} must be a string")
        elif name == "estimation":
            if not isinstance(value, list) or any(
                tag not in ("OK", "BAD") for tag in value
            ):
                raise SchemaViolation(f"{code}.estimation must be a list of OK/BAD")
        elif name == "alignment":
            if not isinstance(value, list):
                raise SchemaViolation(f"{code}.alignment must be a list of links")
            for link in value:
                if (
                    not isinstance(link, (list, tuple))
                    or len(link) != 2
                    or not (link[0] is None or isinstance(link[0], int))
                    or not isinstance(link[1], int)
                ):
                    raise SchemaViolation(
                        f"{code}.alignment links must be (src index or null, tgt index)"
                    )


@dataclass
class EventRecord:
    """One logged interaction event: timestamp, session, code, payload."""

    ts: float
    session: str
    code: str
    payload: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.code not in EVENT_SCHEMAS:
            raise SchemaViolation(f"unknown event code {self.code!r}")
        if not isinstance(self.session, str) or not self.session:
            raise SchemaViolation("session must be a non-empty string")
        if not isinstance(self.ts, (int, float)) or isinstance(self.ts, bool):
            raise SchemaViolation("ts must be a number")
        if self.ts <= 0:
            raise SchemaViolation("ts must be positive")
        expected = EVENT_SCHEMAS[self.code]
        missing = [name for name in expected if name not in self.payload]
        extra = [name for name in self.payload if name not in expected]
        if missing:
            raise SchemaViolation(f"{self.code} record missing {', '.join(missing)}")
        if extra:
            raise SchemaViolation(
                f"{self.code} record has extra fields {', '.join(extra)}"
            )
        _check_payload_types(self.code, self.payload)

    def to_json(self) -> str:
        """Canonical one-line JSON: ts, session, code, then schema-order payload."""
        obj = {"ts": self.ts, "session": self.session, "code": self.code}
        for name in EVENT_SCHEMAS[self.code]:
            value = self.payload[name]
            if name == "alignment":
                value = [list(link) for link in value]
            obj[name] = value
        return json.dumps(obj, ensure_ascii=False)

    @classmethod
    def from_dict(cls, obj: dict) -> "EventRecord":
        if not isinstance(obj, dict):
            raise SchemaViolation("event must be a JSON object")
        try:
            ts = obj["ts"]
            session = obj["session"]
            code = obj["code"]
        except KeyError as exc:
            raise SchemaViolation(f"missing field {exc.args[0]}") from None
        payload = {k: v for k, v in obj.items() if k not in ("ts", "session", "code")}
        if code == "ALIGN" and isinstance(payload.get("alignment"), list):
            payload["alignment"] = [
                tuple(link) if isinstance(link, list) else link
                for link in payload["alignment"]
            ]
        record = cls(ts=ts, session=session, code=code, payload=payload)
        record.validate()
        return record

    @classmethod
    def from_json(cls, line: str) -> "EventRecord":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"invalid JSON: {exc}") from None
        return cls.from_dict(obj)


class EventLog:
    """Single-writer append point over one JSONL file.

    Appends are serialized through a lock; sequence numbers count lines from
    the start of the file, so append order equals file order. Reopening an
    existing log continues its numbering.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._seq = 0
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                self._seq = sum(1 for _ in f)

    def append(self, record: EventRecord) -> int:
        return self.append_many([record])[0]

    def append_many(self, records: list[EventRecord]) -> list[int]:
        """Append a batch atomically: no other writer interleaves within it."""
        for record in records:
            record.validate()
        lines = [record.to_json() for record in records]
        with self._lock:
            try:
                with open(self.path, "a", encoding="utf-8") as f:
                    for line in lines:
                        f.write(line + "\n")
                    f.flush()
            except OSError as exc:
                raise StorageFailure(f"cannot append to {self.path}: {exc}") from exc
            first = self._seq
            self._seq += len(records)
        return list(range(first, first + len(records)))


@dataclass
class Session:
    """All events of one session id, ordered by (ts, sequence number)."""

    session_id: str
    events: list[EventRecord] = field(default_factory=list)


@dataclass
class ReplayResult:
    sessions: list[Session]
    diagnostics: list[tuple[int, str]]  # (1-based line number, message)


def replay_log(lines: Iterable[str]) -> ReplayResult:
    """Parse log lines into sessions; bad lines become diagnostics, not failures.

    Events are grouped by session id (sessions ordered by first appearance)
    and sorted by (ts, line number), so clock ties keep file order.
    """
    diagnostics: list[tuple[int, str]] = []
    by_session: dict[str, list[tuple[float, int, EventRecord]]] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = EventRecord.from_json(line)
        except SchemaViolation as exc:
            diagnostics.append((lineno, str(exc)))
            continue
        by_session.setdefault(record.session, []).append((record.ts, lineno, record))

    sessions = []
    for session_id, keyed in by_session.items():
        keyed.sort(key=lambda item: (item[0], item[1]))
        sessions.append(
            Session(session_id=session_id, events=[record for _, _, record in keyed])
        )
    return ReplayResult(sessions=sessions, diagnostics=diagnostics)


def replay_path(path: str | Path) -> ReplayResult:
    with open(path, "r", encoding="utf-8") as f:
        return replay_log(f)


def serialize_sessions(sessions: list[Session]) -> str:
    """Sessions back to JSONL, one event per line, in session order."""
    lines = []
    for session in sessions:
        for record in session.events:
            lines.append(record.to_json())
    return "".join(line + "\n" for line in lines)
