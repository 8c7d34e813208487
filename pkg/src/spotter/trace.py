"""Session data model and snapshot file I/O.

A profiling session is recorded as a snapshot: one header line followed by
agent registrations, ACL messages and computation activities, one record per
line. All times are integer microseconds relative to the session start, so
every aggregation downstream is exact integer arithmetic. Wall-clock time
appears only in the header's capture date.

File format (fields separated by single spaces):

    session <session_id> <capture_date ISO-8601> <duration_micros>
    agent <seq> <name>
    message <seq> <msg_id> <sender> <receiver> <sent_micros> <recv_micros> <performative> <content...>
    activity <seq> <agent> <start_micros> <duration_micros> [description...]

``content`` and ``description`` run to the end of the line and may contain
spaces. Agent names, performatives and the session id may not. ``seq`` is the
global capture sequence number used to break timestamp ties deterministically.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable


class SnapshotParseError(ValueError):
    """A snapshot file line that does not match the record grammar."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class SnapshotValidationError(ValueError):
    """A structurally well-formed snapshot that breaks a session invariant."""

    def __init__(self, violations: list[str]):
        super().__init__(
            "invalid snapshot: " + "; ".join(violations[:5])
            + (f" (+{len(violations) - 5} more)" if len(violations) > 5 else "")
        )
        self.violations = violations


@dataclass(frozen=True)
class SessionHeader:
    session_id: str
    capture_date: dt.datetime
    duration: int  # total recorded span, microseconds


@dataclass(frozen=True)
class AgentRecord:
    seq: int
    name: str


@dataclass(frozen=True)
class MessageRecord:
    seq: int
    msg_id: int
    sender: str
    receiver: str
    sent_ts: int
    recv_ts: int
    performative: str
    content: str


@dataclass(frozen=True)
class ActivityRecord:
    seq: int
    agent: str
    ts: int  # start timestamp
    duration: int
    description: str = ""


@dataclass(frozen=True)
class Snapshot:
    """One profiling session, immutable after load.

    A normalized snapshot keeps agents in registration order, messages sorted
    by (sent_ts, seq) and activities sorted by (ts, seq).
    """

    header: SessionHeader
    agents: tuple[AgentRecord, ...]
    messages: tuple[MessageRecord, ...]
    activities: tuple[ActivityRecord, ...]

    def agent_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.agents)


def _has_whitespace(text: str) -> bool:
    return any(c.isspace() for c in text)


def normalize(snapshot: Snapshot) -> Snapshot:
    """Return the snapshot with all record lists in canonical order."""
    return Snapshot(
        header=snapshot.header,
        agents=tuple(sorted(snapshot.agents, key=lambda a: a.seq)),
        messages=tuple(sorted(snapshot.messages, key=lambda m: (m.sent_ts, m.seq))),
        activities=tuple(sorted(snapshot.activities, key=lambda a: (a.ts, a.seq))),
    )


def validate(snapshot: Snapshot) -> list[str]:
    """Check every session invariant; returns one description per violation.

    An empty list means the snapshot is valid. Violations name the offending
    record by seq (and msg_id for messages) and the broken rule.
    """
    violations: list[str] = []
    header = snapshot.header

    if _has_whitespace(header.session_id) or not header.session_id:
        violations.append("header: session_id empty or contains whitespace")
    if header.duration < 0:
        violations.append(f"header: duration {header.duration} is negative")

    names: set[str] = set()
    for agent in snapshot.agents:
        if not agent.name:
            violations.append(f"agent seq {agent.seq}: empty name")
        elif _has_whitespace(agent.name):
            violations.append(f"agent seq {agent.seq}: name {agent.name!r} contains whitespace")
        if agent.name in names:
            violations.append(f"agent seq {agent.seq}: duplicate agent name {agent.name!r}")
        names.add(agent.name)

    seqs: set[int] = set()
    for seq in [a.seq for a in snapshot.agents] + [m.seq for m in snapshot.messages] + [
        a.seq for a in snapshot.activities
    ]:
        if seq in seqs:
            violations.append(f"seq {seq}: duplicate seq number")
        seqs.add(seq)

    max_event_ts = 0
    msg_ids: set[int] = set()
    for msg in snapshot.messages:
        who = f"message seq {msg.seq} (msg_id {msg.msg_id})"
        if msg.msg_id in msg_ids:
            violations.append(f"{who}: duplicate msg_id {msg.msg_id}")
        msg_ids.add(msg.msg_id)
        if msg.sender not in names:
            violations.append(f"{who}: unknown sender {msg.sender!r}")
        if msg.receiver not in names:
            violations.append(f"{who}: unknown receiver {msg.receiver!r}")
        if msg.sent_ts < 0:
            violations.append(f"{who}: negative sent_ts {msg.sent_ts}")
        if msg.recv_ts < msg.sent_ts:
            violations.append(f"{who}: recv_ts {msg.recv_ts} earlier than sent_ts {msg.sent_ts}")
        if not msg.performative or _has_whitespace(msg.performative):
            violations.append(f"{who}: performative empty or contains whitespace")
        if "\n" in msg.content or "\r" in msg.content:
            violations.append(f"{who}: content contains a line break")
        max_event_ts = max(max_event_ts, msg.sent_ts, msg.recv_ts)

    for act in snapshot.activities:
        who = f"activity seq {act.seq}"
        if act.agent not in names:
            violations.append(f"{who}: unknown agent {act.agent!r}")
        if act.ts < 0:
            violations.append(f"{who}: negative timestamp {act.ts}")
        if act.duration < 0:
            violations.append(f"{who}: negative duration {act.duration}")
        if "\n" in act.description or "\r" in act.description:
            violations.append(f"{who}: description contains a line break")
        max_event_ts = max(max_event_ts, act.ts)

    if (snapshot.messages or snapshot.activities) and header.duration < max_event_ts:
        violations.append(
            f"header: duration {header.duration} earlier than last event timestamp {max_event_ts}"
        )

    if list(snapshot.agents) != sorted(snapshot.agents, key=lambda a: a.seq):
        violations.append("agents not in registration (seq) order")
    if list(snapshot.messages) != sorted(snapshot.messages, key=lambda m: (m.sent_ts, m.seq)):
        violations.append("messages not in canonical (sent_ts, seq) order")
    if list(snapshot.activities) != sorted(snapshot.activities, key=lambda a: (a.ts, a.seq)):
        violations.append("activities not in canonical (ts, seq) order")

    return violations


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise SnapshotParseError(line_no, f"{what} {token!r} is not an integer") from None
    if token != str(value):
        # Reject leading zeros / plus signs so re-serialization is identity.
        raise SnapshotParseError(line_no, f"{what} {token!r} is not in canonical form")
    return value


def parse_snapshot(text: str) -> Snapshot:
    """Parse snapshot file contents into a validated, normalized Snapshot."""
    lines = text.splitlines()
    if not lines:
        raise SnapshotParseError(1, "missing session header line")

    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != "session":
        raise SnapshotParseError(1, "expected 'session <id> <capture_date> <duration_micros>'")
    if not head[1]:
        raise SnapshotParseError(1, "empty session id")
    try:
        capture = dt.datetime.fromisoformat(head[2])
    except ValueError:
        raise SnapshotParseError(1, f"capture date {head[2]!r} is not ISO-8601") from None
    header = SessionHeader(head[1], capture, _parse_int(head[3], 1, "duration"))

    agents: list[AgentRecord] = []
    messages: list[MessageRecord] = []
    activities: list[ActivityRecord] = []
    for idx, line in enumerate(lines[1:], start=2):
        kind = line.split(" ", 1)[0]
        if kind == "agent":
            parts = line.split(" ")
            if len(parts) != 3 or not parts[2]:
                raise SnapshotParseError(idx, "expected 'agent <seq> <name>'")
            agents.append(AgentRecord(_parse_int(parts[1], idx, "seq"), parts[2]))
        elif kind == "message":
            parts = line.split(" ", 8)
            if len(parts) < 8 or any(not p for p in parts[:8]):
                raise SnapshotParseError(
                    idx,
                    "expected 'message <seq> <msg_id> <sender> <receiver>"
                    " <sent_micros> <recv_micros> <performative> <content...>'",
                )
            messages.append(
                MessageRecord(
                    seq=_parse_int(parts[1], idx, "seq"),
                    msg_id=_parse_int(parts[2], idx, "msg_id"),
                    sender=parts[3],
                    receiver=parts[4],
                    sent_ts=_parse_int(parts[5], idx, "sent_micros"),
                    recv_ts=_parse_int(parts[6], idx, "recv_micros"),
                    performative=parts[7],
                    content=parts[8] if len(parts) == 9 else "",
                )
            )
        elif kind == "activity":
            parts = line.split(" ", 5)
            if len(parts) < 5 or any(not p for p in parts[:5]):
                raise SnapshotParseError(
                    idx, "expected 'activity <seq> <agent> <start_micros> <duration_micros> [description...]'"
                )
            activities.append(
                ActivityRecord(
                    seq=_parse_int(parts[1], idx, "seq"),
                    agent=parts[2],
                    ts=_parse_int(parts[3], idx, "start_micros"),
                    duration=_parse_int(parts[4], idx, "duration_micros"),
                    description=parts[5] if len(parts) == 6 else "",
                )
            )
        else:
            raise SnapshotParseError(idx, f"unknown record kind {kind!r}")

    snapshot = normalize(Snapshot(header, tuple(agents), tuple(messages), tuple(activities)))
    violations = validate(snapshot)
    if violations:
        raise SnapshotValidationError(violations)
    return snapshot


def read_snapshot(path: str | Path) -> Snapshot:
    """Read and validate a snapshot file; events come back in (ts, seq) order."""
    return parse_snapshot(Path(path).read_text(encoding="utf-8"))


def serialize_snapshot(snapshot: Snapshot) -> str:
    """Render a valid snapshot in canonical file form.

    Rejects invalid snapshots before producing any output. The result is
    deterministic: parsing it and serializing again is byte identity.
    """
    violations = validate(snapshot)
    if violations:
        raise SnapshotValidationError(violations)

    header = snapshot.header
    lines = [f"session {header.session_id} {header.capture_date.isoformat()} {header.duration}"]
    for agent in snapshot.agents:
        lines.append(f"agent {agent.seq} {agent.name}")

    events: list[tuple[int, int, str]] = []
    for msg in snapshot.messages:
        line = (
            f"message {msg.seq} {msg.msg_id} {msg.sender} {msg.receiver}"
            f" {msg.sent_ts} {msg.recv_ts} {msg.performative}"
        )
        if msg.content:
            line += f" {msg.content}"
        events.append((msg.sent_ts, msg.seq, line))
    for act in snapshot.activities:
        line = f"activity {act.seq} {act.agent} {act.ts} {act.duration}"
        if act.description:
            line += f" {act.description}"
        events.append((act.ts, act.seq, line))
    events.sort(key=lambda e: (e[0], e[1]))
    lines.extend(line for _, _, line in events)
    return "\n".join(lines) + "\n"


def write_snapshot(snapshot: Snapshot, path: str | Path) -> None:
    """Write a valid snapshot to ``path`` in canonical form."""
    Path(path).write_text(serialize_snapshot(snapshot), encoding="utf-8")


def make_snapshot(
    header: SessionHeader,
    agents: Iterable[AgentRecord],
    messages: Iterable[MessageRecord] = (),
    activities: Iterable[ActivityRecord] = (),
) -> Snapshot:
    """Build a normalized snapshot and raise if it breaks any invariant."""
    snapshot = normalize(Snapshot(header, tuple(agents), tuple(messages), tuple(activities)))
    violations = validate(snapshot)
    if violations:
        raise SnapshotValidationError(violations)
    return snapshot
