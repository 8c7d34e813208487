"""Message-impact computation over a session snapshot.

The impact of a received message on its receiver is the total duration of the
receiver's activities from that receipt until the receiver's next receipt,
from any source. Outgoing messages never end a window: an agent that sends
while working keeps accumulating against the message it last received.

Windows are half-open and ordered by (recv_ts, seq), so simultaneous events
resolve deterministically by capture sequence: an activity stamped at the same
microsecond as a receipt belongs to the new window only if it was captured
after the message. The last window of each receiver runs to the end of the
session and absorbs everything from its receipt onward, which keeps the
books exact: every activity at or after its agent's first receipt is counted
in exactly one window, and the session totals close without remainder.

All sums are integer microseconds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .trace import ActivityRecord, MessageRecord, Snapshot

_END_OF_SESSION = float("inf")  # seq bound for the final window


@dataclass(frozen=True)
class MessageImpact:
    msg_id: int
    receiver: str
    window_start: int
    window_end: int  # next receipt, or session end for the last window
    impact: int
    activity_count: int


@dataclass(frozen=True)
class PairImpact:
    emitter: str
    receiver: str
    total: int
    message_count: int


@dataclass(frozen=True)
class AgentImpact:
    emitter: str
    total: int
    receiver_count: int


@dataclass(frozen=True)
class SessionImpact:
    total_impact: int
    total_activity: int
    pre_message_activity: int
    agent_count: int


@dataclass(frozen=True)
class ImpactTable:
    """All aggregation levels of one session; each level sums exactly to the next."""

    per_message: tuple[MessageImpact, ...]
    per_pair: tuple[PairImpact, ...]
    per_emitter: tuple[AgentImpact, ...]
    session: SessionImpact


def _received_by(snapshot: Snapshot) -> dict[str, list[MessageRecord]]:
    by_receiver: dict[str, list[MessageRecord]] = {name: [] for name in snapshot.agent_names()}
    for msg in snapshot.messages:
        by_receiver[msg.receiver].append(msg)
    for msgs in by_receiver.values():
        msgs.sort(key=lambda m: (m.recv_ts, m.seq))
    return by_receiver


def _activities_by(snapshot: Snapshot) -> dict[str, list[ActivityRecord]]:
    by_agent: dict[str, list[ActivityRecord]] = {name: [] for name in snapshot.agent_names()}
    for act in snapshot.activities:
        by_agent[act.agent].append(act)
    for acts in by_agent.values():
        acts.sort(key=lambda a: (a.ts, a.seq))
    return by_agent


def _window_bounds(
    msgs: list[MessageRecord], session_end: int
) -> list[tuple[tuple[int, int], tuple[int, float]]]:
    """Per received message, the half-open (ts, seq) interval it owns."""
    bounds = []
    for i, msg in enumerate(msgs):
        start = (msg.recv_ts, msg.seq)
        if i + 1 < len(msgs):
            nxt = msgs[i + 1]
            end: tuple[int, float] = (nxt.recv_ts, nxt.seq)
        else:
            end = (session_end, _END_OF_SESSION)
        bounds.append((start, end))
    return bounds


def segment_windows(snapshot: Snapshot, receiver: str) -> list[tuple[int, int, int]]:
    """Attribution windows of one receiver as (msg_id, window_start, window_end).

    Windows are ordered by receipt, pairwise disjoint, and each ends at the
    next received message or at the session end for the last one.
    """
    if receiver not in snapshot.agent_names():
        raise ValueError(f"unknown agent {receiver!r}")
    msgs = _received_by(snapshot)[receiver]
    session_end = snapshot.header.duration
    out = []
    for i, msg in enumerate(msgs):
        end = msgs[i + 1].recv_ts if i + 1 < len(msgs) else session_end
        out.append((msg.msg_id, msg.recv_ts, end))
    return out


def compute_impact_table(snapshot: Snapshot) -> ImpactTable:
    """Compute per-message impacts and every recursive aggregate for a session."""
    received = _received_by(snapshot)
    activities = _activities_by(snapshot)
    session_end = snapshot.header.duration

    per_message: list[MessageImpact] = []
    pre_message_activity = 0
    for agent in snapshot.agent_names():
        msgs = received[agent]
        acts = activities[agent]
        bounds = _window_bounds(msgs, session_end)
        if not bounds:
            pre_message_activity += sum(a.duration for a in acts)
            continue
        first_start = bounds[0][0]
        pre_message_activity += sum(a.duration for a in acts if (a.ts, a.seq) < first_start)

        i = 0
        while i < len(acts) and (acts[i].ts, acts[i].seq) < first_start:
            i += 1
        for msg, (start, end) in zip(msgs, bounds):
            impact = 0
            count = 0
            while i < len(acts) and (acts[i].ts, acts[i].seq) < end:
                impact += acts[i].duration
                count += 1
                i += 1
            per_message.append(
                MessageImpact(
                    msg_id=msg.msg_id,
                    receiver=agent,
                    window_start=msg.recv_ts,
                    window_end=end[0],
                    impact=impact,
                    activity_count=count,
                )
            )
    per_message.sort(key=lambda mi: mi.msg_id)

    sender_of = {m.msg_id: m.sender for m in snapshot.messages}
    pair_totals: dict[tuple[str, str], list[int]] = {}
    for mi in per_message:
        key = (sender_of[mi.msg_id], mi.receiver)
        entry = pair_totals.setdefault(key, [0, 0])
        entry[0] += mi.impact
        entry[1] += 1
    per_pair = tuple(
        PairImpact(emitter, receiver, total, count)
        for (emitter, receiver), (total, count) in sorted(pair_totals.items())
    )

    emitter_totals: dict[str, list[int]] = {}
    for pair in per_pair:
        entry = emitter_totals.setdefault(pair.emitter, [0, 0])
        entry[0] += pair.total
        entry[1] += 1
    per_emitter = tuple(
        AgentImpact(emitter, total, receivers)
        for emitter, (total, receivers) in sorted(emitter_totals.items())
    )

    total_impact = sum(a.total for a in per_emitter)
    session = SessionImpact(
        total_impact=total_impact,
        total_activity=total_impact + pre_message_activity,
        pre_message_activity=pre_message_activity,
        agent_count=len(snapshot.agents),
    )
    return ImpactTable(tuple(per_message), per_pair, per_emitter, session)


def impacts_by_id(table: ImpactTable) -> dict[int, MessageImpact]:
    return {mi.msg_id: mi for mi in table.per_message}


def message_impact(snapshot: Snapshot, msg_id: int) -> MessageImpact:
    """Impact of one message; raises for unknown msg_id."""
    table = compute_impact_table(snapshot)
    by_id = impacts_by_id(table)
    if msg_id not in by_id:
        raise ValueError(f"unknown msg_id {msg_id}")
    return by_id[msg_id]


def pair_impact(snapshot: Snapshot, emitter: str, receiver: str) -> PairImpact:
    """Total impact of all messages emitter -> receiver (zero row if none)."""
    names = snapshot.agent_names()
    for agent in (emitter, receiver):
        if agent not in names:
            raise ValueError(f"unknown agent {agent!r}")
    table = compute_impact_table(snapshot)
    for pair in table.per_pair:
        if pair.emitter == emitter and pair.receiver == receiver:
            return pair
    return PairImpact(emitter, receiver, 0, 0)


def agent_impact(snapshot: Snapshot, emitter: str) -> AgentImpact:
    """Total impact an emitter caused across all receivers (zero row if none)."""
    if emitter not in snapshot.agent_names():
        raise ValueError(f"unknown agent {emitter!r}")
    table = compute_impact_table(snapshot)
    for agent in table.per_emitter:
        if agent.emitter == emitter:
            return agent
    return AgentImpact(emitter, 0, 0)


def session_impact(snapshot: Snapshot) -> SessionImpact:
    """Session-level totals: impact, activity, and their pre-first-receipt gap."""
    return compute_impact_table(snapshot).session
