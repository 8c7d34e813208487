"""Per-agent tabular summary of a session: activity, messaging, impact caused."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fmt import format_seconds, pct_text, round_pct_tenths
from .impact import ImpactTable
from .trace import Snapshot


@dataclass(frozen=True)
class FlatProfileRow:
    agent: str
    msgs_sent: int
    msgs_received: int
    activity_count: int
    total_activity: int
    impact_caused: int  # impact this agent's outgoing messages had on others
    pct_session_activity: Fraction


def flat_profile(snapshot: Snapshot, table: ImpactTable) -> list[FlatProfileRow]:
    """One row per registered agent, busiest first.

    Row activity totals sum to the session's total activity, and the
    impact-caused column sums to the session's total impact.
    """
    sent: dict[str, int] = {}
    received: dict[str, int] = {}
    for msg in snapshot.messages:
        sent[msg.sender] = sent.get(msg.sender, 0) + 1
        received[msg.receiver] = received.get(msg.receiver, 0) + 1
    act_count: dict[str, int] = {}
    act_total: dict[str, int] = {}
    for act in snapshot.activities:
        act_count[act.agent] = act_count.get(act.agent, 0) + 1
        act_total[act.agent] = act_total.get(act.agent, 0) + act.duration
    caused = {a.emitter: a.total for a in table.per_emitter}

    total_activity = table.session.total_activity
    rows = []
    for name in snapshot.agent_names():
        activity = act_total.get(name, 0)
        rows.append(
            FlatProfileRow(
                agent=name,
                msgs_sent=sent.get(name, 0),
                msgs_received=received.get(name, 0),
                activity_count=act_count.get(name, 0),
                total_activity=activity,
                impact_caused=caused.get(name, 0),
                pct_session_activity=(
                    Fraction(100 * activity, total_activity) if total_activity else Fraction(0)
                ),
            )
        )
    rows.sort(key=lambda r: (-r.total_activity, r.agent))
    return rows


def render_flat_table(rows: list[FlatProfileRow]) -> str:
    """Aligned text table with a trailing totals line (header only when empty)."""
    header = ["agent", "sent", "recv", "acts", "activity_s", "impact_s", "%activity"]
    if not rows:
        return "  ".join(header) + "\n"
    body = [
        [
            r.agent,
            str(r.msgs_sent),
            str(r.msgs_received),
            str(r.activity_count),
            format_seconds(r.total_activity),
            format_seconds(r.impact_caused),
            pct_text(round_pct_tenths(r.pct_session_activity)),
        ]
        for r in rows
    ]
    totals = [
        "TOTAL",
        str(sum(r.msgs_sent for r in rows)),
        str(sum(r.msgs_received for r in rows)),
        str(sum(r.activity_count for r in rows)),
        format_seconds(sum(r.total_activity for r in rows)),
        format_seconds(sum(r.impact_caused for r in rows)),
        pct_text(round_pct_tenths(sum((r.pct_session_activity for r in rows), Fraction(0)))),
    ]
    table = [header, *body, totals]
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for row in table:
        cells = [row[0].ljust(widths[0])] + [
            cell.rjust(width) for cell, width in zip(row[1:], widths[1:])
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
