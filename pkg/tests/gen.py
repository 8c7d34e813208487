"""Deterministic random snapshot builder used across the test suite.

Generates short sessions that stress the awkward cases on purpose: dense
timestamp collisions, zero-duration activities, self-messages, agents that
never send or never receive, and activities landing exactly on the session
end.
"""

from __future__ import annotations

import datetime as dt
import random

from spotter.trace import (
    ActivityRecord,
    AgentRecord,
    MessageRecord,
    SessionHeader,
    Snapshot,
    make_snapshot,
)

NAMES = ("alpha", "beta", "gamma", "delta", "echo", "foxtrot")
PERFORMATIVES = ("request", "inform", "agree", "refuse")
CONTENTS = ("doSomeThing(123)", "ping", "compute all the things", "", "x y z")
FIXED_DATE = dt.datetime(2026, 1, 5, 10, 0, 0)


def mk(
    duration: int = 100,
    agents: tuple[str, ...] = ("alpha", "beta", "gamma"),
    msgs: tuple[tuple, ...] = (),
    acts: tuple[tuple, ...] = (),
    session_id: str = "s1",
) -> Snapshot:
    """Terse fixture builder.

    msgs entries: (seq, msg_id, sender, receiver, sent, recv[, perf[, content]])
    acts entries: (seq, agent, ts, duration[, description])
    Agents take seqs 0..len(agents)-1, so event seqs must start above that.
    """
    header = SessionHeader(session_id, FIXED_DATE, duration)
    agent_records = [AgentRecord(i, name) for i, name in enumerate(agents)]
    messages = [
        MessageRecord(
            seq=m[0], msg_id=m[1], sender=m[2], receiver=m[3], sent_ts=m[4], recv_ts=m[5],
            performative=m[6] if len(m) > 6 else "request",
            content=m[7] if len(m) > 7 else "doSomeThing(123)",
        )
        for m in msgs
    ]
    activities = [
        ActivityRecord(seq=a[0], agent=a[1], ts=a[2], duration=a[3],
                       description=a[4] if len(a) > 4 else "")
        for a in acts
    ]
    return make_snapshot(header, agent_records, messages, activities)


def random_snapshot(rng: random.Random, max_events: int = 200) -> Snapshot:
    """A valid random snapshot with at most ``max_events`` records."""
    n_agents = rng.randint(1, min(6, max_events))
    names = list(NAMES[:n_agents])
    budget = rng.randint(0, max_events - n_agents)
    time_span = rng.choice([20, 50, 1000, 1_000_000])

    seqs = list(range(n_agents, n_agents + budget))
    rng.shuffle(seqs)
    msg_ids = list(range(1, budget + 1))
    rng.shuffle(msg_ids)

    messages = []
    activities = []
    max_ts = 0
    for i in range(budget):
        if rng.random() < 0.5:
            sent = rng.randint(0, time_span)
            recv = sent + rng.randint(0, max(1, time_span // 4))
            messages.append(
                MessageRecord(
                    seq=seqs[i],
                    msg_id=msg_ids[i],
                    sender=rng.choice(names),
                    receiver=rng.choice(names),  # self-messages included
                    sent_ts=sent,
                    recv_ts=recv,
                    performative=rng.choice(PERFORMATIVES),
                    content=rng.choice(CONTENTS),
                )
            )
            max_ts = max(max_ts, recv)
        else:
            ts = rng.randint(0, time_span)
            duration = 0 if rng.random() < 0.15 else rng.randint(1, 500)
            activities.append(
                ActivityRecord(
                    seq=seqs[i],
                    agent=rng.choice(names),
                    ts=ts,
                    duration=duration,
                    description=rng.choice(("", "step", "long running step")),
                )
            )
            max_ts = max(max_ts, ts)

    # Half the time the session ends exactly on the last event.
    duration = max_ts if rng.random() < 0.5 else max_ts + rng.randint(1, time_span)
    header = SessionHeader(f"rand-{rng.randint(0, 10**9)}", FIXED_DATE, duration)
    return make_snapshot(header, [AgentRecord(i, n) for i, n in enumerate(names)],
                         messages, activities)
