"""Deterministic overseer/worker benchmark that emits profiling snapshots.

Overseer agents (master1, master2, ...) periodically request worker agents
(agent001, agent002, ...) to perform small, medium or large tasks. A worker
that accepted too much work in its recent past refuses the request outright,
producing a message with no resulting activity. Overseers occasionally
delegate: the chosen worker then acts as an overseer for a brief period and
emits requests of its own.

Every run is a pure function of its config. All randomness comes from the
seeded generator, message latency is a fixed one microsecond, an accepted
request starts work one microsecond after receipt, and the capture date is a
constant, so equal configs produce byte-identical snapshot files.
"""

from __future__ import annotations

import datetime as dt
import heapq
import random
from dataclasses import dataclass, field
from typing import Mapping

from .trace import (
    ActivityRecord,
    AgentRecord,
    MessageRecord,
    SessionHeader,
    Snapshot,
    SnapshotValidationError,
    make_snapshot,
)

_CAPTURE_DATE = dt.datetime(2026, 1, 5, 12, 0, 0)
_SIZE_CYCLE = ("large", "large", "large", "small")
_DELEGATED_REQUESTS = 3  # requests a delegated worker emits, one per interval


def _default_task_sizes() -> dict[str, int]:
    return {"small": 1, "medium": 5, "large": 20}


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    overseers: int = 2
    workers: int = 3
    duration: int = 60_000_000  # microseconds
    task_sizes: Mapping[str, int] = field(default_factory=_default_task_sizes)
    work_unit_cost: int = 10_000  # microseconds of work per unit
    overload_threshold: int = 25  # accepted units tolerated per rolling window
    overload_window: int = 2_000_000
    delegation_probability: float = 0.1
    request_interval: int = 1_000_000
    phase_step: int | None = None  # offset between overseer schedules; None spreads evenly
    worker_choice: str = "random"  # "random" | "round_robin"
    size_choice: str = "random"  # "random" | "cycle"


def validate_config(config: SimConfig) -> None:
    if config.overseers < 1:
        raise ValueError("overseers must be >= 1")
    if config.workers < 1:
        raise ValueError("workers must be >= 1")
    if config.duration < 1:
        raise ValueError("duration must be positive")
    if config.work_unit_cost < 0:
        raise ValueError("work_unit_cost must be >= 0")
    if config.overload_threshold < 1:
        raise ValueError("overload_threshold must be >= 1")
    if config.overload_window < 1:
        raise ValueError("overload_window must be >= 1")
    if not 0.0 <= config.delegation_probability <= 1.0:
        raise ValueError("delegation_probability must be within [0, 1]")
    if config.request_interval < 1:
        raise ValueError("request_interval must be >= 1")
    if config.phase_step is not None and config.phase_step < 0:
        raise ValueError("phase_step must be >= 0")
    if config.worker_choice not in ("random", "round_robin"):
        raise ValueError(f"unknown worker_choice {config.worker_choice!r}")
    if config.size_choice not in ("random", "cycle"):
        raise ValueError(f"unknown size_choice {config.size_choice!r}")
    if set(config.task_sizes) != {"small", "medium", "large"}:
        raise ValueError("task_sizes must define small, medium and large")
    if any(units < 1 for units in config.task_sizes.values()):
        raise ValueError("task sizes must be >= 1 work unit")


@dataclass
class _Worker:
    name: str
    accepted: list[tuple[int, int]] = field(default_factory=list)  # (recv_ts, units)

    def accepts(self, recv_ts: int, units: int, config: SimConfig) -> bool:
        recent = sum(
            u for ts, u in self.accepted if recv_ts - config.overload_window < ts <= recv_ts
        )
        return recent + units <= config.overload_threshold

    def record(self, recv_ts: int, units: int) -> None:
        self.accepted.append((recv_ts, units))


def simulate(config: SimConfig) -> Snapshot:
    """Run the benchmark and return its validated snapshot."""
    validate_config(config)
    rng = random.Random(config.seed)

    masters = [f"master{i + 1}" for i in range(config.overseers)]
    workers = {name: _Worker(name) for name in (
        f"agent{i + 1:03d}" for i in range(config.workers)
    )}
    worker_names = list(workers)
    size_names = sorted(config.task_sizes)

    phase_step = (
        config.phase_step
        if config.phase_step is not None
        else config.request_interval // config.overseers
    )

    raw_messages: list[tuple[int, str, str, str, str]] = []  # sent, from, to, perf, content
    raw_activities: list[tuple[int, str, int, str]] = []  # start, agent, duration, desc

    def deliver_request(sent_ts: int, sender: str, target: str, units: int) -> None:
        recv_ts = sent_ts + 1
        raw_messages.append((sent_ts, sender, target, "request", f"pleaseDoThing({units})"))
        worker = workers[target]
        if worker.accepts(recv_ts, units, config):
            worker.record(recv_ts, units)
            raw_activities.append(
                (recv_ts + 1, target, units * config.work_unit_cost, f"doThing({units})")
            )

    # Heap of (time, lane, counter, action); lane keeps overseer ticks ahead of
    # delegated ticks at equal times, counter makes heap order total.
    heap: list[tuple[int, int, int, tuple]] = []
    counter = 0

    def push(time: int, lane: int, action: tuple) -> None:
        nonlocal counter
        heapq.heappush(heap, (time, lane, counter, action))
        counter += 1

    for idx, master in enumerate(masters):
        push(idx * phase_step, 0, ("tick", master, 0))

    while heap:
        t, _, _, action = heapq.heappop(heap)
        if t + 2 > config.duration:
            continue
        if action[0] == "tick":
            _, master, k = action
            if config.worker_choice == "round_robin":
                target = worker_names[k % len(worker_names)]
            else:
                target = rng.choice(worker_names)
            if config.size_choice == "cycle":
                size = _SIZE_CYCLE[k % len(_SIZE_CYCLE)]
            else:
                size = rng.choice(size_names)
            deliver_request(t, master, target, config.task_sizes[size])
            if config.delegation_probability and rng.random() < config.delegation_probability:
                delegate = rng.choice(worker_names)
                span = _DELEGATED_REQUESTS * config.request_interval
                raw_messages.append((t, master, delegate, "delegate", f"superviseFor({span})"))
                for j in range(1, _DELEGATED_REQUESTS + 1):
                    push(t + 1 + j * config.request_interval, 1, ("delegated", delegate))
            push(t + config.request_interval, 0, ("tick", master, k + 1))
        else:
            _, delegate = action
            others = [w for w in worker_names if w != delegate] or worker_names
            target = rng.choice(others)
            size = rng.choice(size_names)
            deliver_request(t, delegate, target, config.task_sizes[size])

    agents = [AgentRecord(seq, name) for seq, name in enumerate(masters + worker_names)]
    next_seq = len(agents)

    events: list[tuple[int, int, tuple]] = []
    for idx, msg in enumerate(raw_messages):
        events.append((msg[0], idx, ("message", msg)))
    for idx, act in enumerate(raw_activities):
        events.append((act[0], len(raw_messages) + idx, ("activity", act)))
    events.sort(key=lambda e: (e[0], e[1]))

    messages: list[MessageRecord] = []
    activities: list[ActivityRecord] = []
    msg_id = 0
    for _, _, (kind, payload) in events:
        if kind == "message":
            sent_ts, sender, receiver, performative, content = payload
            msg_id += 1
            messages.append(
                MessageRecord(
                    seq=next_seq,
                    msg_id=msg_id,
                    sender=sender,
                    receiver=receiver,
                    sent_ts=sent_ts,
                    recv_ts=sent_ts + 1,
                    performative=performative,
                    content=content,
                )
            )
        else:
            ts, agent, duration, description = payload
            activities.append(ActivityRecord(next_seq, agent, ts, duration, description))
        next_seq += 1

    header = SessionHeader(f"bench-{config.seed}", _CAPTURE_DATE, config.duration)
    try:
        return make_snapshot(header, agents, messages, activities)
    except SnapshotValidationError as exc:  # simulation bug, not user input
        raise RuntimeError(f"simulator produced an invalid snapshot: {exc}") from exc


def scenario_paper(seed: int) -> SimConfig:
    """Config reproducing the two-overseer imbalance pattern.

    Both overseers walk the same worker rotation and task-size cycle, but the
    second starts two microseconds behind the first. Each large request from
    master2 therefore lands on a worker that just accepted the same large
    request from master1 and gets refused, while master2's small requests
    still fit under the overload threshold and are honored.
    """
    return SimConfig(
        seed=seed,
        overseers=2,
        workers=3,
        duration=60_000_000,
        work_unit_cost=10_000,
        overload_threshold=25,
        overload_window=2_000_000,
        delegation_probability=0.0,
        request_interval=1_000_000,
        phase_step=2,
        worker_choice="round_robin",
        size_choice="cycle",
    )
