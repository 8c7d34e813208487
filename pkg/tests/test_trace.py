import random

import pytest
from hypothesis import given, settings, strategies as st

from spotter.trace import (
    ActivityRecord,
    AgentRecord,
    MessageRecord,
    SessionHeader,
    Snapshot,
    SnapshotParseError,
    SnapshotValidationError,
    normalize,
    parse_snapshot,
    read_snapshot,
    serialize_snapshot,
    validate,
    write_snapshot,
)
from spotter.sim import SimConfig, simulate

from gen import FIXED_DATE, mk, random_snapshot

HEADER = "session s1 2026-01-05T10:00:00 100\n"


def test_parse_header_only():
    snap = parse_snapshot("session s1 2026-01-05T10:00:00 0\n")
    assert snap.header.session_id == "s1"
    assert snap.header.capture_date == FIXED_DATE
    assert snap.header.duration == 0
    assert snap.agents == () and snap.messages == () and snap.activities == ()


def test_out_of_order_events_are_resorted():
    text = HEADER + "\n".join(
        [
            "agent 0 alpha",
            "agent 1 beta",
            "activity 5 beta 90 4",
            "message 3 1 alpha beta 50 60 request hi",
            "message 2 2 alpha beta 10 20 request lo",
            "activity 4 alpha 5 1",
        ]
    ) + "\n"
    snap = parse_snapshot(text)
    # Oracle: plain stable sort of the records by their canonical keys.
    assert list(snap.messages) == sorted(snap.messages, key=lambda m: (m.sent_ts, m.seq))
    assert [m.msg_id for m in snap.messages] == [2, 1]
    assert list(snap.activities) == sorted(snap.activities, key=lambda a: (a.ts, a.seq))
    assert [a.seq for a in snap.activities] == [4, 5]


def test_unregistered_agent_is_named_in_error():
    text = HEADER + "agent 0 alpha\nmessage 1 1 alpha ghost 10 20 request hi\n"
    with pytest.raises(SnapshotValidationError) as err:
        parse_snapshot(text)
    assert any("ghost" in v for v in err.value.violations)


@pytest.mark.parametrize(
    "line,fragment",
    [
        ("agent 0", "agent"),
        ("message 1 1 a b 10 20", "message"),
        ("activity 1 a 10", "activity"),
        ("widget 1 2 3", "unknown record kind"),
        ("agent 07 alpha", "canonical"),
        ("message 1 x a b 10 20 request hi", "integer"),
    ],
)
def test_malformed_lines_report_line_number(line, fragment):
    with pytest.raises(SnapshotParseError) as err:
        parse_snapshot(HEADER + line + "\n")
    assert err.value.line_no == 2
    assert fragment in str(err.value)


def test_missing_header_is_a_parse_error():
    with pytest.raises(SnapshotParseError):
        parse_snapshot("")
    with pytest.raises(SnapshotParseError):
        parse_snapshot("agent 0 alpha\n")


def test_round_trip_empty(tmp_path):
    snap = mk(duration=0, agents=("alpha",))
    path = tmp_path / "empty.snap"
    write_snapshot(snap, path)
    assert read_snapshot(path) == snap


def test_round_trip_simulator_output(tmp_path):
    snap = simulate(SimConfig(seed=7, duration=20_000_000, delegation_probability=0.5))
    assert len(snap.messages) + len(snap.activities) >= 100
    path = tmp_path / "sim.snap"
    write_snapshot(snap, path)
    back = read_snapshot(path)
    assert back == snap  # field-for-field structural equality
    # Re-serialization is byte identity.
    assert serialize_snapshot(back) == path.read_text(encoding="utf-8")


def test_write_rejects_invalid_snapshot(tmp_path):
    bad = Snapshot(
        header=SessionHeader("s1", FIXED_DATE, 100),
        agents=(AgentRecord(0, "alpha"),),
        messages=(MessageRecord(1, 1, "alpha", "alpha", 50, 20, "request", "hi"),),
        activities=(),
    )
    path = tmp_path / "bad.snap"
    with pytest.raises(SnapshotValidationError):
        write_snapshot(bad, path)
    assert not path.exists()


def test_content_with_spaces_and_empty_round_trips():
    snap = mk(
        msgs=(
            (10, 1, "alpha", "beta", 0, 1, "request", "do all the things now"),
            (11, 2, "alpha", "beta", 2, 3, "inform", ""),
            (12, 3, "alpha", "beta", 4, 5, "inform", " leading and trailing "),
        ),
        acts=((13, "beta", 6, 2, "a spaced description"), (14, "beta", 7, 0)),
    )
    back = parse_snapshot(serialize_snapshot(snap))
    assert back == snap


def test_validate_ok_is_empty():
    assert validate(mk(msgs=((10, 1, "alpha", "beta", 0, 5),), acts=((11, "beta", 6, 4),))) == []


def test_validate_recv_before_sent_names_msg_id():
    snap = Snapshot(
        header=SessionHeader("s1", FIXED_DATE, 100),
        agents=(AgentRecord(0, "alpha"),),
        messages=(MessageRecord(1, 77, "alpha", "alpha", 50, 20, "request", "hi"),),
        activities=(),
    )
    violations = validate(snap)
    assert len(violations) == 1
    assert "msg_id 77" in violations[0] and "recv_ts" in violations[0]


def test_validate_duplicate_msg_ids_one_violation_each():
    msgs = tuple(
        MessageRecord(seq, seq, "alpha", "alpha", 0, 1, "request", "hi") for seq in (1, 2, 3, 4)
    )
    dup = tuple(
        MessageRecord(m.seq, 9, m.sender, m.receiver, m.sent_ts, m.recv_ts, m.performative, m.content)
        for m in msgs
    )
    snap = Snapshot(
        header=SessionHeader("s1", FIXED_DATE, 100),
        agents=(AgentRecord(0, "alpha"),),
        messages=dup,
        activities=(),
    )
    # Oracle: a brute-force duplicate scan expects (n - distinct) violations.
    expected = len(dup) - len({m.msg_id for m in dup})
    assert sum("duplicate msg_id" in v for v in validate(snap)) == expected


def test_validate_duration_shorter_than_events():
    snap = Snapshot(
        header=SessionHeader("s1", FIXED_DATE, 10),
        agents=(AgentRecord(0, "alpha"),),
        messages=(),
        activities=(ActivityRecord(1, "alpha", 50, 5),),
    )
    assert any("duration 10 earlier than last event timestamp 50" in v for v in validate(snap))


def test_validate_out_of_canonical_order():
    snap = Snapshot(
        header=SessionHeader("s1", FIXED_DATE, 100),
        agents=(AgentRecord(0, "alpha"),),
        messages=(),
        activities=(ActivityRecord(2, "alpha", 50, 5), ActivityRecord(1, "alpha", 10, 5)),
    )
    assert any("canonical" in v for v in validate(snap))
    assert validate(normalize(snap)) == []


def test_normalize_is_idempotent_on_random_snapshots():
    rng = random.Random(1234)
    for _ in range(25):
        snap = random_snapshot(rng, max_events=60)
        assert normalize(snap) == snap  # generator output is already normalized
        shuffled = Snapshot(
            snap.header,
            snap.agents,
            tuple(reversed(snap.messages)),
            tuple(reversed(snap.activities)),
        )
        once = normalize(shuffled)
        assert normalize(once) == once == snap


@st.composite
def snapshots(strategy_draw):
    seed = strategy_draw(st.integers(0, 2**32 - 1))
    size = strategy_draw(st.integers(0, 40))
    return random_snapshot(random.Random(seed), max_events=max(1, size))


@settings(max_examples=60, deadline=None)
@given(snapshots())
def test_serialize_parse_round_trip(snap):
    assert parse_snapshot(serialize_snapshot(snap)) == snap


@settings(max_examples=60, deadline=None)
@given(snapshots())
def test_generated_snapshots_are_valid(snap):
    assert validate(snap) == []
