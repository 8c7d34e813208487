import random
from fractions import Fraction

from spotter.callgraph import build_tree
from spotter.flat import flat_profile, render_flat_table
from spotter.impact import compute_impact_table
from spotter.sim import scenario_paper, simulate

from gen import mk, random_snapshot


def rows_of(snap):
    return flat_profile(snap, compute_impact_table(snap))


def test_empty_snapshot_has_no_rows():
    snap = mk(duration=0, agents=())
    assert rows_of(snap) == []
    assert render_flat_table([]).splitlines() == [
        "agent  sent  recv  acts  activity_s  impact_s  %activity"
    ]


def test_activity_sums_per_agent():
    snap = mk(acts=((10, "beta", 1, 1), (11, "beta", 5, 2), (12, "beta", 9, 3)))
    beta = next(r for r in rows_of(snap) if r.agent == "beta")
    assert beta.total_activity == 6 and beta.activity_count == 3


def test_rows_sorted_by_activity_then_name():
    rng = random.Random(21)
    for _ in range(10):
        rows = rows_of(random_snapshot(rng, max_events=80))
        keys = [(-r.total_activity, r.agent) for r in rows]
        assert keys == sorted(keys)


def test_totals_and_cross_view_consistency():
    snap = simulate(scenario_paper(8))
    table = compute_impact_table(snap)
    rows = flat_profile(snap, table)
    assert sum(r.impact_caused for r in rows) == table.session.total_impact
    assert sum(r.total_activity for r in rows) == table.session.total_activity
    assert sum((r.pct_session_activity for r in rows), Fraction(0)) == 100
    # The emitter column agrees with the default-order call graph totals.
    tree = build_tree(snap, table)
    emitters = {c.label.removeprefix("from: "): c.total_impact for c in tree.root.children}
    for row in rows:
        assert row.impact_caused == emitters.get(row.agent, 0)


def test_message_counts():
    snap = mk(
        duration=40,
        msgs=((10, 1, "alpha", "beta", 0, 1), (11, 2, "alpha", "beta", 2, 3), (12, 3, "beta", "alpha", 4, 5)),
    )
    by_agent = {r.agent: r for r in rows_of(snap)}
    assert (by_agent["alpha"].msgs_sent, by_agent["alpha"].msgs_received) == (2, 1)
    assert (by_agent["beta"].msgs_sent, by_agent["beta"].msgs_received) == (1, 2)


def test_render_includes_total_line():
    snap = simulate(scenario_paper(8))
    text = render_flat_table(rows_of(snap))
    lines = text.splitlines()
    assert lines[0].startswith("agent")
    assert lines[-1].startswith("TOTAL")
    assert len(lines) == 2 + len(snap.agents)
