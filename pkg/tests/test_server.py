import json
import threading
import urllib.request

import pytest

from spotter.callgraph import DEFAULT_ORDER, build_tree, parse_order, search
from spotter.impact import compute_impact_table
from spotter.server import ServerState, handle_api, make_server
from spotter.sim import scenario_paper, simulate

from gen import mk


@pytest.fixture(scope="module")
def scenario_state():
    return ServerState(simulate(scenario_paper(21)))


def get(state, path, **params):
    query = {k: [v] for k, v in params.items()}
    return handle_api(state, path, query)


def test_session_payload_matches_engine(scenario_state):
    status, body = get(scenario_state, "/api/session")
    assert status == 200
    session = scenario_state.table.session
    assert body["total_impact_micros"] == session.total_impact
    assert body["total_activity_micros"] == session.total_activity
    assert body["pre_message_activity_micros"] == session.pre_message_activity
    assert body["agents"] == sorted(scenario_state.snapshot.agent_names())
    assert body["message_count"] == len(scenario_state.snapshot.messages)
    assert body["duration_micros"] == scenario_state.snapshot.header.duration


def test_session_payload_empty_snapshot():
    state = ServerState(mk(duration=0, agents=()))
    status, body = get(state, "/api/session")
    assert status == 200
    assert body["agent_count"] == 0
    assert body["message_count"] == 0
    assert body["activity_count"] == 0
    assert body["total_impact_micros"] == 0


def test_tree_payload_is_lossless(scenario_state):
    status, body = get(scenario_state, "/api/tree", order="emitter,receiver,content")
    assert status == 200
    tree = scenario_state.tree(DEFAULT_ORDER)
    nodes = body["nodes"]
    assert len(nodes) == len(tree.all_nodes())
    assert nodes[0]["parent_id"] is None and nodes[0]["pct_session"]["text"] == "100.0"
    # Rebuild children lists from parent ids, preserving payload order.
    children: dict[int, list[int]] = {}
    for entry in nodes[1:]:
        children.setdefault(entry["parent_id"], []).append(entry["node_id"])
    for node in tree.all_nodes():
        assert children.get(node.node_id, []) == [c.node_id for c in node.children]
        entry = nodes[node.node_id]
        assert entry["node_id"] == node.node_id
        assert entry["label"] == node.label
        assert entry["total_micros"] == node.total_impact
        assert entry["pct_parent"]["num"] == node.pct_parent.numerator
        assert entry["pct_parent"]["den"] == node.pct_parent.denominator
        assert entry["pct_parent"]["text"] == node.pct_parent_text
        assert entry["child_count"] == len(node.children)


def test_tree_pivot_keeps_root_total(scenario_state):
    _, default = get(scenario_state, "/api/tree")
    _, pivoted = get(scenario_state, "/api/tree", order="receiver,content,emitter")
    assert default["session_total_micros"] == pivoted["session_total_micros"]
    assert pivoted["order"] == ["receiver", "content", "emitter"]


def test_tree_bad_order_is_400(scenario_state):
    status, body = get(scenario_state, "/api/tree", order="upside,down,sideways")
    assert status == 400 and "error" in body


def test_search_matches_callgraph(scenario_state):
    status, body = get(scenario_state, "/api/search", q="agent002", order="emitter,receiver,content")
    assert status == 200
    count, ids = search(scenario_state.tree(DEFAULT_ORDER), "agent002")
    assert body["count"] == count and body["node_ids"] == ids
    _, tree_body = get(scenario_state, "/api/tree")
    known = {n["node_id"] for n in tree_body["nodes"]}
    assert set(ids) <= known


def test_search_no_match(scenario_state):
    status, body = get(scenario_state, "/api/search", q="unobtainium")
    assert status == 200 and body == {"query": "unobtainium", "count": 0, "node_ids": []}


def test_search_empty_keyword_is_400(scenario_state):
    status, body = get(scenario_state, "/api/search")
    assert status == 400 and "keyword" in body["error"]


def test_node_detail_root(scenario_state):
    status, body = get(scenario_state, "/api/node/0")
    assert status == 200
    assert body["level"] == "session"
    assert body["label"] == scenario_state.tree(DEFAULT_ORDER).root.label
    assert "message" not in body


def test_node_detail_leaf_includes_message(scenario_state):
    tree = scenario_state.tree(DEFAULT_ORDER)
    node = tree.root
    while node.children:
        node = node.children[0]
    status, body = get(scenario_state, f"/api/node/{node.node_id}")
    assert status == 200
    msg = scenario_state.messages_by_id[node.msg_id]
    assert body["message"] == {
        "msg_id": msg.msg_id,
        "sender": msg.sender,
        "receiver": msg.receiver,
        "performative": msg.performative,
        "content": msg.content,
        "sent_micros": msg.sent_ts,
        "recv_micros": msg.recv_ts,
    }


def test_node_detail_unknown_is_404(scenario_state):
    status, body = get(scenario_state, "/api/node/99999")
    assert status == 404
    status, body = get(scenario_state, "/api/node/xyz")
    assert status == 400


def test_unknown_endpoint_is_404(scenario_state):
    status, _ = get(scenario_state, "/api/bogus")
    assert status == 404


def test_live_server_round_trip():
    snapshot = simulate(scenario_paper(23))
    httpd = make_server(snapshot, "127.0.0.1", 0)
    port = httpd.server_address[1]
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    try:
        def fetch(path):
            with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as resp:
                return resp.status, resp.read()

        status, body = fetch("/api/session")
        assert status == 200
        payload = json.loads(body)
        table = compute_impact_table(snapshot)
        assert payload["total_impact_micros"] == table.session.total_impact

        status, body = fetch("/api/tree?order=content,emitter,receiver")
        assert status == 200
        doc = json.loads(body)
        tree = build_tree(snapshot, table, parse_order("content,emitter,receiver"))
        assert doc["nodes"][0]["total_micros"] == tree.root.total_impact

        status, body = fetch("/")
        assert status == 200 and b"<html" in body.lower()

        with pytest.raises(urllib.error.HTTPError) as err:
            fetch("/api/search?q=")
        assert err.value.code == 400

        with pytest.raises(urllib.error.HTTPError) as err:
            fetch("/../etc/passwd")
        assert err.value.code == 404
    finally:
        httpd.shutdown()
        httpd.server_close()
        thread.join(timeout=5)
