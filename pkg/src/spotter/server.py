"""Read-only HTTP API over one loaded snapshot, plus static hosting for the UI.

Endpoints (all JSON, all times integer microseconds):

    GET /api/session                     session header, agents, counts, totals
    GET /api/tree?order=e,r,c            flattened call-graph payload
    GET /api/search?q=<kw>&order=...     match count and node ids
    GET /api/node/<id>?order=...         full node record, message detail on leaves
    GET /                                static UI assets

Percentages are served both as exact numerator/denominator pairs and as the
pre-rendered one-decimal strings, so clients never redo the math. The snapshot
and its derived trees are immutable after startup; request handling is
stateless and safe under concurrent readers.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .callgraph import (
    CallGraphNode,
    CallGraphTree,
    DEFAULT_ORDER,
    LevelOrder,
    build_tree,
    order_text,
    parse_order,
    search,
)
from .fmt import format_seconds
from .impact import compute_impact_table
from .trace import Snapshot

_STATIC_DIR = Path(__file__).parent / "static"


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


class ServerState:
    """Immutable snapshot plus lazily built trees, one per level order."""

    def __init__(self, snapshot: Snapshot):
        self.snapshot = snapshot
        self.table = compute_impact_table(snapshot)
        self.messages_by_id = {m.msg_id: m for m in snapshot.messages}
        self._trees: dict[LevelOrder, CallGraphTree] = {}
        self._lock = threading.Lock()

    def tree(self, order: LevelOrder) -> CallGraphTree:
        with self._lock:
            if order not in self._trees:
                self._trees[order] = build_tree(self.snapshot, self.table, order)
            return self._trees[order]


def _pct(fraction: Fraction, text: str) -> dict:
    return {"num": fraction.numerator, "den": fraction.denominator, "text": text}


def _order_from_query(query: dict[str, list[str]]) -> LevelOrder:
    raw = query.get("order", [order_text(DEFAULT_ORDER)])[0]
    try:
        return parse_order(raw)
    except ValueError as exc:
        raise ApiError(400, str(exc)) from None


def session_payload(state: ServerState) -> dict:
    header = state.snapshot.header
    session = state.table.session
    return {
        "session_id": header.session_id,
        "capture_date": header.capture_date.isoformat(sep=" "),
        "duration_micros": header.duration,
        "duration_text": format_seconds(header.duration),
        "agents": sorted(state.snapshot.agent_names()),
        "agent_count": len(state.snapshot.agents),
        "message_count": len(state.snapshot.messages),
        "activity_count": len(state.snapshot.activities),
        "total_impact_micros": session.total_impact,
        "total_impact_text": format_seconds(session.total_impact),
        "total_activity_micros": session.total_activity,
        "total_activity_text": format_seconds(session.total_activity),
        "pre_message_activity_micros": session.pre_message_activity,
    }


def _node_entry(tree: CallGraphTree, node: CallGraphNode) -> dict:
    return {
        "node_id": node.node_id,
        "parent_id": tree.parent_id(node.node_id),
        "level": node.level.value,
        "label": node.label,
        "total_micros": node.total_impact,
        "total_text": format_seconds(node.total_impact),
        "pct_parent": _pct(node.pct_parent, node.pct_parent_text),
        "pct_session": _pct(node.pct_session, node.pct_session_text),
        "child_count": len(node.children),
        "msg_id": node.msg_id,
    }


def tree_payload(tree: CallGraphTree) -> dict:
    """Flattened depth-first node list; parent ids make it lossless."""
    return {
        "order": [level.value for level in tree.order],
        "session_total_micros": tree.root.total_impact,
        "nodes": [_node_entry(tree, node) for node in tree.all_nodes()],
    }


def search_payload(tree: CallGraphTree, query: dict[str, list[str]]) -> dict:
    keyword = query.get("q", [""])[0]
    if not keyword:
        raise ApiError(400, "missing or empty search keyword 'q'")
    count, node_ids = search(tree, keyword)
    return {"query": keyword, "count": count, "node_ids": node_ids}


def node_payload(state: ServerState, tree: CallGraphTree, node_id: int) -> dict:
    try:
        node = tree.node(node_id)
    except ValueError as exc:
        raise ApiError(404, str(exc)) from None
    payload = _node_entry(tree, node)
    payload["children"] = [c.node_id for c in node.children]
    if node.msg_id is not None:
        msg = state.messages_by_id[node.msg_id]
        payload["message"] = {
            "msg_id": msg.msg_id,
            "sender": msg.sender,
            "receiver": msg.receiver,
            "performative": msg.performative,
            "content": msg.content,
            "sent_micros": msg.sent_ts,
            "recv_micros": msg.recv_ts,
        }
    return payload


def handle_api(state: ServerState, path: str, query: dict[str, list[str]]) -> tuple[int, dict]:
    """Route one API request; returns (status, JSON-serializable body)."""
    try:
        if path == "/api/session":
            return 200, session_payload(state)
        if path == "/api/tree":
            return 200, tree_payload(state.tree(_order_from_query(query)))
        if path == "/api/search":
            return 200, search_payload(state.tree(_order_from_query(query)), query)
        if path.startswith("/api/node/"):
            raw = path[len("/api/node/"):]
            try:
                node_id = int(raw)
            except ValueError:
                raise ApiError(400, f"node id {raw!r} is not an integer") from None
            return 200, node_payload(state, state.tree(_order_from_query(query)), node_id)
        raise ApiError(404, f"unknown endpoint {path}")
    except ApiError as exc:
        return exc.status, {"error": str(exc)}


class _Handler(BaseHTTPRequestHandler):
    state: ServerState
    ui_dir: Path

    def log_message(self, *args) -> None:  # keep request logs off stderr
        pass

    def _send_json(self, status: int, body: dict) -> None:
        data = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _send_static(self, rel_path: str) -> None:
        target = (self.ui_dir / rel_path).resolve()
        if not str(target).startswith(str(self.ui_dir.resolve())) or not target.is_file():
            self._send_json(404, {"error": f"no such asset {rel_path!r}"})
            return
        data = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        parsed = urlparse(self.path)
        if parsed.path.startswith("/api/"):
            status, body = handle_api(self.state, parsed.path, parse_qs(parsed.query))
            self._send_json(status, body)
        elif parsed.path == "/":
            self._send_static("index.html")
        else:
            self._send_static(parsed.path.lstrip("/"))


def make_server(
    snapshot: Snapshot, host: str = "127.0.0.1", port: int = 8130, ui_dir: str | None = None
) -> ThreadingHTTPServer:
    """Build a threading HTTP server for one snapshot; caller runs serve_forever."""
    state = ServerState(snapshot)

    class BoundHandler(_Handler):
        pass

    BoundHandler.state = state
    BoundHandler.ui_dir = Path(ui_dir) if ui_dir else _STATIC_DIR
    return ThreadingHTTPServer((host, port), BoundHandler)
