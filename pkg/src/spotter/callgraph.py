"""Fixed-depth call-graph tree over a session's message impacts.

The tree always has five levels: the session at the root, three pivotable
grouping levels (emitter agent, receiver agent, message content) and one leaf
per message. Every node carries its total impact, its share of the parent and
its share of the session, with the shares kept as exact rationals and rendered
once to one-decimal strings.

Node labels:
    session   "<capture date> - <duration>s"
    emitter   "from: <agent>"
    receiver  "to: <agent>"
    content   "<performative>: <content>"
    message   "sent: <micros> rec: <micros>"

Rendered percent-of-parent strings are apportioned per sibling group
(largest remainder), so each expanded group reads as exactly 100.0 together.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .fmt import apportion_tenths, format_seconds, pct_text, round_pct_tenths
from .impact import ImpactTable, impacts_by_id
from .trace import MessageRecord, Snapshot


class Level(str, Enum):
    SESSION = "session"
    EMITTER = "emitter"
    RECEIVER = "receiver"
    CONTENT = "content"
    MESSAGE = "message"


LevelOrder = tuple[Level, Level, Level]

DEFAULT_ORDER: LevelOrder = (Level.EMITTER, Level.RECEIVER, Level.CONTENT)
_PIVOT_LEVELS = frozenset(DEFAULT_ORDER)


def parse_order(text: str) -> LevelOrder:
    """Parse an order string like "receiver,emitter,content".

    Must name each of emitter, receiver and content exactly once.
    """
    parts = [p.strip().lower() for p in text.split(",")]
    try:
        levels = tuple(Level(p) for p in parts)
    except ValueError:
        raise ValueError(f"unknown level name in order {text!r}") from None
    if len(levels) != 3 or set(levels) != _PIVOT_LEVELS:
        raise ValueError(
            f"order {text!r} must be a permutation of emitter,receiver,content"
        )
    return levels  # type: ignore[return-value]


def order_text(order: LevelOrder) -> str:
    return ",".join(level.value for level in order)


@dataclass
class CallGraphNode:
    node_id: int
    level: Level
    label: str
    total_impact: int
    pct_parent: Fraction
    pct_session: Fraction
    pct_parent_text: str
    pct_session_text: str
    children: list["CallGraphNode"] = field(default_factory=list)
    msg_id: int | None = None  # set on message leaves only


@dataclass
class CallGraphTree:
    root: CallGraphNode
    order: LevelOrder
    snapshot: Snapshot | None = field(default=None, compare=False, repr=False)
    table: ImpactTable | None = field(default=None, compare=False, repr=False)
    _nodes: dict[int, CallGraphNode] = field(
        default_factory=dict, init=False, compare=False, repr=False
    )
    _parent: dict[int, int | None] = field(
        default_factory=dict, init=False, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        self._index(self.root, None)

    def _index(self, node: CallGraphNode, parent_id: int | None) -> None:
        self._nodes[node.node_id] = node
        self._parent[node.node_id] = parent_id
        for child in node.children:
            self._index(child, node.node_id)

    def node(self, node_id: int) -> CallGraphNode:
        if node_id not in self._nodes:
            raise ValueError(f"unknown node_id {node_id}")
        return self._nodes[node_id]

    def parent_id(self, node_id: int) -> int | None:
        self.node(node_id)
        return self._parent[node_id]

    def all_nodes(self) -> list[CallGraphNode]:
        """Nodes in depth-first order (node ids are assigned in this order)."""
        return [self._nodes[k] for k in sorted(self._nodes)]


def _group_label(level: Level, msg: MessageRecord) -> str:
    if level is Level.EMITTER:
        return f"from: {msg.sender}"
    if level is Level.RECEIVER:
        return f"to: {msg.receiver}"
    return f"{msg.performative}: {msg.content}"


def session_label(snapshot: Snapshot) -> str:
    header = snapshot.header
    return f"{header.capture_date.isoformat(sep=' ')} - {format_seconds(header.duration)}s"


def build_tree(
    snapshot: Snapshot, table: ImpactTable, order: LevelOrder = DEFAULT_ORDER
) -> CallGraphTree:
    """Build the call graph for one session under the given level order.

    Children are sorted hottest first (descending total impact, then label).
    The root total equals the session total impact by construction.
    """
    if len(order) != 3 or set(order) != _PIVOT_LEVELS:
        raise ValueError("order must be a permutation of emitter,receiver,content")

    impact_of = impacts_by_id(table)
    session_total = table.session.total_impact

    def build_group(level_idx: int, msgs: list[MessageRecord]) -> list[CallGraphNode]:
        if level_idx == 3:
            leaves = []
            for msg in msgs:
                mi = impact_of[msg.msg_id]
                leaves.append(
                    CallGraphNode(
                        node_id=-1,
                        level=Level.MESSAGE,
                        label=f"sent: {msg.sent_ts} rec: {msg.recv_ts}",
                        total_impact=mi.impact,
                        pct_parent=Fraction(0),
                        pct_session=Fraction(0),
                        pct_parent_text="",
                        pct_session_text="",
                        msg_id=msg.msg_id,
                    )
                )
            leaves.sort(key=lambda n: (-n.total_impact, n.label, n.msg_id))
            return leaves

        level = order[level_idx]
        groups: dict[str, list[MessageRecord]] = {}
        for msg in msgs:
            groups.setdefault(_group_label(level, msg), []).append(msg)
        nodes = []
        for label, group in groups.items():
            children = build_group(level_idx + 1, group)
            nodes.append(
                CallGraphNode(
                    node_id=-1,
                    level=level,
                    label=label,
                    total_impact=sum(c.total_impact for c in children),
                    pct_parent=Fraction(0),
                    pct_session=Fraction(0),
                    pct_parent_text="",
                    pct_session_text="",
                    children=children,
                )
            )
        nodes.sort(key=lambda n: (-n.total_impact, n.label))
        return nodes

    root = CallGraphNode(
        node_id=-1,
        level=Level.SESSION,
        label=session_label(snapshot),
        total_impact=session_total,
        pct_parent=Fraction(100),
        pct_session=Fraction(100) if session_total else Fraction(0),
        pct_parent_text="100.0",
        pct_session_text="100.0" if session_total else "0.0",
        children=build_group(0, list(snapshot.messages)),
    )

    counter = 0

    def assign_ids(node: CallGraphNode) -> None:
        nonlocal counter
        node.node_id = counter
        counter += 1
        for child in node.children:
            assign_ids(child)

    def fill_percentages(node: CallGraphNode) -> None:
        if not node.children:
            return
        if node.total_impact:
            for child in node.children:
                child.pct_parent = Fraction(100 * child.total_impact, node.total_impact)
            tenths = apportion_tenths([c.pct_parent for c in node.children])
            for child, t in zip(node.children, tenths):
                child.pct_parent_text = pct_text(t)
        else:
            for child in node.children:
                child.pct_parent = Fraction(0)
                child.pct_parent_text = "0.0"
        for child in node.children:
            if session_total:
                child.pct_session = Fraction(100 * child.total_impact, session_total)
                child.pct_session_text = pct_text(round_pct_tenths(child.pct_session))
            else:
                child.pct_session = Fraction(0)
                child.pct_session_text = "0.0"
            fill_percentages(child)

    assign_ids(root)
    fill_percentages(root)
    return CallGraphTree(root=root, order=order, snapshot=snapshot, table=table)


def pivot(tree: CallGraphTree, order: LevelOrder) -> CallGraphTree:
    """Rebuild the tree under a new level order from its retained session data.

    The root total and the leaf (msg_id, impact) multiset are unchanged.
    """
    if tree.snapshot is None or tree.table is None:
        raise ValueError("tree has no retained session data; it cannot be pivoted")
    return build_tree(tree.snapshot, tree.table, order)


def search(tree: CallGraphTree, keyword: str) -> tuple[int, list[int]]:
    """Case-insensitive substring search over node labels.

    Returns the match count and matching node ids in depth-first order,
    independent of any selection or visibility state.
    """
    if not keyword:
        raise ValueError("search keyword must be non-empty")
    needle = keyword.lower()
    hits: list[int] = []

    def walk(node: CallGraphNode) -> None:
        if needle in node.label.lower():
            hits.append(node.node_id)
        for child in node.children:
            walk(child)

    walk(tree.root)
    return len(hits), hits


def visible_set(tree: CallGraphTree, selected: int) -> set[int]:
    """Node ids visible when ``selected`` is the current selection.

    Visible are the path from the root to the selection, the children of every
    node on that path, and the selection's grandchildren. Selecting the root
    therefore shows exactly the first two levels; selecting a second-level
    group shows its branch all the way down to the message leaves.
    """
    node = tree.node(selected)
    path = [selected]
    while (parent := tree.parent_id(path[-1])) is not None:
        path.append(parent)

    visible = set(path)
    for node_id in path:
        visible.update(c.node_id for c in tree.node(node_id).children)
    for child in node.children:
        visible.update(g.node_id for g in child.children)
    return visible


_EXPORT_FORMATS = ("structured-text", "tabular-text")


def export_tree(tree: CallGraphTree, format: str = "structured-text") -> bytes:
    """Serialize every node field losslessly; output is deterministic.

    "structured-text" is a nested JSON document; "tabular-text" is CSV with
    one row per node in depth-first order, parent linked by id.
    """
    if format == "structured-text":
        def as_dict(node: CallGraphNode) -> dict:
            return {
                "node_id": node.node_id,
                "level": node.level.value,
                "label": node.label,
                "total_micros": node.total_impact,
                "pct_parent": [node.pct_parent.numerator, node.pct_parent.denominator],
                "pct_parent_text": node.pct_parent_text,
                "pct_session": [node.pct_session.numerator, node.pct_session.denominator],
                "pct_session_text": node.pct_session_text,
                "msg_id": node.msg_id,
                "children": [as_dict(c) for c in node.children],
            }

        doc = {"order": [level.value for level in tree.order], "root": as_dict(tree.root)}
        return (json.dumps(doc, indent=1) + "\n").encode("utf-8")

    if format == "tabular-text":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["node_id", "parent_id", "level", "label", "total_micros",
             "pct_parent_num", "pct_parent_den", "pct_parent_text",
             "pct_session_num", "pct_session_den", "pct_session_text", "msg_id"]
        )
        writer.writerow(["order", order_text(tree.order), "", "", "", "", "", "", "", "", "", ""])

        def write_rows(node: CallGraphNode, parent_id: int | None) -> None:
            writer.writerow(
                [node.node_id, "" if parent_id is None else parent_id, node.level.value,
                 node.label, node.total_impact,
                 node.pct_parent.numerator, node.pct_parent.denominator, node.pct_parent_text,
                 node.pct_session.numerator, node.pct_session.denominator, node.pct_session_text,
                 "" if node.msg_id is None else node.msg_id]
            )
            for child in node.children:
                write_rows(child, node.node_id)

        write_rows(tree.root, None)
        return buf.getvalue().encode("utf-8")

    raise ValueError(f"unknown export format {format!r}; expected one of {_EXPORT_FORMATS}")


def import_tree(data: bytes, format: str = "structured-text") -> CallGraphTree:
    """Rebuild a tree from :func:`export_tree` output.

    The imported tree has no retained session data, so it can be inspected,
    searched and exported again, but not pivoted.
    """
    text = data.decode("utf-8")
    if format == "structured-text":
        doc = json.loads(text)

        def from_dict(obj: dict) -> CallGraphNode:
            return CallGraphNode(
                node_id=obj["node_id"],
                level=Level(obj["level"]),
                label=obj["label"],
                total_impact=obj["total_micros"],
                pct_parent=Fraction(*obj["pct_parent"]),
                pct_session=Fraction(*obj["pct_session"]),
                pct_parent_text=obj["pct_parent_text"],
                pct_session_text=obj["pct_session_text"],
                msg_id=obj["msg_id"],
                children=[from_dict(c) for c in obj["children"]],
            )

        order = parse_order(",".join(doc["order"]))
        return CallGraphTree(root=from_dict(doc["root"]), order=order)

    if format == "tabular-text":
        rows = list(csv.reader(io.StringIO(text)))
        if len(rows) < 3 or rows[1][0] != "order":
            raise ValueError("malformed tabular tree export")
        order = parse_order(rows[1][1])
        nodes: dict[int, CallGraphNode] = {}
        root: CallGraphNode | None = None
        for row in rows[2:]:
            node = CallGraphNode(
                node_id=int(row[0]),
                level=Level(row[2]),
                label=row[3],
                total_impact=int(row[4]),
                pct_parent=Fraction(int(row[5]), int(row[6])),
                pct_session=Fraction(int(row[8]), int(row[9])),
                pct_parent_text=row[7],
                pct_session_text=row[10],
                msg_id=int(row[11]) if row[11] else None,
            )
            nodes[node.node_id] = node
            if row[1] == "":
                root = node
            else:
                nodes[int(row[1])].children.append(node)
        if root is None:
            raise ValueError("tabular tree export has no root row")
        return CallGraphTree(root=root, order=order)

    raise ValueError(f"unknown export format {format!r}; expected one of {_EXPORT_FORMATS}")
