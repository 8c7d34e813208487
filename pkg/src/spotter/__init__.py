"""Offline profiler for message-driven multi-agent systems.

Loads recorded session snapshots, attributes each agent's computation time to
the messages that triggered it, and presents the result as a flat profile and
a fixed-depth, pivotable call-graph tree through a CLI, an HTTP API and a
browser UI.
"""

from .callgraph import (
    CallGraphNode,
    CallGraphTree,
    DEFAULT_ORDER,
    Level,
    build_tree,
    export_tree,
    import_tree,
    parse_order,
    pivot,
    search,
    visible_set,
)
from .flat import FlatProfileRow, flat_profile
from .impact import (
    AgentImpact,
    ImpactTable,
    MessageImpact,
    PairImpact,
    SessionImpact,
    agent_impact,
    compute_impact_table,
    message_impact,
    pair_impact,
    segment_windows,
    session_impact,
)
from .sim import SimConfig, scenario_paper, simulate
from .trace import (
    ActivityRecord,
    AgentRecord,
    MessageRecord,
    SessionHeader,
    Snapshot,
    SnapshotParseError,
    SnapshotValidationError,
    make_snapshot,
    normalize,
    parse_snapshot,
    read_snapshot,
    serialize_snapshot,
    validate,
    write_snapshot,
)

__version__ = "0.1.0"

__all__ = [
    "ActivityRecord",
    "AgentImpact",
    "AgentRecord",
    "CallGraphNode",
    "CallGraphTree",
    "DEFAULT_ORDER",
    "FlatProfileRow",
    "ImpactTable",
    "Level",
    "MessageImpact",
    "MessageRecord",
    "PairImpact",
    "SessionHeader",
    "SessionImpact",
    "SimConfig",
    "Snapshot",
    "SnapshotParseError",
    "SnapshotValidationError",
    "agent_impact",
    "build_tree",
    "compute_impact_table",
    "export_tree",
    "flat_profile",
    "import_tree",
    "make_snapshot",
    "message_impact",
    "normalize",
    "pair_impact",
    "parse_order",
    "parse_snapshot",
    "pivot",
    "read_snapshot",
    "scenario_paper",
    "search",
    "segment_windows",
    "serialize_snapshot",
    "session_impact",
    "simulate",
    "validate",
    "visible_set",
    "write_snapshot",
]
