"""Command-line front end: simulate, analyze, flat, search, serve.

Data goes to stdout, diagnostics to stderr, exit code 0 only on success.
The snapshot path may be given positionally or through the SPOTTER_SNAPSHOT
environment variable.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import callgraph, server, sim
from .fmt import format_seconds
from .flat import flat_profile, render_flat_table
from .impact import compute_impact_table
from .trace import Snapshot, SnapshotParseError, SnapshotValidationError, read_snapshot, write_snapshot

SNAPSHOT_ENV = "SPOTTER_SNAPSHOT"


class CliError(Exception):
    """Command failure carrying its exit code; main prints it to stderr."""

    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _add_snapshot_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "snapshot",
        nargs="?",
        default=None,
        help=f"snapshot file (default: ${SNAPSHOT_ENV})",
    )


def _resolve_snapshot_path(args: argparse.Namespace) -> str:
    path = args.snapshot or os.environ.get(SNAPSHOT_ENV)
    if not path:
        raise CliError(f"no snapshot given and {SNAPSHOT_ENV} is not set", code=2)
    return path


def _load(path: str) -> Snapshot:
    try:
        return read_snapshot(path)
    except FileNotFoundError:
        raise CliError(f"cannot read {path}: no such file") from None
    except SnapshotParseError as exc:
        raise CliError(f"{path}: {exc}") from None
    except SnapshotValidationError as exc:
        detail = "\n".join(f"  {v}" for v in exc.violations)
        raise CliError(f"{path} is not a valid snapshot:\n{detail}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spotter",
        description="Offline profiler for message-driven multi-agent systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the overseer/worker benchmark and write a snapshot")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", required=True, help="snapshot file to write")
    p_sim.add_argument(
        "--scenario",
        choices=("default", "paper"),
        default="default",
        help="'paper' phase-shifts two overseers so the second one's large requests get refused",
    )
    p_sim.add_argument("--overseers", type=int)
    p_sim.add_argument("--workers", type=int)
    p_sim.add_argument("--duration", type=int, help="session length in microseconds")
    p_sim.add_argument("--request-interval", type=int, help="microseconds between requests")
    p_sim.add_argument("--work-unit-cost", type=int, help="microseconds of work per unit")
    p_sim.add_argument("--overload-threshold", type=int, help="accepted units per rolling window")
    p_sim.add_argument("--overload-window", type=int, help="rolling window in microseconds")
    p_sim.add_argument("--delegation-probability", type=float)
    p_sim.add_argument("--phase-step", type=int, help="offset between overseer schedules")
    p_sim.add_argument("--worker-choice", choices=("random", "round_robin"))
    p_sim.add_argument("--size-choice", choices=("random", "cycle"))

    p_an = sub.add_parser("analyze", help="print the call-graph tree for a snapshot")
    _add_snapshot_arg(p_an)
    p_an.add_argument("--order", default="emitter,receiver,content", help="level order, e.g. receiver,emitter,content")
    p_an.add_argument("--format", choices=("text", "structured"), default="text")
    p_an.add_argument("--depth", type=int, choices=range(0, 5), default=4, help="deepest level to print (text format)")

    p_flat = sub.add_parser("flat", help="print the per-agent summary table")
    _add_snapshot_arg(p_flat)

    p_search = sub.add_parser("search", help="find call-graph nodes by keyword")
    _add_snapshot_arg(p_search)
    p_search.add_argument("keyword", help="case-insensitive label substring")
    p_search.add_argument("--order", default="emitter,receiver,content")

    p_serve = sub.add_parser("serve", help="serve the HTTP API and explorer UI for a snapshot")
    _add_snapshot_arg(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8130)
    p_serve.add_argument("--ui-dir", default=None, help="directory with built UI assets")

    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    base = sim.scenario_paper(args.seed) if args.scenario == "paper" else sim.SimConfig(seed=args.seed)
    overrides = {
        name: getattr(args, name)
        for name in (
            "overseers", "workers", "duration", "request_interval", "work_unit_cost",
            "overload_threshold", "overload_window", "delegation_probability",
            "phase_step", "worker_choice", "size_choice",
        )
        if getattr(args, name) is not None
    }
    config = dataclasses.replace(base, **overrides)
    try:
        sim.validate_config(config)
        snapshot = sim.simulate(config)
        write_snapshot(snapshot, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"wrote {args.out}: {len(snapshot.agents)} agents,"
        f" {len(snapshot.messages)} messages, {len(snapshot.activities)} activities"
    )
    return 0


def _render_tree_text(tree: callgraph.CallGraphTree, max_depth: int) -> str:
    lines = []

    def walk(node: callgraph.CallGraphNode, depth: int) -> None:
        if depth > max_depth:
            return
        indent = "  " * depth
        lines.append(
            f"{indent}{node.label}  {format_seconds(node.total_impact)}"
            f"  {node.pct_parent_text}%  {node.pct_session_text}%"
        )
        for child in node.children:
            walk(child, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"


def cmd_analyze(args: argparse.Namespace) -> int:
    snapshot = _load(_resolve_snapshot_path(args))
    try:
        order = callgraph.parse_order(args.order)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    tree = callgraph.build_tree(snapshot, compute_impact_table(snapshot), order)
    if args.format == "structured":
        sys.stdout.write(callgraph.export_tree(tree, "structured-text").decode("utf-8"))
    else:
        sys.stdout.write(_render_tree_text(tree, args.depth))
    return 0


def cmd_flat(args: argparse.Namespace) -> int:
    snapshot = _load(_resolve_snapshot_path(args))
    rows = flat_profile(snapshot, compute_impact_table(snapshot))
    sys.stdout.write(render_flat_table(rows))
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    if not args.keyword:
        print("error: search keyword must be non-empty", file=sys.stderr)
        return 2
    snapshot = _load(_resolve_snapshot_path(args))
    try:
        order = callgraph.parse_order(args.order)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    tree = callgraph.build_tree(snapshot, compute_impact_table(snapshot), order)
    count, node_ids = callgraph.search(tree, args.keyword)
    print(f"{count} matches")
    for node_id in node_ids:
        path = [node_id]
        while (parent := tree.parent_id(path[0])) is not None:
            path.insert(0, parent)
        print(" / ".join(tree.node(n).label for n in path))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    snapshot = _load(_resolve_snapshot_path(args))
    try:
        httpd = server.make_server(snapshot, args.host, args.port, ui_dir=args.ui_dir)
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    host, port = httpd.server_address[:2]
    print(f"serving on http://{host}:{port}/ (Ctrl-C to stop)", file=sys.stderr)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "flat": cmd_flat,
    "search": cmd_search,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
