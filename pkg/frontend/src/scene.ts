/**
 * Layout of the visible tree as plain data, one indented row per node.
 *
 * The scene is what the painter draws, nothing more: deriving it is pure, so
 * tests can assert on the exact drawn node set without a DOM. All display
 * strings come straight from the server payload.
 */

import type { TreeIndex } from "./tree.js";
import type { ViewState } from "./state.js";

export const ROW_HEIGHT = 26;
export const INDENT = 26;

export interface SceneNode {
  id: number;
  depth: number;
  x: number;
  y: number;
  label: string;
  totalText: string;
  pctParentText: string;
  pctSessionText: string;
  selected: boolean;
  onPath: boolean;
  match: boolean;
  hasChildren: boolean;
  isLeaf: boolean;
}

export interface Scene {
  nodes: SceneNode[];
  rowHeight: number;
}

export function layoutScene(index: TreeIndex, state: ViewState): Scene {
  const path = new Set(index.pathToRoot(state.selected));
  const nodes: SceneNode[] = [];
  index.visibleRows(state.selected).forEach((id, row) => {
    const node = index.node(id);
    const depth = index.depthOf(id);
    nodes.push({
      id,
      depth,
      x: depth * INDENT,
      y: row * ROW_HEIGHT,
      label: node.label,
      totalText: node.total_text,
      pctParentText: node.pct_parent.text,
      pctSessionText: node.pct_session.text,
      selected: id === state.selected,
      onPath: path.has(id),
      match: state.matchIds.has(id),
      hasChildren: node.child_count > 0,
      isLeaf: node.level === "message",
    });
  });
  return { nodes, rowHeight: ROW_HEIGHT };
}

/** Ids drawn for the current state; the UI's visibility contract in one call. */
export function drawnIds(scene: Scene): number[] {
  return scene.nodes.map((n) => n.id);
}
