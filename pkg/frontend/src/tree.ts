/**
 * Client-side index over the flattened tree payload.
 *
 * Purely structural: it never computes anything from impact values, it only
 * organizes the node records the server sent (node ids are depth-first, so
 * sorting ids reproduces drawing order).
 */

import type { ApiNode, TreePayload } from "./types.js";

export class TreeIndex {
  readonly order: string[];
  readonly rootId: number;
  private readonly byId = new Map<number, ApiNode>();
  private readonly childIds = new Map<number, number[]>();

  constructor(payload: TreePayload) {
    this.order = payload.order;
    if (payload.nodes.length === 0) {
      throw new Error("tree payload has no nodes");
    }
    let root: number | null = null;
    for (const node of payload.nodes) {
      this.byId.set(node.node_id, node);
      if (node.parent_id === null) {
        root = node.node_id;
      } else {
        const siblings = this.childIds.get(node.parent_id) ?? [];
        siblings.push(node.node_id);
        this.childIds.set(node.parent_id, siblings);
      }
    }
    if (root === null) {
      throw new Error("tree payload has no root node");
    }
    this.rootId = root;
  }

  node(id: number): ApiNode {
    const node = this.byId.get(id);
    if (!node) {
      throw new Error(`unknown node id ${id}`);
    }
    return node;
  }

  has(id: number): boolean {
    return this.byId.has(id);
  }

  childrenOf(id: number): number[] {
    return this.childIds.get(id) ?? [];
  }

  parentOf(id: number): number | null {
    return this.node(id).parent_id;
  }

  /** Path from the node up to the root, inclusive. */
  pathToRoot(id: number): number[] {
    const path = [id];
    let current = this.node(id).parent_id;
    while (current !== null) {
      path.push(current);
      current = this.node(current).parent_id;
    }
    return path;
  }

  depthOf(id: number): number {
    return this.pathToRoot(id).length - 1;
  }

  /**
   * Node ids visible for a selection: the path to the root, the children of
   * every node on that path, and the selection's grandchildren. Matches the
   * server's visibility contract.
   */
  visibleSet(selected: number): Set<number> {
    const visible = new Set<number>();
    const path = this.pathToRoot(selected);
    for (const id of path) {
      visible.add(id);
      for (const child of this.childrenOf(id)) {
        visible.add(child);
      }
    }
    for (const child of this.childrenOf(selected)) {
      for (const grandchild of this.childrenOf(child)) {
        visible.add(grandchild);
      }
    }
    return visible;
  }

  /** Visible ids in drawing order (ids are assigned depth-first). */
  visibleRows(selected: number): number[] {
    return [...this.visibleSet(selected)].sort((a, b) => a - b);
  }
}
