/** Thin typed client for the profiler API. */

import type { NodeDetailPayload, SearchPayload, SessionPayload, TreePayload } from "./types.js";

export function sessionUrl(base = ""): string {
  return `${base}/api/session`;
}

export function treeUrl(order: string, base = ""): string {
  return `${base}/api/tree?order=${encodeURIComponent(order)}`;
}

export function searchUrl(keyword: string, order: string, base = ""): string {
  return `${base}/api/search?q=${encodeURIComponent(keyword)}&order=${encodeURIComponent(order)}`;
}

export function nodeUrl(id: number, order: string, base = ""): string {
  return `${base}/api/node/${id}?order=${encodeURIComponent(order)}`;
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  if (!resp.ok) {
    let detail = `${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      // non-JSON error body; keep the status code
    }
    throw new Error(`${url}: ${detail}`);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private readonly base = "") {}

  session(): Promise<SessionPayload> {
    return getJson(sessionUrl(this.base));
  }

  tree(order: string): Promise<TreePayload> {
    return getJson(treeUrl(order, this.base));
  }

  search(keyword: string, order: string): Promise<SearchPayload> {
    return getJson(searchUrl(keyword, order, this.base));
  }

  nodeDetail(id: number, order: string): Promise<NodeDetailPayload> {
    return getJson(nodeUrl(id, order, this.base));
  }
}
