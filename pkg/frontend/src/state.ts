/** View state and its pure transitions; rendering derives everything from this. */

import type { SearchPayload } from "./types.js";

export const ZOOM_MIN = 0.25;
export const ZOOM_MAX = 4;

export interface ViewState {
  selected: number;
  order: string;
  keyword: string;
  matchCount: number;
  matchIds: ReadonlySet<number>;
  panX: number;
  panY: number;
  zoom: number;
}

export function initialState(order: string, rootId: number): ViewState {
  return {
    selected: rootId,
    order,
    keyword: "",
    matchCount: 0,
    matchIds: new Set(),
    panX: 0,
    panY: 0,
    zoom: 1,
  };
}

export function select(state: ViewState, id: number): ViewState {
  return state.selected === id ? state : { ...state, selected: id };
}

export function applySearch(state: ViewState, payload: SearchPayload): ViewState {
  return {
    ...state,
    keyword: payload.query,
    matchCount: payload.count,
    matchIds: new Set(payload.node_ids),
  };
}

export function clearSearch(state: ViewState): ViewState {
  return { ...state, keyword: "", matchCount: 0, matchIds: new Set() };
}

/** Pivot resets the selection to the new tree's root; search is refreshed separately. */
export function applyPivot(state: ViewState, order: string, rootId: number): ViewState {
  return { ...state, order, selected: rootId, matchIds: new Set(), matchCount: 0 };
}

export function zoomBy(state: ViewState, factor: number): ViewState {
  const zoom = Math.min(ZOOM_MAX, Math.max(ZOOM_MIN, state.zoom * factor));
  return { ...state, zoom };
}

export function panBy(state: ViewState, dx: number, dy: number): ViewState {
  return { ...state, panX: state.panX + dx, panY: state.panY + dy };
}
