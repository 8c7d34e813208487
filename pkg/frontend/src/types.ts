/** Payload shapes served by the profiler's HTTP API. */

export interface PctValue {
  num: number;
  den: number;
  text: string;
}

export interface ApiNode {
  node_id: number;
  parent_id: number | null;
  level: "session" | "emitter" | "receiver" | "content" | "message";
  label: string;
  total_micros: number;
  total_text: string;
  pct_parent: PctValue;
  pct_session: PctValue;
  child_count: number;
  msg_id: number | null;
}

export interface TreePayload {
  order: string[];
  session_total_micros: number;
  nodes: ApiNode[];
}

export interface SessionPayload {
  session_id: string;
  capture_date: string;
  duration_micros: number;
  duration_text: string;
  agents: string[];
  agent_count: number;
  message_count: number;
  activity_count: number;
  total_impact_micros: number;
  total_impact_text: string;
  total_activity_micros: number;
  total_activity_text: string;
  pre_message_activity_micros: number;
}

export interface SearchPayload {
  query: string;
  count: number;
  node_ids: number[];
}

export interface MessageDetail {
  msg_id: number;
  sender: string;
  receiver: string;
  performative: string;
  content: string;
  sent_micros: number;
  recv_micros: number;
}

export interface NodeDetailPayload extends ApiNode {
  children: number[];
  message?: MessageDetail;
}
