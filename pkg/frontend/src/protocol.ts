/**
 * Bridge wire protocol: newline-delimited JSON, protocol field "v": 1.
 * Every client message is acknowledged by the next snapshot; snapshots
 * carry a monotone revision number.
 */

export const PROTOCOL_VERSION = 1;

export type MessageKind = "Pending" | "Ongoing" | "Violation";

export interface SecurityMessageView {
  kind: MessageKind;
  app_id: string;
  text: string;
  ref: number;
}

export interface StatusBarView {
  visible: boolean;
  screen_mode: string;
  current: SecurityMessageView | null;
  rotation: SecurityMessageView[];
}

export interface ButtonView {
  button_id: string;
  label_text: string;
  confirm_mode: string;
}

export interface ForegroundAppView {
  app_id: string;
  display_name: string;
  buttons: ButtonView[];
}

export interface SessionView {
  session_id: number;
  app_id: string;
  requester_app_id: string;
  op: string;
  device: string;
  devices: string[];
  binding_id: number | null;
  exempt: boolean;
  started_t: number;
  ended_t: number | null;
  reason: string | null;
  exit: { E1: boolean; E2: boolean; E3: boolean };
}

export interface LogEntryView {
  seq: number;
  t_ms: number;
  category: string;
  app_id: string;
  op: string | null;
  device: string | null;
  detail: string;
}

export interface Counts {
  blocked: number;
  denied: number;
  authorized: number;
  terminated: number;
}

export interface Snapshot {
  v: number;
  kind: "snapshot";
  revision: number;
  world: string;
  t_ms: number;
  status_bar: StatusBarView;
  foreground_app: ForegroundAppView | null;
  active_sessions: SessionView[];
  recent_log: LogEntryView[];
  counts: Counts;
  sound_events: number;
}

export interface ErrorMessage {
  v: number;
  kind: "error";
  error: string;
}

export type ServerMessage = Snapshot | ErrorMessage;

export type PointerKind = "down" | "move" | "up";

export type ClientMessage =
  | { v: number; kind: "pointer"; pointer_kind: PointerKind; button_id?: string; inside?: boolean }
  | { v: number; kind: "fingerprint" }
  | { v: number; kind: "chord" }
  | { v: number; kind: "select_scenario"; name: string }
  | {
      v: number;
      kind: "retro";
      action: { kind: "Uninstall" | "RevokePermission"; app_id: string; permission?: string };
    };

export function parseServerMessage(line: string): ServerMessage {
  const obj = JSON.parse(line);
  if (typeof obj !== "object" || obj === null) {
    throw new Error("server message must be an object");
  }
  if (obj.v !== PROTOCOL_VERSION) {
    throw new Error(`unsupported protocol version ${obj.v}`);
  }
  if (obj.kind === "snapshot") {
    if (typeof obj.revision !== "number" || typeof obj.status_bar !== "object") {
      throw new Error("malformed snapshot");
    }
    return obj as Snapshot;
  }
  if (obj.kind === "error") {
    return obj as ErrorMessage;
  }
  throw new Error(`unknown server message kind ${obj.kind}`);
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify({ ...msg, v: PROTOCOL_VERSION }) + "\n";
}
