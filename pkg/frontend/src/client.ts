/**
 * TCP client for the live bridge. Maintains the latest snapshot and lets
 * callers await the snapshot that satisfies a condition.
 */

import * as net from "net";

import {
  ClientMessage,
  ErrorMessage,
  parseServerMessage,
  PointerKind,
  Snapshot,
  encodeClientMessage,
} from "./protocol";

export type SnapshotListener = (snap: Snapshot) => void;
export type ErrorListener = (err: ErrorMessage) => void;

export class BridgeClient {
  private socket: net.Socket | null = null;
  private buffer = "";
  private snapshotListeners: SnapshotListener[] = [];
  private errorListeners: ErrorListener[] = [];
  latest: Snapshot | null = null;

  connect(host: string, port: number): Promise<void> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () => resolve());
      socket.setEncoding("utf-8");
      socket.on("data", (chunk: string) => this.onData(chunk));
      socket.on("error", (err) => reject(err));
      this.socket = socket;
    });
  }

  close(): void {
    this.socket?.destroy();
    this.socket = null;
  }

  onSnapshot(fn: SnapshotListener): void {
    this.snapshotListeners.push(fn);
  }

  onError(fn: ErrorListener): void {
    this.errorListeners.push(fn);
  }

  private onData(chunk: string): void {
    this.buffer += chunk;
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx).trim();
      this.buffer = this.buffer.slice(idx + 1);
      if (!line) continue;
      let msg;
      try {
        msg = parseServerMessage(line);
      } catch {
        continue; // tolerate garbage; the stream re-synchronizes per line
      }
      if (msg.kind === "snapshot") {
        this.latest = msg;
        for (const fn of this.snapshotListeners) fn(msg);
      } else {
        for (const fn of this.errorListeners) fn(msg);
      }
    }
  }

  send(msg: ClientMessage): void {
    if (!this.socket) throw new Error("not connected");
    this.socket.write(encodeClientMessage(msg));
  }

  pointer(pointerKind: PointerKind, buttonId?: string, inside?: boolean): void {
    this.send({
      v: 1,
      kind: "pointer",
      pointer_kind: pointerKind,
      ...(buttonId !== undefined ? { button_id: buttonId } : {}),
      ...(inside !== undefined ? { inside } : {}),
    });
  }

  fingerprint(): void {
    this.send({ v: 1, kind: "fingerprint" });
  }

  chord(): void {
    this.send({ v: 1, kind: "chord" });
  }

  selectScenario(name: string): void {
    this.send({ v: 1, kind: "select_scenario", name });
  }

  /** Resolve with the first snapshot satisfying the predicate. */
  waitFor(
    predicate: (snap: Snapshot) => boolean,
    timeoutMs = 5000,
  ): Promise<Snapshot> {
    return new Promise((resolve, reject) => {
      if (this.latest && predicate(this.latest)) {
        resolve(this.latest);
        return;
      }
      const timer = setTimeout(() => {
        const at = this.snapshotListeners.indexOf(listener);
        if (at >= 0) this.snapshotListeners.splice(at, 1);
        reject(new Error(`timed out waiting for snapshot after ${timeoutMs}ms`));
      }, timeoutMs);
      const listener = (snap: Snapshot) => {
        if (predicate(snap)) {
          clearTimeout(timer);
          const at = this.snapshotListeners.indexOf(listener);
          if (at >= 0) this.snapshotListeners.splice(at, 1);
          resolve(snap);
        }
      };
      this.onSnapshot(listener);
    });
  }
}
