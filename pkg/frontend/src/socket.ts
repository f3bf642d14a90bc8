// Reconnecting WebSocket client for the service. The WebSocket
// implementation is injectable so the same client runs in the browser and
// in node-based smoke tests.

import { parseServerMessage, serializeCommand } from "./protocol.js";
import type { ClientCommand, ServerMessage } from "./protocol.js";

export type WebSocketLike = {
  send(data: string): void;
  close(): void;
  addEventListener(type: string, listener: (event: any) => void): void;
};

export type WebSocketFactory = (url: string) => WebSocketLike;

export type SessionSocketOptions = {
  onMessage: (msg: ServerMessage) => void;
  onStatus: (status: "connecting" | "connected" | "disconnected", retryMs?: number) => void;
  factory?: WebSocketFactory;
  initialBackoffMs?: number;
  maxBackoffMs?: number;
};

const defaultFactory: WebSocketFactory = (url) =>
  new (globalThis as any).WebSocket(url) as WebSocketLike;

export class SessionSocket {
  private ws: WebSocketLike | null = null;
  private backoffMs: number;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(private url: string, private options: SessionSocketOptions) {
    this.backoffMs = options.initialBackoffMs ?? 500;
    this.connect();
  }

  private connect(): void {
    if (this.closed) return;
    this.options.onStatus("connecting");
    const ws = (this.options.factory ?? defaultFactory)(this.url);
    this.ws = ws;

    ws.addEventListener("open", () => {
      this.backoffMs = this.options.initialBackoffMs ?? 500;
      this.options.onStatus("connected");
    });
    ws.addEventListener("message", (event: { data: unknown }) => {
      try {
        this.options.onMessage(parseServerMessage(String(event.data)));
      } catch {
        // a malformed server message is logged, never fatal to the view
        console.warn("ignoring unparseable message", event.data);
      }
    });
    ws.addEventListener("close", () => this.scheduleReconnect());
    ws.addEventListener("error", () => {
      /* close always follows */
    });
  }

  private scheduleReconnect(): void {
    if (this.closed) return;
    const wait = this.backoffMs;
    this.backoffMs = Math.min(this.backoffMs * 2, this.options.maxBackoffMs ?? 15_000);
    this.options.onStatus("disconnected", wait);
    this.timer = setTimeout(() => this.connect(), wait);
  }

  send(command: ClientCommand): boolean {
    try {
      this.ws?.send(serializeCommand(command));
      return true;
    } catch {
      return false;
    }
  }

  close(): void {
    this.closed = true;
    if (this.timer) clearTimeout(this.timer);
    this.ws?.close();
  }
}
