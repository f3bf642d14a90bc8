// The session view is a pure fold over the ordered server message stream:
// replaying a recorded stream reproduces the exact same view. All rendering
// (canvas, audio, DOM) subscribes to this model and adds nothing to it.

import type { DetectionItem, ServerMessage, Zone } from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export type SessionView = {
  status: ConnectionStatus;
  target: string | null;
  labels: string[];
  frameId: number | null;
  frameJpegB64: string | null;
  detections: DetectionItem[];
  cue: Zone | null;
  lastError: string | null;
  audio: { frequency: number; amplitude: number };
  muted: boolean;
  messagesSeen: number;
};

export function initialView(): SessionView {
  return {
    status: "connecting",
    target: null,
    labels: [],
    frameId: null,
    frameJpegB64: null,
    detections: [],
    cue: null,
    lastError: null,
    audio: { frequency: 440, amplitude: 0.5 },
    muted: false,
    messagesSeen: 0,
  };
}

/** Fold one server message into the view; never mutates the input. */
export function applyMessage(view: SessionView, msg: ServerMessage): SessionView {
  const next: SessionView = { ...view, messagesSeen: view.messagesSeen + 1 };
  switch (msg.type) {
    case "state":
      next.target = msg.target;
      next.labels = msg.labels;
      return next;
    case "frame":
      next.frameId = msg.frame_id;
      next.frameJpegB64 = msg.jpeg_b64;
      return next;
    case "detections":
      next.detections = msg.items;
      return next;
    case "cue":
      next.cue = msg.zone;
      return next;
    case "error":
      next.lastError = msg.message;
      return next;
  }
}

export function replay(messages: ServerMessage[], start?: SessionView): SessionView {
  let view = start ?? initialView();
  for (const msg of messages) {
    view = applyMessage(view, msg);
  }
  return view;
}

export function withStatus(view: SessionView, status: ConnectionStatus): SessionView {
  return { ...view, status };
}

/** Case-insensitive substring filter for the target picker. */
export function filterLabels(labels: string[], query: string): string[] {
  const needle = query.trim().toLowerCase();
  if (!needle) return labels;
  return labels.filter((label) => label.toLowerCase().includes(needle));
}
