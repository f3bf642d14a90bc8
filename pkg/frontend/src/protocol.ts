// Wire types for the service WebSocket. The UI renders server decisions
// only; it never re-derives zones or filters detections itself.

export type Zone = "left" | "center" | "right" | "silence";

export type DetectionItem = {
  label: string;
  score: number;
  bbox: [number, number, number, number]; // x_min, y_min, x_max, y_max in [0, 1]
};

export type FrameMessage = { type: "frame"; frame_id: number; jpeg_b64: string };
export type DetectionsMessage = {
  type: "detections";
  frame_id: number;
  items: DetectionItem[];
};
export type CueMessage = { type: "cue"; frame_id: number; zone: Zone };
export type StateMessage = { type: "state"; target: string | null; labels: string[] };
export type ErrorMessage = { type: "error"; message: string };

export type ServerMessage =
  | FrameMessage
  | DetectionsMessage
  | CueMessage
  | StateMessage
  | ErrorMessage;

export type ClientCommand =
  | { type: "select_target"; label: string }
  | { type: "set_audio"; frequency?: number | null; amplitude?: number | null }
  | { type: "mute"; on: boolean };

const ZONES: readonly string[] = ["left", "center", "right", "silence"];

/** Parse one server message; throws on anything that is not protocol. */
export function parseServerMessage(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new Error("not JSON");
  }
  const msg = raw as Record<string, unknown>;
  switch (msg.type) {
    case "frame":
      if (typeof msg.frame_id === "number" && typeof msg.jpeg_b64 === "string") {
        return { type: "frame", frame_id: msg.frame_id, jpeg_b64: msg.jpeg_b64 };
      }
      break;
    case "detections":
      if (typeof msg.frame_id === "number" && Array.isArray(msg.items)) {
        const items = msg.items.map(parseDetectionItem);
        return { type: "detections", frame_id: msg.frame_id, items };
      }
      break;
    case "cue":
      if (typeof msg.frame_id === "number" && ZONES.includes(msg.zone as string)) {
        return { type: "cue", frame_id: msg.frame_id, zone: msg.zone as Zone };
      }
      break;
    case "state":
      if (
        (msg.target === null || typeof msg.target === "string") &&
        Array.isArray(msg.labels) &&
        msg.labels.every((l) => typeof l === "string")
      ) {
        return { type: "state", target: msg.target as string | null, labels: msg.labels };
      }
      break;
    case "error":
      if (typeof msg.message === "string") {
        return { type: "error", message: msg.message };
      }
      break;
  }
  throw new Error(`malformed ${String(msg.type ?? "untyped")} message`);
}

function parseDetectionItem(raw: unknown): DetectionItem {
  const item = raw as Record<string, unknown>;
  const bbox = item.bbox;
  if (
    typeof item.label === "string" &&
    typeof item.score === "number" &&
    item.score >= 0 &&
    item.score <= 1 &&
    Array.isArray(bbox) &&
    bbox.length === 4 &&
    bbox.every((v) => typeof v === "number")
  ) {
    return {
      label: item.label,
      score: item.score,
      bbox: [bbox[0], bbox[1], bbox[2], bbox[3]],
    };
  }
  throw new Error("malformed detection item");
}

export function serializeCommand(command: ClientCommand): string {
  return JSON.stringify(command);
}
