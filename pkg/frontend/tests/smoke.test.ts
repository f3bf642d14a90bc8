// Live smoke test against a running service. Gated behind SMOKE_WS_URL so
// the suite stays self-contained by default:
//
//   soundscout --input tests/data/golden_trace.tsv --serve --port 8765 &
//   SMOKE_WS_URL=ws://127.0.0.1:8765/ws npm test
//
import { describe, expect, it } from "vitest";
import { WebSocket as NodeWebSocket } from "ws";

import { SessionSocket } from "../src/socket.js";
import type { ServerMessage } from "../src/protocol.js";

const URL = process.env.SMOKE_WS_URL;

describe.skipIf(!URL)("live service smoke", () => {
  it("connects, selects cup, and sees a frame + state within 2 s", async () => {
    const received: ServerMessage[] = [];
    let resolveDone: () => void = () => {};
    const done = new Promise<void>((resolve) => (resolveDone = resolve));
    let selected = false;

    const socket = new SessionSocket(URL!, {
      factory: (url) => new NodeWebSocket(url) as never,
      onStatus: () => {},
      onMessage: (msg) => {
        received.push(msg);
        if (msg.type === "state" && !selected) {
          selected = true;
          socket.send({ type: "select_target", label: "cup" });
        }
        const gotAck = received.some(
          (m) => m.type === "state" && m.target === "cup"
        );
        const gotFrame = received.some((m) => m.type === "frame");
        if (gotAck && gotFrame) resolveDone();
      },
    });

    const timeout = new Promise<never>((_, reject) =>
      setTimeout(() => reject(new Error("no frame + state within 2s")), 2000)
    );
    try {
      await Promise.race([done, timeout]);
    } finally {
      socket.close();
    }

    expect(received.find((m) => m.type === "state")).toBeTruthy();
    expect(received.filter((m) => m.type === "frame").length).toBeGreaterThanOrEqual(1);
    const ack = received.find((m) => m.type === "state" && m.target === "cup");
    expect(ack).toBeTruthy();
  });
});
