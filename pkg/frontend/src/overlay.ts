// Canvas overlay: draws server-reported boxes over the frame image.
// Coordinates are normalized, so boxes track the image under any resize.
// Target boxes are tinted by the server's cue decision — the UI never
// recomputes zones itself.

import type { DetectionItem, Zone } from "./protocol.js";

// zone colors match the service's annotated-frame palette
const ZONE_COLORS: Record<string, string> = {
  left: "#00a0ff",
  center: "#00c800",
  right: "#ff4000",
};
const TARGET_COLOR = "#e8e13a";
const OTHER_COLOR = "#8c8c8c";

export function drawDetections(
  ctx: CanvasRenderingContext2D,
  items: DetectionItem[],
  target: string | null,
  cue: Zone | null,
  width: number,
  height: number
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 2;
  ctx.font = "13px system-ui, sans-serif";
  const targetColor = cue && cue !== "silence" ? ZONE_COLORS[cue] : TARGET_COLOR;
  for (const item of items) {
    const [x0, y0, x1, y1] = item.bbox;
    const color = item.label === target ? targetColor : OTHER_COLOR;
    const px = x0 * width;
    const py = y0 * height;
    const pw = (x1 - x0) * width;
    const ph = (y1 - y0) * height;
    ctx.strokeStyle = color;
    ctx.strokeRect(px, py, pw, ph);

    const caption = `${item.label} ${(item.score * 100).toFixed(0)}%`;
    const captionWidth = ctx.measureText(caption).width + 8;
    ctx.fillStyle = "rgba(0,0,0,0.65)";
    ctx.fillRect(px, Math.max(0, py - 17), captionWidth, 17);
    ctx.fillStyle = color;
    ctx.fillText(caption, px + 4, Math.max(12, py - 5));
  }
}
