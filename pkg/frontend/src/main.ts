// Demo console wiring: one socket, one view model, DOM + canvas + audio out.

import { CueSonifier } from "./audio.js";
import { drawDetections } from "./overlay.js";
import { SessionSocket } from "./socket.js";
import type { ServerMessage, Zone } from "./protocol.js";
import {
  SessionView,
  applyMessage,
  filterLabels,
  initialView,
  withStatus,
} from "./viewModel.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const statusEl = el<HTMLSpanElement>("status");
const frameImg = el<HTMLImageElement>("frame");
const overlay = el<HTMLCanvasElement>("overlay");
const indicator = {
  left: el<HTMLDivElement>("zone-left"),
  center: el<HTMLDivElement>("zone-center"),
  right: el<HTMLDivElement>("zone-right"),
};
const labelFilter = el<HTMLInputElement>("label-filter");
const labelList = el<HTMLUListElement>("label-list");
const targetEl = el<HTMLSpanElement>("target");
const errorEl = el<HTMLDivElement>("error");
const audioButton = el<HTMLButtonElement>("audio-unlock");
const muteButton = el<HTMLButtonElement>("mute");
const freqInput = el<HTMLInputElement>("freq");
const ampInput = el<HTMLInputElement>("amp");

let view: SessionView = initialView();
const sonifier = new CueSonifier();

const params = new URLSearchParams(location.search);
const wsUrl =
  params.get("ws") ?? `ws://${location.host || "127.0.0.1:8765"}/ws`;

const socket = new SessionSocket(wsUrl, {
  onMessage: handleMessage,
  onStatus: (status, retryMs) => {
    view = withStatus(view, status);
    statusEl.textContent =
      status === "disconnected" && retryMs
        ? `disconnected — retrying in ${(retryMs / 1000).toFixed(1)}s`
        : status;
    statusEl.className = `status ${status}`;
    if (status !== "connected") sonifier.silence();
  },
});

function handleMessage(msg: ServerMessage): void {
  const previousTarget = view.target;
  view = applyMessage(view, msg);
  switch (msg.type) {
    case "state":
      if (previousTarget !== view.target) sonifier.silence();
      renderLabels();
      targetEl.textContent = view.target ?? "none";
      errorEl.textContent = "";
      break;
    case "frame":
      frameImg.src = `data:image/jpeg;base64,${msg.jpeg_b64}`;
      break;
    case "detections":
      renderOverlay();
      break;
    case "cue":
      renderCue(msg.zone);
      break;
    case "error":
      errorEl.textContent = msg.message;
      break;
  }
}

function renderCue(zone: Zone): void {
  indicator.left.classList.toggle("lit", zone === "left" || zone === "center");
  indicator.right.classList.toggle("lit", zone === "right" || zone === "center");
  indicator.center.classList.toggle("lit", zone === "center");
  sonifier.applyCue(zone);
}

function renderOverlay(): void {
  const width = frameImg.clientWidth || overlay.width;
  const height = frameImg.clientHeight || overlay.height;
  overlay.width = width;
  overlay.height = height;
  const ctx = overlay.getContext("2d");
  if (ctx) drawDetections(ctx, view.detections, view.target, view.cue, width, height);
}

function renderLabels(): void {
  const visible = filterLabels(view.labels, labelFilter.value);
  labelList.replaceChildren(
    ...visible.map((label) => {
      const item = document.createElement("li");
      item.textContent = label;
      item.classList.toggle("selected", label === view.target);
      item.onclick = () => socket.send({ type: "select_target", label });
      return item;
    })
  );
}

labelFilter.oninput = renderLabels;
window.addEventListener("resize", renderOverlay);

audioButton.onclick = () => {
  audioButton.textContent = sonifier.unlock() ? "audio on" : "audio unavailable";
  audioButton.disabled = sonifier.unlocked;
};
muteButton.onclick = () => {
  const muted = muteButton.classList.toggle("active");
  sonifier.setMuted(muted);
  muteButton.textContent = muted ? "unmute" : "mute";
  socket.send({ type: "mute", on: muted });
};
freqInput.oninput = () => {
  const hz = Number(freqInput.value);
  sonifier.setFrequency(hz);
  socket.send({ type: "set_audio", frequency: hz });
};
ampInput.oninput = () => {
  const amplitude = Number(ampInput.value);
  sonifier.setAmplitude(amplitude);
  socket.send({ type: "set_audio", amplitude });
};
