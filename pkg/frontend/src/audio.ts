// Web Audio renderer for cue messages. One oscillator feeds two gain nodes
// merged into a stereo output: "left" opens only the left gain, "right" the
// right, "center" both, "silence" closes both. Gains ramp linearly over the
// fade window, mirroring the service's click-free envelope defaults.

import type { Zone } from "./protocol.js";

const FADE_S = 0.005;

export class CueSonifier {
  private ctx: AudioContext | null = null;
  private osc: OscillatorNode | null = null;
  private gainL: GainNode | null = null;
  private gainR: GainNode | null = null;
  private frequency = 440;
  private amplitude = 0.5;
  private muted = false;
  private zone: Zone = "silence";

  /** Must be called from a user gesture; browsers block audio before one. */
  unlock(): boolean {
    if (this.ctx) return true;
    const Ctor =
      (globalThis as any).AudioContext ?? (globalThis as any).webkitAudioContext;
    if (!Ctor) return false;
    const ctx: AudioContext = new Ctor();
    const osc = ctx.createOscillator();
    osc.type = "sine";
    osc.frequency.value = this.frequency;
    const gainL = ctx.createGain();
    const gainR = ctx.createGain();
    gainL.gain.value = 0;
    gainR.gain.value = 0;
    const merger = ctx.createChannelMerger(2);
    osc.connect(gainL).connect(merger, 0, 0);
    osc.connect(gainR).connect(merger, 0, 1);
    merger.connect(ctx.destination);
    osc.start();
    this.ctx = ctx;
    this.osc = osc;
    this.gainL = gainL;
    this.gainR = gainR;
    return true;
  }

  get unlocked(): boolean {
    return this.ctx !== null;
  }

  applyCue(zone: Zone): void {
    this.zone = zone;
    this.update();
  }

  setFrequency(hz: number): void {
    this.frequency = hz;
    if (this.osc && this.ctx) {
      this.osc.frequency.linearRampToValueAtTime(hz, this.ctx.currentTime + FADE_S);
    }
  }

  setAmplitude(value: number): void {
    this.amplitude = value;
    this.update();
  }

  setMuted(muted: boolean): void {
    this.muted = muted;
    this.update();
  }

  /** Stop sound immediately (target changed / disconnected). */
  silence(): void {
    this.applyCue("silence");
  }

  private update(): void {
    if (!this.ctx || !this.gainL || !this.gainR) return;
    const level = this.muted ? 0 : this.amplitude;
    const left = this.zone === "left" || this.zone === "center" ? level : 0;
    const right = this.zone === "right" || this.zone === "center" ? level : 0;
    const at = this.ctx.currentTime + FADE_S;
    this.gainL.gain.linearRampToValueAtTime(left, at);
    this.gainR.gain.linearRampToValueAtTime(right, at);
  }
}
