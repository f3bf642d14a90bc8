"""Stereo sinusoidal cue synthesis.

Left cues ring the left channel, Right the right channel, Center both;
Silence is a zero buffer. ``synth_cue`` is pure; ``CueStreamer`` is the live
single-consumer engine where one producer submits events (never blocking)
and one consumer pulls samples.
"""

from __future__ import annotations

import math
import threading
import wave
from dataclasses import dataclass, replace
from typing import IO, Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .models import CueEvent, CueKind


@dataclass(frozen=True)
class AudioConfig:
    """Tone parameters. Defaults are audible, click-free, easy to lateralize."""

    sample_rate: int = 48000
    frequency: float = 440.0
    amplitude: float = 0.5
    cue_duration_ms: float = 150.0
    fade_ms: float = 5.0

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive: {self.sample_rate}")
        if not 0.0 < self.frequency < self.sample_rate / 2.0:
            raise ValueError(
                f"frequency {self.frequency} violates Nyquist for {self.sample_rate} Hz"
            )
        if not 0.0 < self.amplitude <= 1.0:
            raise ValueError(f"amplitude outside (0, 1]: {self.amplitude}")
        if self.cue_duration_ms <= 0.0:
            raise ValueError("cue_duration_ms must be positive")
        if self.fade_ms < 0.0 or self.fade_ms * 2.0 > self.cue_duration_ms:
            raise ValueError(
                f"fades ({self.fade_ms} ms twice) do not fit in {self.cue_duration_ms} ms"
            )

    @property
    def cue_samples(self) -> int:
        return int(round(self.cue_duration_ms * self.sample_rate / 1000.0))

    @property
    def fade_samples(self) -> int:
        return int(round(self.fade_ms * self.sample_rate / 1000.0))


@dataclass(frozen=True)
class StereoBuffer:
    """Two equal-length float channels, every sample within [-1, 1]."""

    left: np.ndarray
    right: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        if self.left.shape != self.right.shape or self.left.ndim != 1:
            raise ValueError("channels must be equal-length 1-D arrays")
        for channel in (self.left, self.right):
            if channel.size and float(np.max(np.abs(channel))) > 1.0:
                raise ValueError("samples outside [-1, 1]")

    def __len__(self) -> int:
        return int(self.left.size)

    def interleaved(self) -> np.ndarray:
        """(n, 2) view-friendly array, left in column 0."""
        return np.stack([self.left, self.right], axis=1)


def fade_envelope(n: int, fade_samples: int) -> np.ndarray:
    """Linear fade-in/out ramp: 0 at the ends, 1 across the middle."""
    if fade_samples <= 0:
        return np.ones(n)
    k = np.arange(n, dtype=np.float64)
    return np.clip(np.minimum(k, n - 1 - k) / fade_samples, 0.0, 1.0)


def _tone(cfg: AudioConfig) -> np.ndarray:
    n = cfg.cue_samples
    k = np.arange(n, dtype=np.float64)
    env = fade_envelope(n, cfg.fade_samples)
    return cfg.amplitude * env * np.sin(2.0 * math.pi * cfg.frequency * k / cfg.sample_rate)


def synth_cue(event: Union[CueEvent, CueKind], cfg: AudioConfig) -> StereoBuffer:
    """One cue burst: the active channel(s) carry the faded sine, the rest are zero."""
    kind = event.kind if isinstance(event, CueEvent) else event
    n = cfg.cue_samples
    zeros = np.zeros(n)
    if kind is CueKind.SILENCE:
        return StereoBuffer(zeros, zeros.copy(), cfg.sample_rate)
    tone = _tone(cfg)
    if kind is CueKind.LEFT:
        return StereoBuffer(tone, zeros, cfg.sample_rate)
    if kind is CueKind.RIGHT:
        return StereoBuffer(zeros, tone, cfg.sample_rate)
    return StereoBuffer(tone, tone.copy(), cfg.sample_rate)


def concat(buffers: Sequence[StereoBuffer]) -> StereoBuffer:
    if not buffers:
        raise ValueError("nothing to concatenate")
    rate = buffers[0].sample_rate
    if any(b.sample_rate != rate for b in buffers):
        raise ValueError("mixed sample rates")
    return StereoBuffer(
        np.concatenate([b.left for b in buffers]),
        np.concatenate([b.right for b in buffers]),
        rate,
    )


_TARGETS = {
    CueKind.LEFT: (1.0, 0.0),
    CueKind.CENTER: (1.0, 1.0),
    CueKind.RIGHT: (0.0, 1.0),
    CueKind.SILENCE: (0.0, 0.0),
}


class CueStreamer:
    """Continuous tone engine for the live loop.

    The latest submitted event wins (capacity-1 slot, ``submit`` never
    blocks); out-of-order timestamps are dropped and counted. While the
    current event is Left/Center/Right the tone loops on the matching
    channel(s); on a routing change the old channel gain ramps to zero over
    ``fade_ms`` while the new one ramps in, so output never clicks and never
    leaves [-amplitude, amplitude].
    """

    def __init__(self, cfg: AudioConfig) -> None:
        self._cfg = cfg
        self._lock = threading.Lock()
        self._pending: Optional[CueEvent] = None
        self._last_timestamp: Optional[int] = None
        self.dropped_out_of_order = 0
        self.superseded = 0
        self._phase = 0.0
        self._gain_l = 0.0
        self._gain_r = 0.0
        self._target_l = 0.0
        self._target_r = 0.0

    @property
    def config(self) -> AudioConfig:
        with self._lock:
            return self._cfg

    def set_config(
        self, frequency: Optional[float] = None, amplitude: Optional[float] = None
    ) -> AudioConfig:
        """Live-update tone parameters; phase stays continuous."""
        with self._lock:
            updates = {}
            if frequency is not None:
                updates["frequency"] = frequency
            if amplitude is not None:
                updates["amplitude"] = amplitude
            self._cfg = replace(self._cfg, **updates)
            return self._cfg

    def submit(self, event: CueEvent) -> bool:
        """Queue an event; returns False when dropped for being out of order."""
        with self._lock:
            if (
                self._last_timestamp is not None
                and event.frame_timestamp_us < self._last_timestamp
            ):
                self.dropped_out_of_order += 1
                return False
            self._last_timestamp = event.frame_timestamp_us
            if self._pending is not None:
                self.superseded += 1
            self._pending = event
            return True

    def read(self, n: int) -> np.ndarray:
        """Produce the next (n, 2) samples; applies any pending event first."""
        with self._lock:
            pending, self._pending = self._pending, None
            cfg = self._cfg
        if pending is not None:
            self._target_l, self._target_r = _TARGETS[pending.kind]

        fade_n = max(1, cfg.fade_samples)
        k = np.arange(1, n + 1, dtype=np.float64)
        gain_l = self._ramp(self._gain_l, self._target_l, k, fade_n)
        gain_r = self._ramp(self._gain_r, self._target_r, k, fade_n)

        phase = self._phase + 2.0 * math.pi * cfg.frequency / cfg.sample_rate * np.arange(
            n, dtype=np.float64
        )
        tone = cfg.amplitude * np.sin(phase)
        self._phase = math.fmod(
            self._phase + 2.0 * math.pi * cfg.frequency / cfg.sample_rate * n,
            2.0 * math.pi,
        )
        if n:
            self._gain_l = float(gain_l[-1])
            self._gain_r = float(gain_r[-1])
        return np.stack([gain_l * tone, gain_r * tone], axis=1)

    @staticmethod
    def _ramp(start: float, target: float, k: np.ndarray, fade_n: int) -> np.ndarray:
        if start == target:
            return np.full(k.shape, target)
        direction = 1.0 if target > start else -1.0
        ramp = start + direction * k / fade_n
        return np.clip(ramp, min(start, target), max(start, target))


def cue_stream(
    events: Iterable[CueEvent],
    cfg: AudioConfig,
    tail_ms: Optional[float] = None,
    streamer: Optional[CueStreamer] = None,
) -> Iterator[np.ndarray]:
    """Render a timestamped event sequence as a continuous (n, 2) sample stream.

    Chunk boundaries fall on event timestamps; after the final event one
    ``tail_ms`` chunk (default: one cue duration) lets the last routing fade
    out. Out-of-order events are dropped by the underlying streamer.
    """
    engine = streamer if streamer is not None else CueStreamer(cfg)
    previous: Optional[CueEvent] = None
    for event in events:
        if previous is not None:
            delta_us = event.frame_timestamp_us - previous.frame_timestamp_us
            n = max(0, int(round(delta_us * cfg.sample_rate / 1_000_000.0)))
            if n:
                yield engine.read(n)
        engine.submit(event)
        previous = event
    if previous is not None:
        tail = cfg.cue_duration_ms if tail_ms is None else tail_ms
        n = int(round(tail * cfg.sample_rate / 1000.0))
        if n:
            yield engine.read(n)


def pcm16(samples: Union[StereoBuffer, np.ndarray]) -> np.ndarray:
    """Float samples to 16-bit PCM: s16 = round(s * 32767)."""
    arr = samples.interleaved() if isinstance(samples, StereoBuffer) else samples
    return np.round(np.clip(arr, -1.0, 1.0) * 32767.0).astype(np.int16)


def write_wav(path_or_file: Union[str, IO[bytes]], buffer: StereoBuffer) -> None:
    """Write a stereo 16-bit PCM little-endian WAV file."""
    data = pcm16(buffer)
    with wave.open(path_or_file, "wb") as wav:
        wav.setnchannels(2)
        wav.setsampwidth(2)
        wav.setframerate(buffer.sample_rate)
        wav.writeframes(data.astype("<i2").tobytes())


def read_wav(path_or_file: Union[str, IO[bytes]]) -> Tuple[np.ndarray, int]:
    """Read a 16-bit stereo WAV back into float samples (n, 2) in [-1, 1]."""
    with wave.open(path_or_file, "rb") as wav:
        if wav.getsampwidth() != 2 or wav.getnchannels() != 2:
            raise ValueError("expected 16-bit stereo WAV")
        rate = wav.getframerate()
        raw = wav.readframes(wav.getnframes())
    data = np.frombuffer(raw, dtype="<i2").reshape(-1, 2)
    return data.astype(np.float64) / 32767.0, rate
