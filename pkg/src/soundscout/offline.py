"""Offline (fixture) runs: every frame processed in order, outputs on disk.

Unlike the live pipeline there is no frame dropping here; identical config
and fixtures produce byte-identical event logs and WAV files.
"""

from __future__ import annotations

import json
import os
import sys
import zlib
from typing import Iterator, List, Optional, Tuple

import cv2
import numpy as np

from .annotate import draw_detections
from .audio import StereoBuffer, concat, synth_cue, write_wav
from .backends import (
    BackendUnavailable,
    DetectorBackend,
    LabelFileError,
    TFLiteBackend,
    TraceBackend,
    TraceParseError,
    coco_labels,
    load_labels,
    mock_from_trace,
)
from .config import ConfigError, InputKind, RunConfig
from .imaging import FrameBuffer, frame_from_rgb, load_image_rgb, to_bgr
from .pipeline import CueReady, DetectionsReady, UnknownLabelError, process_frame, suggest_labels

IMAGE_EXTENSIONS = {".png", ".ppm", ".jpg", ".jpeg", ".bmp"}
FRAME_PERIOD_US = 33333  # synthetic 30 fps clock for fixture frames

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3


def build_backend(config: RunConfig, loop: bool = False) -> DetectorBackend:
    """Construct the configured backend; raises instead of exiting."""
    labels = load_labels(config.labels_path) if config.labels_path else coco_labels()
    if config.backend == "mock":
        return mock_from_trace(config.input, labels=labels, loop=loop)
    return TFLiteBackend(
        config.model_path, labels=labels, input_size=config.input_size
    )


def synthetic_trace_frame(
    backend: TraceBackend, frame_id: int, width: int, height: int, timestamp_us: int
) -> FrameBuffer:
    """Stand-in pixels for trace-only runs: scripted boxes as filled patches."""
    rgb = np.full((height, width, 3), 40, dtype=np.uint8)
    for det in backend.scripted(frame_id):
        shade = 90 + zlib.crc32(det.label.encode()) % 120
        x0 = int(det.bbox.x_min * width)
        y0 = int(det.bbox.y_min * height)
        x1 = max(x0 + 1, int(det.bbox.x_max * width))
        y1 = max(y0 + 1, int(det.bbox.y_max * height))
        rgb[y0:y1, x0:x1] = shade
    return frame_from_rgb(rgb, timestamp_us)


def iter_frames(config: RunConfig, backend: DetectorBackend) -> Iterator[FrameBuffer]:
    """Finite, ordered frame source for offline runs."""
    if config.input_kind is InputKind.TRACE:
        if not isinstance(backend, TraceBackend):
            raise ConfigError("trace input requires the mock backend")
        w, h = backend.spec.input_w, backend.spec.input_h
        for i in range(backend.max_frame_index + 1):
            yield synthetic_trace_frame(backend, i, w, h, i * FRAME_PERIOD_US)
    elif config.input_kind is InputKind.IMAGE_DIR:
        names = sorted(
            n
            for n in os.listdir(config.input)
            if os.path.splitext(n)[1].lower() in IMAGE_EXTENSIONS
        )
        if not names:
            raise ConfigError(f"no images in {config.input}")
        for i, name in enumerate(names):
            yield load_image_rgb(os.path.join(config.input, name), i * FRAME_PERIOD_US)
    elif config.input_kind is InputKind.VIDEO:
        capture = cv2.VideoCapture(config.input)
        if not capture.isOpened():
            raise ConfigError(f"unreadable video: {config.input}")
        i = 0
        try:
            while True:
                ok, bgr = capture.read()
                if not ok:
                    break
                yield frame_from_rgb(bgr[:, :, ::-1], i * FRAME_PERIOD_US)
                i += 1
        finally:
            capture.release()
    else:
        raise ConfigError("live camera input is not valid in offline mode (use --serve)")


def event_log_line(ready: DetectionsReady, cue: CueReady, target: str) -> str:
    """One JSONL record per processed frame (the offline event-log format)."""
    record = {
        "frame_id": ready.frame_id,
        "cue": cue.event.kind.value,
        "target": target,
        "detections": [
            {"label": d.label, "score": d.score, "bbox": d.bbox.as_list()}
            for d in ready.detections
        ],
        "latency_ms": ready.latency_ms,
    }
    return json.dumps(record, separators=(",", ":"))


def run_offline(config: RunConfig) -> int:
    """Process all fixture frames; write JSONL log, cue WAV, annotated frames.

    Exit codes: 0 success, 2 configuration/input error, 3 backend failure.
    """
    try:
        backend = build_backend(config)
        if not config.target:
            raise ConfigError("--target is required for offline runs")
        if config.target not in backend.spec.label_set:
            raise UnknownLabelError(
                config.target, suggest_labels(config.target, backend.spec.label_set)
            )
        frames = iter_frames(config, backend)
    except BackendUnavailable as exc:
        print(f"backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (ConfigError, UnknownLabelError, TraceParseError, LabelFileError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if config.out_frames:
        os.makedirs(config.out_frames, exist_ok=True)

    log_lines: List[str] = []
    bursts: List[StereoBuffer] = []
    try:
        for frame_id, frame in enumerate(frames):
            try:
                ready, cue = process_frame(
                    frame,
                    frame_id,
                    backend,
                    config.target,
                    config.min_score,
                    measure_latency=False,
                )
            except Exception as exc:
                print(f"backend failure on frame {frame_id}: {exc}", file=sys.stderr)
                return EXIT_BACKEND
            log_lines.append(event_log_line(ready, cue, config.target))
            if config.out_wav:
                bursts.append(synth_cue(cue.event, config.audio))
            if config.out_frames:
                annotated = draw_detections(to_bgr(frame), ready.detections, config.target)
                cv2.imwrite(
                    os.path.join(config.out_frames, f"frame_{frame_id:05d}.png"), annotated
                )
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if config.out_log:
        with open(config.out_log, "w", encoding="utf-8") as fh:
            fh.write("\n".join(log_lines))
            if log_lines:
                fh.write("\n")
    if config.out_wav and bursts:
        write_wav(config.out_wav, concat(bursts))
    return EXIT_OK
