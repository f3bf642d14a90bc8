"""Pluggable object-detector backends.

Two implementations ship: a deterministic trace-driven mock (the test and CI
workhorse) and an adapter for a pretrained detection model executed through
the TFLite interpreter. Both normalize their raw outputs into canonical
``Detection`` values at the boundary, so all downstream math sees one box
order and clamped coordinates.

A backend instance is owned by exactly one worker at a time; instances may be
handed between threads but not shared. The mock is immutable after load.
"""

from __future__ import annotations

import importlib.resources
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .imaging import FrameBuffer, PixelFormat
from .models import BBox, Detection

# Published figures for the EfficientDet-D2 checkpoint commonly paired with
# this kind of assistive loop. Metadata only: nothing here is ever recomputed.
EFFICIENTDET_D2_METRICS: Mapping[str, float] = {
    "AP_test": 43.9,
    "AP_50": 62.7,
    "AP_75": 47.6,
    "AP_S": 22.9,
    "AP_M": 48.1,
    "AP_L": 59.5,
    "AP_val": 43.5,
    "parameters": 8.1e6,
    "flops": 11.0e9,
}

DEFAULT_INPUT_SIZE = 448


class BackendUnavailable(RuntimeError):
    """Model file missing/corrupt, or the inference runtime cannot start."""


class ShapeMismatch(RuntimeError):
    """Runtime outputs do not fit the raw-detections contract."""


class TraceParseError(ValueError):
    """Malformed trace line; message carries the 1-based line number."""


class LabelFileError(ValueError):
    """Empty labelmap or duplicate label."""


@dataclass(frozen=True)
class ModelSpec:
    """Static description of a detector: input geometry, labels, metadata."""

    name: str
    input_w: int
    input_h: int
    label_set: Tuple[str, ...]
    score_is_probability: bool = True
    reported_metrics: Optional[Mapping[str, float]] = None

    def __post_init__(self) -> None:
        if self.input_w <= 0 or self.input_h <= 0:
            raise ValueError(f"invalid input size {self.input_w}x{self.input_h}")
        if not self.label_set:
            raise ValueError("label_set must be non-empty")
        if len(set(self.label_set)) != len(self.label_set):
            raise ValueError("label_set entries must be unique")


@dataclass
class RawDetections:
    """Detector-native output: boxes in (y_min, x_min, y_max, x_max) order."""

    boxes: Sequence[Tuple[float, float, float, float]]
    class_indices: Sequence[int]
    scores: Sequence[float]
    count: int

    def __post_init__(self) -> None:
        shortest = min(len(self.boxes), len(self.class_indices), len(self.scores))
        if self.count < 0 or shortest < self.count:
            raise ValueError(f"count {self.count} exceeds output lists ({shortest})")


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


def canonicalize(raw: RawDetections, label_set: Sequence[str]) -> Tuple[List[Detection], int]:
    """Normalize raw outputs into valid Detections.

    Boxes flip from (y_min, x_min, y_max, x_max) to (x_min, y_min, x_max,
    y_max) and every coordinate is clamped to [0, 1] with corners reordered,
    so the result holds the bbox invariants no matter what the runtime
    emitted. Entries with out-of-range class indices or non-finite numbers
    are dropped, not raised: a live assistive loop prefers a skipped garbage
    box over a crash. Returns (detections, dropped_count).
    """
    detections: List[Detection] = []
    dropped = 0
    for i in range(raw.count):
        y0, x0, y1, x1 = (float(v) for v in raw.boxes[i])
        idx = int(raw.class_indices[i])
        score = float(raw.scores[i])
        if not all(np.isfinite(v) for v in (y0, x0, y1, x1, score)):
            dropped += 1
            continue
        if not 0 <= idx < len(label_set):
            dropped += 1
            continue
        xs = sorted((_clamp01(x0), _clamp01(x1)))
        ys = sorted((_clamp01(y0), _clamp01(y1)))
        detections.append(
            Detection(
                label=label_set[idx],
                score=_clamp01(score),
                bbox=BBox(xs[0], ys[0], xs[1], ys[1]),
            )
        )
    return detections, dropped


def load_labels(path: str) -> List[str]:
    """Read a labelmap: one label per line, UTF-8, file order preserved."""
    with open(path, encoding="utf-8") as fh:
        labels = [line.strip() for line in fh if line.strip()]
    if not labels:
        raise LabelFileError(f"empty labelmap: {path}")
    seen = set()
    for label in labels:
        if label in seen:
            raise LabelFileError(f"duplicate label {label!r} in {path}")
        seen.add(label)
    return labels


def coco_labels() -> List[str]:
    """The shipped 80-class COCO labelmap."""
    text = (
        importlib.resources.files("soundscout")
        .joinpath("data/coco_labels.txt")
        .read_text(encoding="utf-8")
    )
    return [line.strip() for line in text.splitlines() if line.strip()]


class DetectorBackend:
    """Interface every detector implements.

    ``detect`` must never block callers other than the one invoking it;
    ``boxes_in_input_space`` tells the pipeline whether boxes need mapping
    from the letterboxed model input back to the source frame.
    """

    spec: ModelSpec
    boxes_in_input_space: bool = False

    def detect(self, frame: FrameBuffer, frame_id: int) -> List[Detection]:
        raise NotImplementedError


class TraceBackend(DetectorBackend):
    """Deterministic mock: replays scripted detections per frame index.

    Frame indices without a trace entry yield empty lists. With ``loop`` the
    index wraps at the highest scripted frame (used by the live demo to
    replay a finite fixture forever); offline runs never loop.
    """

    boxes_in_input_space = False

    def __init__(
        self,
        entries: Dict[int, List[Detection]],
        spec: ModelSpec,
        loop: bool = False,
        synthetic_latency_ms: float = 0.0,
    ) -> None:
        self._entries = {k: tuple(v) for k, v in entries.items()}
        self.spec = spec
        self.loop = loop
        self.synthetic_latency_ms = synthetic_latency_ms
        self._period = (max(entries) + 1) if entries else 1

    @property
    def max_frame_index(self) -> int:
        return self._period - 1

    def scripted(self, frame_index: int) -> List[Detection]:
        """Trace entries for a frame index, without running the detect path."""
        index = frame_index % self._period if self.loop else frame_index
        return list(self._entries.get(index, ()))

    def detect(self, frame: FrameBuffer, frame_id: int) -> List[Detection]:
        if self.synthetic_latency_ms > 0:
            time.sleep(self.synthetic_latency_ms / 1000.0)
        return self.scripted(frame_id)


def _parse_trace_line(line: str, lineno: int, labels: Optional[Sequence[str]]) -> Tuple[int, Detection]:
    fields = line.split("\t")
    if len(fields) != 7:
        raise TraceParseError(f"line {lineno}: expected 7 tab-separated fields, got {len(fields)}")
    try:
        frame_index = int(fields[0])
        label = fields[1]
        score = float(fields[2])
        coords = tuple(float(v) for v in fields[3:7])
    except ValueError as exc:
        raise TraceParseError(f"line {lineno}: {exc}") from exc
    if frame_index < 0:
        raise TraceParseError(f"line {lineno}: negative frame index {frame_index}")
    if not label:
        raise TraceParseError(f"line {lineno}: empty label")
    if labels is not None and label not in labels:
        raise TraceParseError(f"line {lineno}: label {label!r} not in the active label set")
    if not 0.0 <= score <= 1.0:
        raise TraceParseError(f"line {lineno}: score {score} outside [0, 1]")
    try:
        bbox = BBox(*coords)
    except ValueError as exc:
        raise TraceParseError(f"line {lineno}: {exc}") from exc
    return frame_index, Detection(label, score, bbox)


def mock_from_trace(
    trace_path: str,
    labels: Optional[Sequence[str]] = None,
    loop: bool = False,
    synthetic_latency_ms: float = 0.0,
) -> TraceBackend:
    """Build the mock backend from a trace fixture.

    Format: one detection per line, tab-separated
    ``frame_index  label  score  x_min  y_min  x_max  y_max``; ``#`` starts a
    comment line. When ``labels`` is omitted the shipped COCO-80 set is the
    active label set and trace labels are validated against it.
    """
    label_list = list(labels) if labels is not None else coco_labels()
    entries: Dict[int, List[Detection]] = {}
    with open(trace_path, encoding="utf-8") as fh:
        for lineno, raw_line in enumerate(fh, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            frame_index, det = _parse_trace_line(line, lineno, label_list)
            entries.setdefault(frame_index, []).append(det)
    spec = ModelSpec(
        name="mock-trace",
        input_w=DEFAULT_INPUT_SIZE,
        input_h=DEFAULT_INPUT_SIZE,
        label_set=tuple(label_list),
    )
    return TraceBackend(entries, spec, loop=loop, synthetic_latency_ms=synthetic_latency_ms)


class TFLiteBackend(DetectorBackend):
    """Adapter for an EfficientDet-style .tflite detector.

    Expects the standard detection-postprocess signature: four output
    tensors (boxes [1,N,4] as y_min,x_min,y_max,x_max; classes [1,N];
    scores [1,N]; count [1]). Boxes are reported against the model input, so
    the pipeline un-letterboxes them. The TensorFlow import happens lazily:
    the whole primary test suite runs on the mock.
    """

    boxes_in_input_space = True

    def __init__(
        self,
        model_path: str,
        labels: Sequence[str],
        input_size: Optional[Tuple[int, int]] = None,
        name: str = "tflite-detector",
    ) -> None:
        if not os.path.isfile(model_path):
            raise BackendUnavailable(f"model file not found: {model_path}")
        try:
            from tensorflow.lite.python.interpreter import Interpreter
        except ImportError as exc:
            raise BackendUnavailable(f"tflite runtime unavailable: {exc}") from exc
        try:
            self._interpreter = Interpreter(model_path=model_path)
            self._interpreter.allocate_tensors()
        except Exception as exc:
            raise BackendUnavailable(f"cannot load model {model_path}: {exc}") from exc

        self._input_detail = self._interpreter.get_input_details()[0]
        in_shape = self._input_detail["shape"]
        model_h, model_w = int(in_shape[1]), int(in_shape[2])
        if input_size is not None and (model_w, model_h) != tuple(input_size):
            raise ShapeMismatch(
                f"configured input {input_size} != model input {(model_w, model_h)}"
            )
        self._outputs = self._map_outputs()
        self.dropped_raw = 0
        self.spec = ModelSpec(
            name=name,
            input_w=model_w,
            input_h=model_h,
            label_set=tuple(labels),
            score_is_probability=True,
            reported_metrics=EFFICIENTDET_D2_METRICS,
        )

    def _map_outputs(self) -> Dict[str, int]:
        details = self._interpreter.get_output_details()
        mapping: Dict[str, int] = {}
        flat: List[int] = []
        for detail in details:
            shape = tuple(int(d) for d in detail["shape"])
            if len(shape) == 3 and shape[-1] == 4:
                mapping["boxes"] = detail["index"]
            elif len(shape) <= 1 or shape == (1,):
                mapping["count"] = detail["index"]
            else:
                flat.append(detail["index"])
        # Remaining (1, N) tensors follow the conventional order: classes, scores.
        if len(flat) == 2:
            mapping["classes"], mapping["scores"] = flat
        if set(mapping) != {"boxes", "classes", "scores", "count"}:
            raise ShapeMismatch(
                f"unexpected output signature: {[tuple(d['shape']) for d in details]}"
            )
        return mapping

    def detect(self, frame: FrameBuffer, frame_id: int) -> List[Detection]:
        arr = frame.pixels()
        if frame.format is PixelFormat.BGRA8888:
            arr = arr[:, :, 2::-1]  # BGRA -> RGB
        h, w = arr.shape[:2]
        if (w, h) != (self.spec.input_w, self.spec.input_h):
            raise ShapeMismatch(
                f"frame {w}x{h} not pre-sized to model input "
                f"{self.spec.input_w}x{self.spec.input_h}"
            )
        tensor = arr[np.newaxis, ...]
        if self._input_detail["dtype"] == np.float32:
            tensor = (tensor.astype(np.float32) - 127.5) / 127.5
        self._interpreter.set_tensor(self._input_detail["index"], tensor)
        self._interpreter.invoke()

        get = self._interpreter.get_tensor
        raw = RawDetections(
            boxes=[tuple(b) for b in get(self._outputs["boxes"])[0]],
            class_indices=[int(c) for c in get(self._outputs["classes"])[0]],
            scores=[float(s) for s in get(self._outputs["scores"])[0]],
            count=int(np.ravel(get(self._outputs["count"]))[0]),
        )
        detections, dropped = canonicalize(raw, self.spec.label_set)
        self.dropped_raw += dropped
        return detections
