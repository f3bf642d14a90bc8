"""Real-time orchestration: frames in, detection on a worker, cue events out.

The producer (camera or CLI driver) and the single detection worker talk
exclusively through a capacity-1 latest-wins mailbox; there is no shared
mutable frame state. Event consumers subscribe to an ordered stream and each
get their own thread-safe queue, so a slow consumer never stalls the worker.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .backends import DetectorBackend
from .detection import (
    DEFAULT_MIN_SCORE,
    decide_cue,
    filter_target,
    unletterbox_bbox,
)
from .imaging import FrameBuffer, center_fit
from .models import CueEvent, Detection


class PipelineStage(str, Enum):
    IDLE = "idle"
    TARGET_SELECTED = "target_selected"
    RUNNING = "running"


@dataclass(frozen=True)
class PipelineState:
    stage: PipelineStage
    target: Optional[str] = None


@dataclass(frozen=True)
class DetectionsReady:
    """All detections for one frame (kept for overlays) plus worker latency."""

    frame_id: int
    detections: Tuple[Detection, ...]
    latency_ms: float


@dataclass(frozen=True)
class CueReady:
    frame_id: int
    event: CueEvent


@dataclass(frozen=True)
class FrameDropped:
    frame_id: int


@dataclass(frozen=True)
class BackendError:
    message: str


@dataclass(frozen=True)
class TargetChanged:
    label: str


PipelineEvent = Union[DetectionsReady, CueReady, FrameDropped, BackendError, TargetChanged]


class UnknownLabelError(ValueError):
    """Requested label is not in the active label set; carries suggestions."""

    def __init__(self, label: str, suggestions: Sequence[str]) -> None:
        self.label = label
        self.suggestions = list(suggestions)
        hint = f" (close: {', '.join(self.suggestions)})" if self.suggestions else ""
        super().__init__(f"unknown label {label!r}{hint}")


def suggest_labels(query: str, labels: Sequence[str], limit: int = 5) -> List[str]:
    """Labels sharing the longest possible prefix with ``query``."""
    for k in range(len(query), 0, -1):
        prefix = query[:k]
        matches = [label for label in labels if label.startswith(prefix)]
        if matches:
            return matches[:limit]
    return []


def process_frame(
    frame: FrameBuffer,
    frame_id: int,
    backend: DetectorBackend,
    target_label: str,
    min_score: float = DEFAULT_MIN_SCORE,
    measure_latency: bool = True,
) -> Tuple[DetectionsReady, CueReady]:
    """Run one frame through the full path: fit, detect, filter, decide.

    With ``measure_latency`` off (offline mode) the recorded latency is the
    backend's scripted value, keeping event logs byte-reproducible.
    """
    spec = backend.spec
    started = time.perf_counter()
    fitted, params = center_fit(frame, spec.input_w, spec.input_h)
    detections = backend.detect(fitted, frame_id)
    if backend.boxes_in_input_space:
        detections = [
            Detection(d.label, d.score, unletterbox_bbox(d.bbox, params))
            for d in detections
        ]
    if measure_latency:
        latency_ms = (time.perf_counter() - started) * 1000.0
    else:
        latency_ms = float(getattr(backend, "synthetic_latency_ms", 0.0))

    selected = filter_target(detections, target_label, min_score)
    cue = decide_cue(selected, timestamp_us=frame.timestamp_us)
    return (
        DetectionsReady(frame_id, tuple(detections), latency_ms),
        CueReady(frame_id, cue),
    )


class _Mailbox:
    """Capacity-1 slot: putting over an unconsumed item replaces it."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._item: Optional[Tuple[int, FrameBuffer]] = None

    def put(self, item: Tuple[int, FrameBuffer]) -> Optional[Tuple[int, FrameBuffer]]:
        with self._cond:
            replaced, self._item = self._item, item
            self._cond.notify()
            return replaced

    def take(self, timeout: float) -> Optional[Tuple[int, FrameBuffer]]:
        with self._cond:
            if self._item is None:
                self._cond.wait(timeout)
            item, self._item = self._item, None
            return item

    def empty(self) -> bool:
        with self._cond:
            return self._item is None


class Pipeline:
    """Owns the state machine, the worker thread, and the event stream.

    Cues are emitted only while RUNNING. submit_frame never blocks on
    inference: when the worker is busy the previously queued frame is
    replaced (latest wins) and a FrameDropped event is emitted for it.
    """

    def __init__(self, backend: DetectorBackend, min_score: float = DEFAULT_MIN_SCORE) -> None:
        if not 0.0 <= min_score <= 1.0:
            raise ValueError(f"min_score outside [0, 1]: {min_score}")
        self.backend = backend
        self.min_score = min_score
        self._lock = threading.Lock()
        self._stage = PipelineStage.IDLE
        self._target: Optional[str] = None
        self._mailbox = _Mailbox()
        self._subscribers: List[queue.Queue] = []
        self._worker: Optional[threading.Thread] = None
        self._stop = threading.Event()
        self._next_frame_id = 0
        # frames submitted but not yet processed or dropped
        self._pending = 0
        self._quiet = threading.Condition(self._lock)

    # -- state machine ------------------------------------------------------

    @property
    def state(self) -> PipelineState:
        with self._lock:
            return PipelineState(self._stage, self._target)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.backend.spec.label_set)

    def set_target(self, label: str) -> PipelineState:
        """Select the object of interest; effective from the next processed frame."""
        if label not in self.backend.spec.label_set:
            raise UnknownLabelError(label, suggest_labels(label, self.backend.spec.label_set))
        with self._lock:
            self._target = label
            if self._stage is PipelineStage.IDLE:
                self._stage = PipelineStage.TARGET_SELECTED
        self._emit(TargetChanged(label))
        return self.state

    def start(self) -> None:
        """TargetSelected -> Running: spawn the worker and accept frames."""
        with self._lock:
            if self._target is None:
                raise RuntimeError("no target selected")
            if self._stage is PipelineStage.RUNNING:
                return
            self._stage = PipelineStage.RUNNING
            self._stop.clear()
            self._worker = threading.Thread(
                target=self._worker_loop, name="soundscout-detector", daemon=True
            )
            self._worker.start()

    def stop(self) -> None:
        """Any state -> Idle; joins the worker."""
        with self._lock:
            self._stage = PipelineStage.IDLE
            self._target = None
            worker, self._worker = self._worker, None
        self._stop.set()
        if worker is not None:
            worker.join(timeout=5.0)

    # -- frames and events --------------------------------------------------

    def submit_frame(self, frame: FrameBuffer, frame_id: Optional[int] = None) -> bool:
        """Enqueue a frame; False (not an error) when the pipeline is not running.

        Callers that already number their frames (the live service) may pass
        their own id; ids must increase monotonically within a run.
        """
        with self._lock:
            if self._stage is not PipelineStage.RUNNING:
                return False
            if frame_id is None:
                frame_id = self._next_frame_id
            elif frame_id < self._next_frame_id:
                raise ValueError(
                    f"frame_id {frame_id} not increasing (next is {self._next_frame_id})"
                )
            self._next_frame_id = frame_id + 1
            self._pending += 1
        replaced = self._mailbox.put((frame_id, frame))
        if replaced is not None:
            self._resolve_one()
            self._emit(FrameDropped(replaced[0]))
        return True

    def subscribe(self) -> "queue.Queue[PipelineEvent]":
        sub: "queue.Queue[PipelineEvent]" = queue.Queue()
        with self._lock:
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: "queue.Queue[PipelineEvent]") -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    def drain(self, timeout: float = 5.0) -> bool:
        """Block until every submitted frame has been processed or dropped."""
        deadline = time.monotonic() + timeout
        with self._quiet:
            while self._pending > 0:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return False
                self._quiet.wait(remaining)
        return True

    def _resolve_one(self) -> None:
        with self._quiet:
            self._pending -= 1
            if self._pending <= 0:
                self._quiet.notify_all()

    def _emit(self, event: PipelineEvent) -> None:
        with self._lock:
            subscribers = list(self._subscribers)
        for sub in subscribers:
            sub.put(event)

    def _worker_loop(self) -> None:
        while not self._stop.is_set():
            item = self._mailbox.take(timeout=0.05)
            if item is None:
                continue
            try:
                frame_id, frame = item
                with self._lock:
                    target = self._target
                    min_score = self.min_score
                if target is None:
                    continue
                try:
                    ready, cue = process_frame(
                        frame, frame_id, self.backend, target, min_score
                    )
                except Exception as exc:  # report and keep serving frames
                    self._emit(BackendError(str(exc)))
                    continue
                self._emit(ready)
                self._emit(cue)
            finally:
                self._resolve_one()
