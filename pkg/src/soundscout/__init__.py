"""soundscout: find an object class in camera frames, point at it with stereo sound.

The core loop: convert and letterbox each frame, run a detector backend,
keep the best-scoring instance of the selected class, classify its
horizontal position into left/center/right, and ring the matching ear(s).
Ships an offline fixture runner, a live WebSocket service, and a
deterministic trace-driven mock detector for tests.
"""

from .audio import AudioConfig, CueStreamer, StereoBuffer, cue_stream, synth_cue, write_wav
from .backends import (
    BackendUnavailable,
    DetectorBackend,
    ModelSpec,
    RawDetections,
    TraceBackend,
    canonicalize,
    coco_labels,
    load_labels,
    mock_from_trace,
)
from .config import ConfigError, InputKind, RunConfig
from .detection import (
    DEFAULT_MIN_SCORE,
    classify_position,
    decide_cue,
    filter_target,
    inverse_scale_bbox,
    scale_bbox,
    unletterbox_bbox,
    zone_of_center,
)
from .imaging import (
    FrameBuffer,
    PixelFormat,
    center_fit,
    frame_from_bgra,
    frame_from_rgb,
    frame_from_yuv420,
    yuv420_to_bgra8888,
)
from .models import BBox, CueEvent, CueKind, Detection, RectPx, ScreenParams, Zone
from .pipeline import (
    BackendError,
    CueReady,
    DetectionsReady,
    FrameDropped,
    Pipeline,
    PipelineStage,
    PipelineState,
    TargetChanged,
    UnknownLabelError,
    process_frame,
)

__version__ = "0.1.0"

__all__ = [
    "AudioConfig",
    "BBox",
    "BackendError",
    "BackendUnavailable",
    "ConfigError",
    "CueEvent",
    "CueKind",
    "CueReady",
    "CueStreamer",
    "DEFAULT_MIN_SCORE",
    "Detection",
    "DetectionsReady",
    "DetectorBackend",
    "FrameBuffer",
    "FrameDropped",
    "InputKind",
    "ModelSpec",
    "Pipeline",
    "PipelineStage",
    "PipelineState",
    "PixelFormat",
    "RawDetections",
    "RectPx",
    "RunConfig",
    "ScreenParams",
    "StereoBuffer",
    "TargetChanged",
    "TraceBackend",
    "UnknownLabelError",
    "Zone",
    "canonicalize",
    "center_fit",
    "classify_position",
    "coco_labels",
    "cue_stream",
    "decide_cue",
    "filter_target",
    "frame_from_bgra",
    "frame_from_rgb",
    "frame_from_yuv420",
    "inverse_scale_bbox",
    "load_labels",
    "mock_from_trace",
    "process_frame",
    "scale_bbox",
    "synth_cue",
    "unletterbox_bbox",
    "write_wav",
    "yuv420_to_bgra8888",
    "zone_of_center",
]
