"""Run configuration shared by the CLI, the offline runner, and the service."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from .audio import AudioConfig
from .detection import DEFAULT_MIN_SCORE

VIDEO_EXTENSIONS = {".mp4", ".avi", ".mov", ".mkv", ".webm"}


class ConfigError(ValueError):
    """Invalid or contradictory run configuration (CLI exit code 2)."""


class InputKind(str, Enum):
    IMAGE_DIR = "image_dir"
    VIDEO = "video"
    TRACE = "trace"
    CAMERA = "camera"


def infer_input_kind(source: str) -> InputKind:
    """Classify the single --input argument.

    ``camera:N`` (or a bare device number) selects a live camera; a directory
    is an image sequence; known video extensions are video fixtures; any
    other existing file is a detection trace.
    """
    if source.startswith("camera:") or source.isdigit():
        return InputKind.CAMERA
    if os.path.isdir(source):
        return InputKind.IMAGE_DIR
    if os.path.isfile(source):
        ext = os.path.splitext(source)[1].lower()
        return InputKind.VIDEO if ext in VIDEO_EXTENSIONS else InputKind.TRACE
    raise ConfigError(f"input source not found: {source}")


@dataclass
class RunConfig:
    """Everything one offline run or one service instance needs."""

    input: str
    backend: str = "mock"  # "mock" | "model"
    model_path: Optional[str] = None
    labels_path: Optional[str] = None
    input_size: Tuple[int, int] = (448, 448)
    target: Optional[str] = None
    min_score: float = DEFAULT_MIN_SCORE
    audio: AudioConfig = field(default_factory=AudioConfig)
    out_log: Optional[str] = None
    out_wav: Optional[str] = None
    out_frames: Optional[str] = None
    serve: bool = False
    port: int = 8765
    fps: float = 10.0

    def __post_init__(self) -> None:
        self.input_kind = infer_input_kind(self.input)
        if self.backend not in ("mock", "model"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.backend == "mock" and self.input_kind is not InputKind.TRACE:
            raise ConfigError("the mock backend needs a trace file as --input")
        if self.backend == "model" and not self.model_path:
            raise ConfigError("--model is required with --backend model")
        if not 0.0 <= self.min_score <= 1.0:
            raise ConfigError(f"--min-score outside [0, 1]: {self.min_score}")
        if self.fps <= 0:
            raise ConfigError(f"fps must be positive: {self.fps}")
        outputs = [p for p in (self.out_log, self.out_wav, self.out_frames) if p]
        if len(outputs) != len(set(outputs)):
            raise ConfigError("output paths must be distinct")

    @property
    def camera_id(self) -> int:
        if self.input_kind is not InputKind.CAMERA:
            raise ConfigError("not a camera input")
        return int(self.input.split(":", 1)[1]) if ":" in self.input else int(self.input)
