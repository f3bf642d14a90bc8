"""Domain types shared by the detection, imaging, audio, and pipeline layers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Zone(str, Enum):
    """Horizontal third of the frame a detection falls into."""

    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


class CueKind(str, Enum):
    """Routing of a sound cue: one ear, both ears, or nothing."""

    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"
    SILENCE = "silence"

    @classmethod
    def from_zone(cls, zone: Zone) -> "CueKind":
        return cls(zone.value)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box with corners normalized to [0, 1] of the frame."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.x_min <= self.x_max <= 1.0:
            raise ValueError(f"invalid x extent [{self.x_min}, {self.x_max}]")
        if not 0.0 <= self.y_min <= self.y_max <= 1.0:
            raise ValueError(f"invalid y extent [{self.y_min}, {self.y_max}]")

    @property
    def center_x(self) -> float:
        return (self.x_min + self.x_max) / 2.0

    def as_list(self) -> list[float]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


@dataclass(frozen=True)
class Detection:
    """One detected object: class label, confidence, normalized location."""

    label: str
    score: float
    bbox: BBox

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("empty detection label")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score outside [0, 1]: {self.score}")


@dataclass(frozen=True)
class CueEvent:
    """The sonification command derived from one processed frame."""

    kind: CueKind
    frame_timestamp_us: int = 0


@dataclass(frozen=True)
class RectPx:
    """Rectangle in display pixel coordinates (sub-pixel precision kept)."""

    left: float
    top: float
    right: float
    bottom: float


@dataclass(frozen=True)
class ScreenParams:
    """Affine mapping from model-space pixels to display-space pixels.

    Per axis: display = model_px * scale + offset. Instances built through
    :meth:`contain_fit` follow the aspect-preserving letterbox policy, which
    is the only construction used by this package; the mapping stays
    invertible because scale must be positive.
    """

    model_w: int
    model_h: int
    display_w: int
    display_h: int
    scale: float
    offset_x: float
    offset_y: float

    def __post_init__(self) -> None:
        if min(self.model_w, self.model_h, self.display_w, self.display_h) <= 0:
            raise ValueError("all dimensions must be positive")
        if not self.scale > 0.0:
            raise ValueError(f"non-invertible scale: {self.scale}")

    @classmethod
    def contain_fit(
        cls, model_w: int, model_h: int, display_w: int, display_h: int
    ) -> "ScreenParams":
        """Aspect-preserving fit of the model region inside the display, centered."""
        scale = min(display_w / model_w, display_h / model_h)
        # max() guards the tied axis against float noise pushing offsets below 0
        return cls(
            model_w=model_w,
            model_h=model_h,
            display_w=display_w,
            display_h=display_h,
            scale=scale,
            offset_x=max(0.0, (display_w - model_w * scale) / 2.0),
            offset_y=max(0.0, (display_h - model_h * scale) / 2.0),
        )
