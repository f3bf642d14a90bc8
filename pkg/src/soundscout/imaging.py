"""Frame containers, YUV420-to-BGRA conversion, and model-input letterboxing.

All transformations are pure: a FrameBuffer is immutable after construction
and different frames may be converted on different threads concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import cv2
import numpy as np

from .models import ScreenParams


class PixelFormat(str, Enum):
    YUV420_PLANAR = "yuv420p"
    BGRA8888 = "bgra8888"
    RGB888 = "rgb888"


_PACKED_CHANNELS = {PixelFormat.BGRA8888: 4, PixelFormat.RGB888: 3}


@dataclass(frozen=True)
class FrameBuffer:
    """Raw pixel data plus geometry and a monotonic timestamp.

    Planes are 2-D uint8 arrays of shape (rows, stride_bytes); a stride may
    exceed the nominal row width, mirroring how camera stacks hand buffers
    over. Packed formats use a single plane of ``width * channels`` bytes per
    row. Planes are frozen (non-writeable) at construction.
    """

    width: int
    height: int
    format: PixelFormat
    planes: Tuple[np.ndarray, ...]
    timestamp_us: int = 0

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"zero-dimension frame: {self.width}x{self.height}")
        for plane in self.planes:
            if plane.dtype != np.uint8 or plane.ndim != 2:
                raise ValueError("planes must be 2-D uint8 arrays")
        if self.format is PixelFormat.YUV420_PLANAR:
            self._check_yuv420()
        else:
            self._check_packed()
        for plane in self.planes:
            plane.setflags(write=False)

    def _check_yuv420(self) -> None:
        if len(self.planes) != 3:
            raise ValueError("YUV420 needs exactly 3 planes (Y, U, V)")
        y, u, v = self.planes
        cw, ch = self.chroma_size
        if y.shape[0] != self.height or y.shape[1] < self.width:
            raise ValueError(f"Y plane {y.shape} inconsistent with {self.width}x{self.height}")
        for name, plane in (("U", u), ("V", v)):
            if plane.shape[0] != ch or plane.shape[1] < cw:
                raise ValueError(f"{name} plane {plane.shape} inconsistent with chroma {cw}x{ch}")

    def _check_packed(self) -> None:
        if len(self.planes) != 1:
            raise ValueError(f"{self.format.value} is single-plane")
        row_bytes = self.width * _PACKED_CHANNELS[self.format]
        plane = self.planes[0]
        if plane.shape[0] != self.height or plane.shape[1] < row_bytes:
            raise ValueError(
                f"plane {plane.shape} inconsistent with {self.width}x{self.height} {self.format.value}"
            )

    @property
    def chroma_size(self) -> Tuple[int, int]:
        """(width, height) of the U and V planes for 4:2:0 subsampling."""
        return math.ceil(self.width / 2), math.ceil(self.height / 2)

    def pixels(self) -> np.ndarray:
        """Packed view (height, width, channels), stride padding sliced off."""
        channels = _PACKED_CHANNELS.get(self.format)
        if channels is None:
            raise ValueError("pixels() is only defined for packed formats")
        row_bytes = self.width * channels
        return np.ascontiguousarray(self.planes[0][:, :row_bytes]).reshape(
            self.height, self.width, channels
        )


def frame_from_rgb(rgb: np.ndarray, timestamp_us: int = 0) -> FrameBuffer:
    """Wrap an (h, w, 3) uint8 RGB array."""
    h, w, c = rgb.shape
    if c != 3:
        raise ValueError(f"expected 3 channels, got {c}")
    plane = np.ascontiguousarray(rgb, dtype=np.uint8).reshape(h, w * 3).copy()
    return FrameBuffer(w, h, PixelFormat.RGB888, (plane,), timestamp_us)


def frame_from_bgra(bgra: np.ndarray, timestamp_us: int = 0) -> FrameBuffer:
    """Wrap an (h, w, 4) uint8 BGRA array."""
    h, w, c = bgra.shape
    if c != 4:
        raise ValueError(f"expected 4 channels, got {c}")
    plane = np.ascontiguousarray(bgra, dtype=np.uint8).reshape(h, w * 4).copy()
    return FrameBuffer(w, h, PixelFormat.BGRA8888, (plane,), timestamp_us)


def frame_from_yuv420(
    y: np.ndarray, u: np.ndarray, v: np.ndarray, timestamp_us: int = 0
) -> FrameBuffer:
    """Wrap planar Y, U, V arrays; frame size is taken from the Y plane."""
    h, w = y.shape
    planes = tuple(np.ascontiguousarray(p, dtype=np.uint8).copy() for p in (y, u, v))
    return FrameBuffer(w, h, PixelFormat.YUV420_PLANAR, planes, timestamp_us)


def load_image_rgb(path: str, timestamp_us: int = 0) -> FrameBuffer:
    """Read a PNG/PPM/JPEG fixture from disk into an RGB888 frame."""
    bgr = cv2.imread(str(path), cv2.IMREAD_COLOR)
    if bgr is None:
        raise IOError(f"unreadable image: {path}")
    return frame_from_rgb(bgr[:, :, ::-1], timestamp_us)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0.0, np.floor(x + 0.5), np.ceil(x - 0.5))


def yuv420_to_bgra8888(frame: FrameBuffer) -> FrameBuffer:
    """Convert planar YUV420 to packed BGRA8888 with full-range BT.601.

    Per pixel, with U/V sampled at (x//2, y//2) (nearest/floor upsampling):

        R = Y + 1.402 (V-128)
        G = Y - 0.344136 (U-128) - 0.714136 (V-128)
        B = Y + 1.772 (U-128)

    Channels are rounded half-away-from-zero, clamped to [0, 255]; alpha is
    255. Width, height, and timestamp carry over unchanged.
    """
    if frame.format is not PixelFormat.YUV420_PLANAR:
        raise ValueError(f"expected YUV420 planar input, got {frame.format.value}")
    w, h = frame.width, frame.height
    cw, ch = frame.chroma_size

    y = frame.planes[0][:, :w].astype(np.float64)
    u = frame.planes[1][:ch, :cw]
    v = frame.planes[2][:ch, :cw]
    u_full = np.repeat(np.repeat(u, 2, axis=0), 2, axis=1)[:h, :w].astype(np.float64) - 128.0
    v_full = np.repeat(np.repeat(v, 2, axis=0), 2, axis=1)[:h, :w].astype(np.float64) - 128.0

    r = y + 1.402 * v_full
    g = y - 0.344136 * u_full - 0.714136 * v_full
    b = y + 1.772 * u_full

    out = np.empty((h, w, 4), dtype=np.uint8)
    for i, channel in enumerate((b, g, r)):
        out[:, :, i] = np.clip(_round_half_away(channel), 0.0, 255.0).astype(np.uint8)
    out[:, :, 3] = 255
    return FrameBuffer(
        w, h, PixelFormat.BGRA8888, (out.reshape(h, w * 4),), frame.timestamp_us
    )


def center_fit(
    frame: FrameBuffer, target_w: int, target_h: int, pad_value: int = 0
) -> Tuple[FrameBuffer, ScreenParams]:
    """Scale a packed frame to fit inside target dimensions, centered.

    Aspect ratio is preserved (bilinear resampling); the remaining canvas is
    filled with ``pad_value``. The returned ScreenParams maps source-frame
    pixels onto the canvas, so its inverse takes detections reported against
    the canvas back to the original frame.
    """
    if target_w <= 0 or target_h <= 0:
        raise ValueError(f"zero-dimension target: {target_w}x{target_h}")
    if frame.format not in _PACKED_CHANNELS:
        raise ValueError(f"center_fit expects a packed frame, got {frame.format.value}")
    if not 0 <= pad_value <= 255:
        raise ValueError(f"pad_value outside [0, 255]: {pad_value}")

    arr = frame.pixels()
    channels = arr.shape[2]
    params = ScreenParams.contain_fit(frame.width, frame.height, target_w, target_h)
    scaled_w = max(1, int(round(frame.width * params.scale)))
    scaled_h = max(1, int(round(frame.height * params.scale)))

    if (scaled_w, scaled_h) == (frame.width, frame.height):
        resized = arr
    else:
        resized = cv2.resize(arr, (scaled_w, scaled_h), interpolation=cv2.INTER_LINEAR)

    canvas = np.full((target_h, target_w, channels), pad_value, dtype=np.uint8)
    left = (target_w - scaled_w) // 2
    top = (target_h - scaled_h) // 2
    canvas[top : top + scaled_h, left : left + scaled_w] = resized

    fitted = FrameBuffer(
        target_w,
        target_h,
        frame.format,
        (canvas.reshape(target_h, target_w * channels),),
        frame.timestamp_us,
    )
    return fitted, params


def to_bgr(frame: FrameBuffer) -> np.ndarray:
    """(h, w, 3) BGR array for drawing or JPEG encoding."""
    if frame.format is PixelFormat.YUV420_PLANAR:
        frame = yuv420_to_bgra8888(frame)
    arr = frame.pixels()
    if frame.format is PixelFormat.BGRA8888:
        return np.ascontiguousarray(arr[:, :, :3])
    return np.ascontiguousarray(arr[:, :, ::-1])
