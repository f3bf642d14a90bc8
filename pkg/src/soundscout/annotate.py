"""Draws detection boxes over frames for human inspection."""

from __future__ import annotations

from typing import Iterable, Optional

import cv2
import numpy as np

from .detection import classify_position, scale_bbox
from .models import Detection, ScreenParams, Zone

# BGR. One fixed color per cue zone; everything that is not the target is gray.
ZONE_COLORS = {
    Zone.LEFT: (255, 160, 0),
    Zone.CENTER: (0, 200, 0),
    Zone.RIGHT: (0, 64, 255),
}
OTHER_COLOR = (140, 140, 140)
THICKNESS = 2


def draw_detections(
    bgr: np.ndarray,
    detections: Iterable[Detection],
    target_label: Optional[str],
    params: Optional[ScreenParams] = None,
) -> np.ndarray:
    """Return a copy of ``bgr`` with 2 px boxes and label+score captions.

    Target-class boxes use their zone color; other classes are gray. When
    ``params`` is omitted an identity mapping over the image size is used.
    """
    out = bgr.copy()
    h, w = out.shape[:2]
    if params is None:
        params = ScreenParams(w, h, w, h, 1.0, 0.0, 0.0)
    for det in detections:
        rect = scale_bbox(det.bbox, params)
        color = (
            ZONE_COLORS[classify_position(det.bbox)]
            if det.label == target_label
            else OTHER_COLOR
        )
        p0 = (int(round(rect.left)), int(round(rect.top)))
        p1 = (int(round(rect.right)), int(round(rect.bottom)))
        cv2.rectangle(out, p0, p1, color, THICKNESS)
        caption = f"{det.label} {det.score:.2f}"
        cv2.putText(
            out,
            caption,
            (p0[0], max(12, p0[1] - 4)),
            cv2.FONT_HERSHEY_SIMPLEX,
            0.45,
            color,
            1,
            cv2.LINE_AA,
        )
    return out
