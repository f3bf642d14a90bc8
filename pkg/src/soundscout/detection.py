"""Pure logic: pick the object of interest and map it to a sound-cue zone.

Everything here is a function over immutable inputs and is safe to call from
any thread.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .models import BBox, CueEvent, CueKind, Detection, RectPx, ScreenParams, Zone

DEFAULT_MIN_SCORE = 0.40

_ONE_THIRD = 1.0 / 3.0
_TWO_THIRDS = 2.0 / 3.0


def filter_target(
    detections: Iterable[Detection],
    target_label: str,
    min_score: float = DEFAULT_MIN_SCORE,
) -> Optional[Detection]:
    """Keep the highest-confidence instance of ``target_label`` at or above ``min_score``.

    Ties keep the detection appearing earliest in input order, so the result
    is reproducible for a fixed backend output. Returns None when nothing
    qualifies; an empty frame is a normal outcome, not an error.
    """
    if not 0.0 <= min_score <= 1.0:
        raise ValueError(f"min_score outside [0, 1]: {min_score}")
    best: Optional[Detection] = None
    for det in detections:
        if det.label != target_label or det.score < min_score:
            continue
        if best is None or det.score > best.score:
            best = det
    return best


def zone_of_center(x_c: float) -> Zone:
    """Map a normalized horizontal center to one of three equal bands.

    The center band is closed: x_c of exactly 1/3 or 2/3 is CENTER.
    """
    if x_c < _ONE_THIRD:
        return Zone.LEFT
    if x_c <= _TWO_THIRDS:
        return Zone.CENTER
    return Zone.RIGHT


def classify_position(bbox: BBox) -> Zone:
    """Zone of a detection, judged by its horizontal bbox center."""
    return zone_of_center(bbox.center_x)


def scale_bbox(bbox: BBox, params: ScreenParams) -> RectPx:
    """Map a normalized model-space box to display pixel coordinates."""
    return RectPx(
        left=bbox.x_min * params.model_w * params.scale + params.offset_x,
        top=bbox.y_min * params.model_h * params.scale + params.offset_y,
        right=bbox.x_max * params.model_w * params.scale + params.offset_x,
        bottom=bbox.y_max * params.model_h * params.scale + params.offset_y,
    )


def inverse_scale_bbox(rect: RectPx, params: ScreenParams) -> BBox:
    """Invert :func:`scale_bbox`: display pixels back to normalized model space."""
    return BBox(
        x_min=(rect.left - params.offset_x) / params.scale / params.model_w,
        y_min=(rect.top - params.offset_y) / params.scale / params.model_h,
        x_max=(rect.right - params.offset_x) / params.scale / params.model_w,
        y_max=(rect.bottom - params.offset_y) / params.scale / params.model_h,
    )


def unletterbox_bbox(bbox: BBox, params: ScreenParams) -> BBox:
    """Map a box normalized to the letterboxed canvas back to source-frame coordinates.

    ``params`` is the mapping returned by ``imaging.center_fit`` (source frame
    on the model side, canvas on the display side). Detector outputs that are
    relative to the model input go through this before any downstream math.
    Results are clamped to [0, 1]; boxes fully inside the padding collapse to
    a zero-area box on the nearest edge.
    """

    def _x(v: float) -> float:
        px = v * params.display_w
        return min(1.0, max(0.0, (px - params.offset_x) / params.scale / params.model_w))

    def _y(v: float) -> float:
        px = v * params.display_h
        return min(1.0, max(0.0, (px - params.offset_y) / params.scale / params.model_h))

    return BBox(_x(bbox.x_min), _y(bbox.y_min), _x(bbox.x_max), _y(bbox.y_max))


def decide_cue(selected: Optional[Detection], timestamp_us: int = 0) -> CueEvent:
    """Silence when the target is absent, otherwise the detection's zone."""
    if selected is None:
        return CueEvent(CueKind.SILENCE, timestamp_us)
    return CueEvent(CueKind.from_zone(classify_position(selected.bbox)), timestamp_us)
