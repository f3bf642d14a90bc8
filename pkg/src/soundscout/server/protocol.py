"""WebSocket wire protocol: JSON text messages validated by pydantic models.

Server to client: frame, detections, cue, state, error.
Client to server: select_target, set_audio, mute.
"""

from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from .. import pipeline as pl
from ..models import Detection


class ProtocolError(ValueError):
    """Message is not valid JSON or does not match any message type."""


class DetectionItem(BaseModel):
    label: str
    score: float = Field(ge=0.0, le=1.0)
    bbox: List[float] = Field(min_length=4, max_length=4)


class FrameMessage(BaseModel):
    type: Literal["frame"] = "frame"
    frame_id: int
    jpeg_b64: str


class DetectionsMessage(BaseModel):
    type: Literal["detections"] = "detections"
    frame_id: int
    items: List[DetectionItem]


class CueMessage(BaseModel):
    type: Literal["cue"] = "cue"
    frame_id: int
    zone: Literal["left", "center", "right", "silence"]


class StateMessage(BaseModel):
    type: Literal["state"] = "state"
    target: Optional[str] = None
    labels: List[str]


class ErrorMessage(BaseModel):
    type: Literal["error"] = "error"
    message: str


class SelectTargetCommand(BaseModel):
    type: Literal["select_target"] = "select_target"
    label: str


class SetAudioCommand(BaseModel):
    type: Literal["set_audio"] = "set_audio"
    frequency: Optional[float] = Field(default=None, gt=0)
    amplitude: Optional[float] = Field(default=None, gt=0, le=1)


class MuteCommand(BaseModel):
    type: Literal["mute"] = "mute"
    on: bool


ServerMessage = Union[FrameMessage, DetectionsMessage, CueMessage, StateMessage, ErrorMessage]
ClientCommand = Union[SelectTargetCommand, SetAudioCommand, MuteCommand]

_SERVER_ADAPTER: TypeAdapter = TypeAdapter(Annotated[ServerMessage, Field(discriminator="type")])
_CLIENT_ADAPTER: TypeAdapter = TypeAdapter(Annotated[ClientCommand, Field(discriminator="type")])


def serialize(message: Union[ServerMessage, ClientCommand]) -> str:
    return message.model_dump_json()


def parse_server_message(text: str) -> ServerMessage:
    try:
        return _SERVER_ADAPTER.validate_json(text)
    except ValidationError as exc:
        raise ProtocolError(str(exc)) from exc


def parse_client_command(text: str) -> ClientCommand:
    try:
        return _CLIENT_ADAPTER.validate_json(text)
    except ValidationError as exc:
        raise ProtocolError(str(exc)) from exc


def detection_items(detections: tuple[Detection, ...]) -> List[DetectionItem]:
    return [
        DetectionItem(label=d.label, score=d.score, bbox=d.bbox.as_list())
        for d in detections
    ]


def detections_message(event: pl.DetectionsReady) -> DetectionsMessage:
    return DetectionsMessage(frame_id=event.frame_id, items=detection_items(event.detections))


def cue_message(event: pl.CueReady) -> CueMessage:
    return CueMessage(frame_id=event.frame_id, zone=event.event.kind.value)
