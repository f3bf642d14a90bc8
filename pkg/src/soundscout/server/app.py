"""Live WebSocket service: one pipeline, many viewers, last selection wins.

Client sessions never block the pipeline: each connection gets a bounded
outbox and a slow client loses its oldest messages (counted), while every
other client keeps receiving the ordered event stream.
"""

from __future__ import annotations

import asyncio
import base64
import contextlib
import itertools
import os
import queue
from dataclasses import dataclass, field
from typing import AsyncIterator, Iterator, Optional, Set

import cv2
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .. import pipeline as pl
from ..backends import TraceBackend
from ..config import ConfigError, InputKind, RunConfig
from ..imaging import FrameBuffer, frame_from_rgb, load_image_rgb, to_bgr
from ..offline import IMAGE_EXTENSIONS, build_backend, synthetic_trace_frame
from . import protocol

OUTBOX_LIMIT = 128
JPEG_QUALITY = 80


@dataclass(eq=False)
class ClientHandle:
    outbox: "asyncio.Queue[str]" = field(
        default_factory=lambda: asyncio.Queue(maxsize=OUTBOX_LIMIT)
    )
    dropped: int = 0

    def push(self, text: str) -> None:
        while True:
            try:
                self.outbox.put_nowait(text)
                return
            except asyncio.QueueFull:
                with contextlib.suppress(asyncio.QueueEmpty):
                    self.outbox.get_nowait()
                    self.dropped += 1


class LiveSession:
    """Wires the pipeline, a paced frame source, and connected clients."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.backend = build_backend(config, loop=True)
        self.pipeline = pl.Pipeline(self.backend, min_score=config.min_score)
        self.audio = config.audio
        self.muted = False
        self.clients: Set[ClientHandle] = set()
        self._tasks: list[asyncio.Task] = []
        self._frame_counter = itertools.count()

    # -- lifecycle ----------------------------------------------------------

    async def start(self) -> None:
        if self.config.target:
            self.pipeline.set_target(self.config.target)
            self.pipeline.start()
        self._tasks = [
            asyncio.create_task(self._pump_frames(), name="frame-pump"),
            asyncio.create_task(self._pump_events(), name="event-pump"),
        ]

    async def stop(self) -> None:
        for task in self._tasks:
            task.cancel()
        for task in self._tasks:
            with contextlib.suppress(asyncio.CancelledError):
                await task
        self.pipeline.stop()

    # -- clients ------------------------------------------------------------

    def register(self) -> ClientHandle:
        client = ClientHandle()
        self.clients.add(client)
        return client

    def unregister(self, client: ClientHandle) -> None:
        self.clients.discard(client)

    def broadcast(self, message: protocol.ServerMessage) -> None:
        text = protocol.serialize(message)
        for client in list(self.clients):
            client.push(text)

    def state_message(self) -> protocol.StateMessage:
        return protocol.StateMessage(
            target=self.pipeline.state.target, labels=list(self.pipeline.labels)
        )

    # -- commands (last selection wins, regardless of which client sent it) --

    def handle_command(
        self, command: protocol.ClientCommand
    ) -> Optional[protocol.ServerMessage]:
        """Apply a client command; returns a reply for the sender only."""
        if isinstance(command, protocol.SelectTargetCommand):
            try:
                self.pipeline.set_target(command.label)
            except pl.UnknownLabelError as exc:
                return protocol.ErrorMessage(message=str(exc))
            if self.pipeline.state.stage is pl.PipelineStage.TARGET_SELECTED:
                self.pipeline.start()
            self.broadcast(self.state_message())
            return None
        if isinstance(command, protocol.SetAudioCommand):
            try:
                from dataclasses import replace

                updates = {}
                if command.frequency is not None:
                    updates["frequency"] = command.frequency
                if command.amplitude is not None:
                    updates["amplitude"] = command.amplitude
                self.audio = replace(self.audio, **updates)
            except ValueError as exc:
                return protocol.ErrorMessage(message=str(exc))
            return self.state_message()
        self.muted = command.on
        return self.state_message()

    # -- pumps --------------------------------------------------------------

    def _frame_source(self) -> Iterator[FrameBuffer]:
        config = self.config
        if config.input_kind is InputKind.TRACE:
            backend = self.backend
            assert isinstance(backend, TraceBackend)
            w, h = backend.spec.input_w, backend.spec.input_h
            for i in itertools.count():
                yield synthetic_trace_frame(backend, i, w, h, 0)
        elif config.input_kind is InputKind.IMAGE_DIR:
            names = sorted(
                n
                for n in os.listdir(config.input)
                if os.path.splitext(n)[1].lower() in IMAGE_EXTENSIONS
            )
            if not names:
                raise ConfigError(f"no images in {config.input}")
            for name in itertools.cycle(names):
                yield load_image_rgb(os.path.join(config.input, name))
        elif config.input_kind is InputKind.CAMERA:
            capture = cv2.VideoCapture(config.camera_id)
            if not capture.isOpened():
                raise ConfigError(f"cannot open camera {config.camera_id}")
            try:
                while True:
                    ok, bgr = capture.read()
                    if not ok:
                        break
                    yield frame_from_rgb(bgr[:, :, ::-1])
            finally:
                capture.release()
        else:  # video fixture, looped
            while True:
                capture = cv2.VideoCapture(config.input)
                if not capture.isOpened():
                    raise ConfigError(f"unreadable video: {config.input}")
                try:
                    while True:
                        ok, bgr = capture.read()
                        if not ok:
                            break
                        yield frame_from_rgb(bgr[:, :, ::-1])
                finally:
                    capture.release()

    async def _pump_frames(self) -> None:
        period = 1.0 / self.config.fps
        source = self._frame_source()
        while True:
            frame = await asyncio.to_thread(next, source, None)
            if frame is None:
                return
            frame_id = next(self._frame_counter)
            stamped = FrameBuffer(
                frame.width,
                frame.height,
                frame.format,
                frame.planes,
                timestamp_us=int(frame_id * period * 1_000_000),
            )
            ok, jpeg = cv2.imencode(
                ".jpg", to_bgr(stamped), [int(cv2.IMWRITE_JPEG_QUALITY), JPEG_QUALITY]
            )
            if ok:
                self.broadcast(
                    protocol.FrameMessage(
                        frame_id=frame_id,
                        jpeg_b64=base64.b64encode(jpeg.tobytes()).decode("ascii"),
                    )
                )
            self.pipeline.submit_frame(stamped, frame_id=frame_id)
            await asyncio.sleep(period)

    async def _pump_events(self) -> None:
        sub = self.pipeline.subscribe()
        try:
            while True:
                try:
                    event = await asyncio.to_thread(sub.get, True, 0.2)
                except queue.Empty:
                    continue
                if isinstance(event, pl.DetectionsReady):
                    self.broadcast(protocol.detections_message(event))
                elif isinstance(event, pl.CueReady):
                    self.broadcast(protocol.cue_message(event))
                elif isinstance(event, pl.BackendError):
                    self.broadcast(protocol.ErrorMessage(message=event.message))
        finally:
            self.pipeline.unsubscribe(sub)


def create_app(config: RunConfig, frontend_dir: Optional[str] = None) -> FastAPI:
    session = LiveSession(config)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI) -> AsyncIterator[None]:
        await session.start()
        try:
            yield
        finally:
            await session.stop()

    app = FastAPI(title="soundscout", lifespan=lifespan)
    app.state.session = session

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/labels")
    async def labels() -> dict:
        return {"labels": list(session.pipeline.labels)}

    @app.get("/state", response_model=protocol.StateMessage)
    async def state() -> protocol.StateMessage:
        return session.state_message()

    @app.post("/target", response_model=protocol.StateMessage)
    async def set_target(command: protocol.SelectTargetCommand) -> protocol.StateMessage:
        reply = session.handle_command(command)
        if isinstance(reply, protocol.ErrorMessage):
            raise HTTPException(status_code=400, detail=reply.message)
        return session.state_message()

    @app.websocket("/ws")
    async def websocket_endpoint(websocket: WebSocket) -> None:
        await websocket.accept()
        client = session.register()
        sender = asyncio.create_task(_drain_outbox(websocket, client))
        try:
            await websocket.send_text(protocol.serialize(session.state_message()))
            while True:
                text = await websocket.receive_text()
                try:
                    command = protocol.parse_client_command(text)
                except protocol.ProtocolError as exc:
                    await websocket.send_text(
                        protocol.serialize(
                            protocol.ErrorMessage(message=f"protocol violation: {exc}")
                        )
                    )
                    await websocket.close(code=1008)
                    break
                reply = session.handle_command(command)
                if reply is not None:
                    await websocket.send_text(protocol.serialize(reply))
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            session.unregister(client)

    static_dir = frontend_dir or os.environ.get("SOUNDSCOUT_FRONTEND", "")
    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


async def _drain_outbox(websocket: WebSocket, client: ClientHandle) -> None:
    while True:
        text = await client.outbox.get()
        await websocket.send_text(text)
