#!/usr/bin/env python3
"""Records the 100-message server stream used by the UI replay test.

Messages are produced by the real protocol serializer and the real per-frame
pipeline over the golden trace, so the fixture is exactly what a client
would have captured from a live session: 10 preview frames, a target
selection, 29 processed frames (frame + detections + cue each), and a final
target switch. Prints the expected final view state to freeze into the test.
"""

import base64
import json
import os

import cv2

from soundscout.backends import mock_from_trace
from soundscout.offline import synthetic_trace_frame
from soundscout.pipeline import process_frame
from soundscout.server import protocol

HERE = os.path.dirname(os.path.abspath(__file__))
TRACE = os.path.join(HERE, "..", "tests", "data", "golden_trace.tsv")
OUT = os.path.join(HERE, "..", "frontend", "tests", "fixtures", "session_stream.json")


def tiny_jpeg(backend, frame_id):
    frame = synthetic_trace_frame(backend, frame_id, 64, 64, 0)
    bgr = frame.pixels()[:, :, ::-1]
    ok, buf = cv2.imencode(".jpg", bgr, [int(cv2.IMWRITE_JPEG_QUALITY), 60])
    assert ok
    return base64.b64encode(buf.tobytes()).decode("ascii")


def main():
    backend = mock_from_trace(TRACE)
    labels = list(backend.spec.label_set)
    messages = []

    messages.append(protocol.StateMessage(target=None, labels=labels))
    for frame_id in range(10):  # preview frames before any selection
        messages.append(
            protocol.FrameMessage(frame_id=frame_id, jpeg_b64=tiny_jpeg(backend, frame_id))
        )
    messages.append(protocol.StateMessage(target="cup", labels=labels))

    for frame_id in range(10, 39):
        frame = synthetic_trace_frame(
            backend, frame_id, backend.spec.input_w, backend.spec.input_h, 0
        )
        ready, cue = process_frame(
            frame, frame_id, backend, "cup", measure_latency=False
        )
        messages.append(
            protocol.FrameMessage(frame_id=frame_id, jpeg_b64=tiny_jpeg(backend, frame_id))
        )
        messages.append(protocol.detections_message(ready))
        messages.append(protocol.cue_message(cue))

    messages.append(protocol.StateMessage(target="person", labels=labels))
    assert len(messages) == 100, len(messages)

    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump([protocol.serialize(m) for m in messages], fh, indent=0)
        fh.write("\n")

    last_cue = [m for m in messages if isinstance(m, protocol.CueMessage)][-1]
    last_dets = [m for m in messages if isinstance(m, protocol.DetectionsMessage)][-1]
    last_frame = [m for m in messages if isinstance(m, protocol.FrameMessage)][-1]
    print(f"wrote {OUT}")
    print(
        "expected final view: target=person",
        f"cue={last_cue.zone}",
        f"detections={len(last_dets.items)}",
        f"frame_id={last_frame.frame_id}",
        f"labels={len(labels)}",
    )


if __name__ == "__main__":
    main()
