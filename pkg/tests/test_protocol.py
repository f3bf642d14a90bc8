import random

import pytest

from soundscout.models import BBox, CueEvent, CueKind, Detection
from soundscout.pipeline import CueReady, DetectionsReady
from soundscout.server import protocol


def random_message(rng):
    kind = rng.randrange(8)
    if kind == 0:
        return protocol.FrameMessage(
            frame_id=rng.randrange(10_000),
            jpeg_b64="".join(rng.choices("ABCDEFabcdef0123456789+/", k=rng.randrange(64))),
        )
    if kind == 1:
        items = [
            protocol.DetectionItem(
                label=rng.choice(["cup", "person", "traffic light"]),
                score=round(rng.random(), 6),
                bbox=sorted([rng.random(), rng.random()])
                + sorted([rng.random(), rng.random()]),
            )
            for _ in range(rng.randrange(4))
        ]
        return protocol.DetectionsMessage(frame_id=rng.randrange(10_000), items=items)
    if kind == 2:
        return protocol.CueMessage(
            frame_id=rng.randrange(10_000),
            zone=rng.choice(["left", "center", "right", "silence"]),
        )
    if kind == 3:
        return protocol.StateMessage(
            target=rng.choice([None, "cup", "person"]),
            labels=[f"label{i}" for i in range(rng.randrange(5))],
        )
    if kind == 4:
        return protocol.ErrorMessage(message="x" * rng.randrange(40))
    if kind == 5:
        return protocol.SelectTargetCommand(label=rng.choice(["cup", "dog", "tv"]))
    if kind == 6:
        return protocol.SetAudioCommand(
            frequency=rng.choice([None, rng.uniform(100, 2000)]),
            amplitude=rng.choice([None, rng.uniform(0.01, 1.0)]),
        )
    return protocol.MuteCommand(on=rng.random() < 0.5)


class TestRoundTrip:
    def test_random_instances_survive_serialize_parse(self):
        rng = random.Random(808)
        server_types = (
            protocol.FrameMessage,
            protocol.DetectionsMessage,
            protocol.CueMessage,
            protocol.StateMessage,
            protocol.ErrorMessage,
        )
        for _ in range(400):
            message = random_message(rng)
            text = protocol.serialize(message)
            if isinstance(message, server_types):
                parsed = protocol.parse_server_message(text)
            else:
                parsed = protocol.parse_client_command(text)
            assert parsed == message

    def test_every_type_exercised(self):
        rng = random.Random(1)
        seen = {type(random_message(rng)).__name__ for _ in range(200)}
        assert len(seen) == 8


class TestValidation:
    def test_unknown_type_rejected(self):
        with pytest.raises(protocol.ProtocolError):
            protocol.parse_client_command('{"type":"fire_lasers"}')

    def test_invalid_json_rejected(self):
        with pytest.raises(protocol.ProtocolError):
            protocol.parse_server_message("not json at all")

    def test_server_client_namespaces_disjoint(self):
        with pytest.raises(protocol.ProtocolError):
            protocol.parse_client_command('{"type":"cue","frame_id":1,"zone":"left"}')

    def test_score_bounds_enforced(self):
        with pytest.raises(protocol.ProtocolError):
            protocol.parse_server_message(
                '{"type":"detections","frame_id":1,'
                '"items":[{"label":"cup","score":1.7,"bbox":[0,0,1,1]}]}'
            )

    def test_bbox_length_enforced(self):
        with pytest.raises(protocol.ProtocolError):
            protocol.parse_server_message(
                '{"type":"detections","frame_id":1,'
                '"items":[{"label":"cup","score":0.5,"bbox":[0,0,1]}]}'
            )

    def test_zone_vocabulary_enforced(self):
        with pytest.raises(protocol.ProtocolError):
            protocol.parse_server_message('{"type":"cue","frame_id":1,"zone":"up"}')


class TestEventConversion:
    def test_detections_message_from_event(self):
        event = DetectionsReady(
            frame_id=7,
            detections=(Detection("cup", 0.9, BBox(0.1, 0.2, 0.3, 0.4)),),
            latency_ms=1.5,
        )
        message = protocol.detections_message(event)
        assert message.frame_id == 7
        assert message.items[0].bbox == [0.1, 0.2, 0.3, 0.4]

    def test_cue_message_from_event(self):
        message = protocol.cue_message(CueReady(9, CueEvent(CueKind.LEFT, 123)))
        assert message.zone == "left" and message.frame_id == 9
