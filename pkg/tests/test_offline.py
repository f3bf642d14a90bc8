import json
import os

import numpy as np
import pytest

from soundscout.audio import read_wav
from soundscout.config import ConfigError, RunConfig
from soundscout.offline import EXIT_BACKEND, EXIT_CONFIG, EXIT_OK, run_offline

from conftest import write_trace

BURST = 7200  # samples per 150 ms cue at 48 kHz


def make_config(tmp_path, trace, **overrides):
    defaults = dict(
        input=trace,
        target="cup",
        out_log=str(tmp_path / "events.jsonl"),
        out_wav=str(tmp_path / "cues.wav"),
    )
    defaults.update(overrides)
    return RunConfig(**defaults)


class TestGoldenRun:
    def test_event_log_matches_golden(self, tmp_path, golden_trace, golden_events):
        config = make_config(tmp_path, golden_trace)
        assert run_offline(config) == EXIT_OK
        with open(config.out_log, "rb") as got, open(golden_events, "rb") as want:
            assert got.read() == want.read()

    def test_wav_energy_follows_cue_segments(self, tmp_path, golden_trace, golden_events):
        config = make_config(tmp_path, golden_trace)
        assert run_offline(config) == EXIT_OK
        samples, rate = read_wav(config.out_wav)
        assert rate == 48000

        cues = [json.loads(line)["cue"] for line in open(golden_events)]
        assert samples.shape[0] == BURST * len(cues)
        for i, cue in enumerate(cues):
            left = samples[i * BURST : (i + 1) * BURST, 0]
            right = samples[i * BURST : (i + 1) * BURST, 1]
            left_energy = float(np.sum(left**2))
            right_energy = float(np.sum(right**2))
            if cue == "left":
                assert left_energy > 0.0 and right_energy == 0.0
            elif cue == "right":
                assert right_energy > 0.0 and left_energy == 0.0
            elif cue == "center":
                assert left_energy > 0.0
                assert np.array_equal(left, right)
            else:
                assert left_energy == 0.0 and right_energy == 0.0

    def test_byte_identical_across_runs(self, tmp_path, golden_trace):
        config_a = make_config(tmp_path / "a", golden_trace)
        config_b = make_config(tmp_path / "b", golden_trace)
        os.makedirs(tmp_path / "a"), os.makedirs(tmp_path / "b")
        assert run_offline(config_a) == EXIT_OK
        assert run_offline(config_b) == EXIT_OK
        assert open(config_a.out_log, "rb").read() == open(config_b.out_log, "rb").read()
        assert open(config_a.out_wav, "rb").read() == open(config_b.out_wav, "rb").read()

    def test_annotated_frames_written(self, tmp_path, golden_trace):
        frames_dir = str(tmp_path / "frames")
        config = make_config(tmp_path, golden_trace, out_frames=frames_dir)
        assert run_offline(config) == EXIT_OK
        names = sorted(os.listdir(frames_dir))
        assert len(names) == 100
        assert names[0] == "frame_00000.png"
        assert os.path.getsize(os.path.join(frames_dir, names[0])) > 0


class TestEdgeRuns:
    def test_trace_without_target_class_yields_silent_wav(self, tmp_path):
        rows = [(i, "person", 0.9, 0.4, 0.1, 0.6, 0.9) for i in range(5)]
        trace = write_trace(tmp_path / "people.tsv", rows)
        config = make_config(tmp_path, trace)
        assert run_offline(config) == EXIT_OK
        samples, _ = read_wav(config.out_wav)
        assert samples.shape == (5 * BURST, 2)
        assert np.max(np.abs(samples)) == 0.0

    def test_log_only_run(self, tmp_path):
        rows = [(0, "cup", 0.9, 0.4, 0.4, 0.6, 0.6)]
        trace = write_trace(tmp_path / "one.tsv", rows)
        config = make_config(tmp_path, trace, out_wav=None)
        assert run_offline(config) == EXIT_OK
        lines = open(config.out_log).read().splitlines()
        assert len(lines) == 1
        record = json.loads(lines[0])
        assert record["cue"] == "center" and record["latency_ms"] == 0.0


class TestExitCodes:
    def test_missing_input_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig(input=str(tmp_path / "missing.tsv"), target="cup")

    def test_unknown_target_label(self, tmp_path):
        trace = write_trace(tmp_path / "t.tsv", [(0, "cup", 0.9, 0.4, 0.4, 0.6, 0.6)])
        config = make_config(tmp_path, trace, target="teapot")
        assert run_offline(config) == EXIT_CONFIG

    def test_target_required_offline(self, tmp_path):
        trace = write_trace(tmp_path / "t.tsv", [(0, "cup", 0.9, 0.4, 0.4, 0.6, 0.6)])
        config = make_config(tmp_path, trace, target=None)
        assert run_offline(config) == EXIT_CONFIG

    def test_malformed_trace_is_config_error(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("0\tcup\tnot-a-score\t0\t0\t1\t1\n", encoding="utf-8")
        config = make_config(tmp_path, str(path))
        assert run_offline(config) == EXIT_CONFIG

    def test_camera_input_rejected_offline(self):
        with pytest.raises(ConfigError):
            # camera input requires the model backend; with mock it is a config error
            RunConfig(input="camera:0", target="cup")

    def test_missing_model_file_is_backend_failure(self, tmp_path):
        trace = write_trace(tmp_path / "t.tsv", [(0, "cup", 0.9, 0.4, 0.4, 0.6, 0.6)])
        # trace doubles as a dummy input path; the model file itself is absent
        config = RunConfig(
            input=str(tmp_path),  # empty image dir would fail later; use dir for input kind
            backend="model",
            model_path=str(tmp_path / "ghost.tflite"),
            target="cup",
            out_log=str(tmp_path / "events.jsonl"),
        )
        assert run_offline(config) == EXIT_BACKEND

    def test_mock_requires_trace_input(self, tmp_path):
        os.makedirs(tmp_path / "imgs")
        with pytest.raises(ConfigError):
            RunConfig(input=str(tmp_path / "imgs"), backend="mock", target="cup")

    def test_duplicate_output_paths_rejected(self, tmp_path):
        trace = write_trace(tmp_path / "t.tsv", [(0, "cup", 0.9, 0.4, 0.4, 0.6, 0.6)])
        same = str(tmp_path / "out.bin")
        with pytest.raises(ConfigError):
            RunConfig(input=trace, target="cup", out_log=same, out_wav=same)


class TestImageDirInput:
    def test_requires_model_backend_but_runs_structure(self, tmp_path):
        # mock + image dir is rejected at config time; exercised above. Here:
        # image-dir iteration is covered through the backend=model path being
        # unavailable, so just check the source validation error surface.
        os.makedirs(tmp_path / "empty")
        config = RunConfig(
            input=str(tmp_path / "empty"),
            backend="model",
            model_path=str(tmp_path / "ghost.tflite"),
            target="cup",
        )
        assert run_offline(config) == EXIT_BACKEND
