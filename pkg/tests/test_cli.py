import json

import pytest

from soundscout.cli import build_parser, config_from_args, main, parse_input_size
from soundscout.config import ConfigError


class TestArgParsing:
    def test_input_size_forms(self):
        assert parse_input_size("448") == (448, 448)
        assert parse_input_size("640x480") == (640, 480)
        with pytest.raises(ConfigError):
            parse_input_size("448x")

    def test_missing_input_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exit_info:
            build_parser().parse_args([])
        assert exit_info.value.code == 2

    def test_config_from_args(self, golden_trace):
        args = build_parser().parse_args(
            ["--input", golden_trace, "--target", "cup", "--freq", "523.25"]
        )
        config = config_from_args(args)
        assert config.backend == "mock"
        assert config.audio.frequency == 523.25
        assert config.audio.sample_rate == 48000


class TestMain:
    def test_offline_run_end_to_end(self, tmp_path, golden_trace, golden_events):
        out_log = str(tmp_path / "events.jsonl")
        code = main(
            [
                "--input",
                golden_trace,
                "--target",
                "cup",
                "--out-log",
                out_log,
                "--out-wav",
                str(tmp_path / "cues.wav"),
            ]
        )
        assert code == 0
        got = [json.loads(line) for line in open(out_log)]
        want = [json.loads(line) for line in open(golden_events)]
        assert got == want

    def test_nonexistent_input_returns_2(self, tmp_path, capsys):
        code = main(["--input", str(tmp_path / "ghost.tsv"), "--target", "cup"])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_model_backend_without_file_returns_3(self, tmp_path, capsys):
        (tmp_path / "imgs").mkdir()
        code = main(
            [
                "--input",
                str(tmp_path / "imgs"),
                "--backend",
                "model",
                "--model",
                str(tmp_path / "ghost.tflite"),
                "--target",
                "cup",
            ]
        )
        assert code == 3
        assert "backend failure" in capsys.readouterr().err

    def test_bad_audio_flags_rejected(self, golden_trace, capsys):
        code = main(
            ["--input", golden_trace, "--target", "cup", "--freq", "99999"]
        )
        assert code == 2
