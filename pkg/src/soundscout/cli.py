"""Command line entry point.

Offline mode replays a fixture and writes the event log, cue WAV, and
annotated frames; --serve starts the live WebSocket service instead. The CLI
itself stays thin: it parses flags into a RunConfig and hands off.

Exit codes: 0 success, 2 configuration/usage error, 3 backend failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .audio import AudioConfig
from .backends import BackendUnavailable
from .config import ConfigError, RunConfig
from .detection import DEFAULT_MIN_SCORE
from .offline import EXIT_BACKEND, EXIT_CONFIG, run_offline


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soundscout",
        description=(
            "Locate an object class in camera frames and guide toward it "
            "with stereo sound cues."
        ),
    )
    parser.add_argument(
        "--input",
        required=True,
        help="image directory, video file, detection trace, or camera:N",
    )
    parser.add_argument("--backend", choices=("mock", "model"), default="mock")
    parser.add_argument("--model", help="detector model file (.tflite)")
    parser.add_argument("--labels", help="labelmap file, one label per line (default: COCO-80)")
    parser.add_argument(
        "--input-size",
        default="448",
        help="model input size, N or WxH (default 448)",
    )
    parser.add_argument("--target", help="object class to locate")
    parser.add_argument("--min-score", type=float, default=DEFAULT_MIN_SCORE)
    parser.add_argument("--out-log", help="JSONL event log path")
    parser.add_argument("--out-wav", help="stereo cue WAV path")
    parser.add_argument("--out-frames", help="directory for annotated frames")
    parser.add_argument("--serve", action="store_true", help="run the live WebSocket service")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--freq", type=float, default=440.0, help="cue tone frequency in Hz")
    parser.add_argument("--sample-rate", type=int, default=48000)
    return parser


def parse_input_size(value: str) -> tuple[int, int]:
    parts = value.lower().split("x")
    try:
        if len(parts) == 1:
            size = int(parts[0])
            return size, size
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise ConfigError(f"bad --input-size {value!r}; expected N or WxH")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    audio = AudioConfig(sample_rate=args.sample_rate, frequency=args.freq)
    return RunConfig(
        input=args.input,
        backend=args.backend,
        model_path=args.model,
        labels_path=args.labels,
        input_size=parse_input_size(args.input_size),
        target=args.target,
        min_score=args.min_score,
        audio=audio,
        out_log=args.out_log,
        out_wav=args.out_wav,
        out_frames=args.out_frames,
        serve=args.serve,
        port=args.port,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if not config.serve:
        return run_offline(config)

    try:
        from .server.app import create_app

        app = create_app(config)
    except BackendUnavailable as exc:
        print(f"backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    import uvicorn

    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
