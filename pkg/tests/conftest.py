import os

import pytest

from soundscout.models import BBox, Detection

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


@pytest.fixture
def golden_trace() -> str:
    return os.path.join(DATA_DIR, "golden_trace.tsv")


@pytest.fixture
def golden_events() -> str:
    return os.path.join(DATA_DIR, "golden_events.jsonl")


def det(label: str, score: float, x0: float, y0: float, x1: float, y1: float) -> Detection:
    return Detection(label, score, BBox(x0, y0, x1, y1))


def write_trace(path, rows) -> str:
    """Rows of (frame_index, label, score, x0, y0, x1, y1) to a trace file."""
    lines = ["\t".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
