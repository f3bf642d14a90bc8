#!/usr/bin/env python3
"""Regenerates the golden trace and its expected event log.

Deliberately self-contained (stdlib only, no soundscout imports): the
expected cues come from a direct reading of the trace file, so the checked-in
golden log is an independent oracle for the pipeline. Run from the repo root:

    python3 tools/generate_golden.py
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(HERE, "..", "tests", "data")

TARGET = "cup"
MIN_SCORE = 0.4
FRAMES = 100
HALF_W = 0.04


def cup_center(i):
    """Scripted sweep: left for 0-29, center 30-59, right 60-84, absent after."""
    if i < 30:
        return round(0.05 + 0.008 * i, 6)
    if i < 60:
        return round(0.36 + 0.0096 * (i - 30), 6)
    if i < 85:
        return round(0.70 + 0.0099 * (i - 60), 6)
    return None


def build_trace_lines():
    lines = [
        "# golden fixture: one cup sweeping left -> center -> right, then gone",
        "# frame_index\tlabel\tscore\tx_min\ty_min\tx_max\ty_max",
    ]

    def det(i, label, score, x0, y0, x1, y1):
        lines.append(f"{i}\t{label}\t{score}\t{x0}\t{y0}\t{x1}\t{y1}")

    for i in range(FRAMES):
        xc = cup_center(i)
        person_x0 = round(0.55 + 0.002 * (i % 20), 6)
        cup_row = (round(xc - HALF_W, 6), 0.4, round(xc + HALF_W, 6), 0.62) if xc is not None else None

        # frame 17 exercises order independence: person listed before the cup
        if cup_row and i != 17:
            det(i, "cup", 0.9, *cup_row)
        det(i, "person", 0.95, person_x0, 0.1, round(person_x0 + 0.2, 6), 0.9)
        if cup_row and i == 17:
            det(i, "cup", 0.9, *cup_row)
        # sub-threshold cup: must never influence the cue
        if i % 7 == 0:
            det(i, "cup", 0.25, 0.8, 0.7, 0.9, 0.8)
        # weaker second cup on the other side: argmax must ignore it
        if i % 10 == 5 and xc is not None:
            det(i, "cup", 0.5, 0.46, 0.4, 0.54, 0.62)
        # exact-score tie: the earlier line must win
        if i == 42:
            det(i, "cup", 0.9, 0.9, 0.4, 0.98, 0.62)
    return lines


def zone_of(x_min, x_max):
    xc = (x_min + x_max) / 2.0
    if xc < 1.0 / 3.0:
        return "left"
    if xc <= 2.0 / 3.0:
        return "center"
    return "right"


def expected_events(trace_lines):
    per_frame = {}
    for line in trace_lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        idx = int(fields[0])
        det = {
            "label": fields[1],
            "score": float(fields[2]),
            "bbox": [float(v) for v in fields[3:7]],
        }
        per_frame.setdefault(idx, []).append(det)

    records = []
    for i in range(max(per_frame) + 1):
        dets = per_frame.get(i, [])
        best = None
        for d in dets:
            if d["label"] != TARGET or d["score"] < MIN_SCORE:
                continue
            if best is None or d["score"] > best["score"]:
                best = d
        cue = "silence" if best is None else zone_of(best["bbox"][0], best["bbox"][2])
        records.append(
            {
                "frame_id": i,
                "cue": cue,
                "target": TARGET,
                "detections": dets,
                "latency_ms": 0.0,
            }
        )
    return records


def main():
    os.makedirs(DATA_DIR, exist_ok=True)
    trace_lines = build_trace_lines()
    trace_path = os.path.join(DATA_DIR, "golden_trace.tsv")
    with open(trace_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(trace_lines) + "\n")

    records = expected_events(trace_lines)
    log_path = os.path.join(DATA_DIR, "golden_events.jsonl")
    with open(log_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")

    counts = {}
    for r in records:
        counts[r["cue"]] = counts.get(r["cue"], 0) + 1
    print(f"wrote {trace_path} and {log_path}; cue counts: {counts}")


if __name__ == "__main__":
    main()
