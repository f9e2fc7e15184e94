"""CSV/JSON writers for the deterministic outputs.

Every CSV starts with the schema line ``# lumen-front v1``. Floats use fixed
formats so repeated runs are byte-identical; wall-clock timings live in
their own file.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

SCHEMA_LINE = "# lumen-front v1"

KEYPOINT_COLUMNS = ("frame_id", "x", "y", "octave", "response", "angle")
CULL_COLUMNS = ("frame_id", "kp_index", "x", "y", "leaf_area", "density", "h_c", "c_light", "score", "culled")
MATCH_COLUMNS = ("frame_a", "frame_b", "idx_a", "idx_b", "hamming", "ratio")
SWEEP_COLUMNS = ("threshold", "count_raw", "count_enhanced")
FRAME_COLUMNS = (
    "frame_id", "timestamp", "brightness", "deviation", "entropy", "mean_gradient",
    "global_threshold", "n_detected", "n_kept",
)
TIMING_COLUMNS = ("frame_id", "enhance", "threshold", "detect", "describe", "cull", "total")
BENCH_COLUMNS = ("stage", "mean_ms", "p95_ms")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if v != v:
            return "nan"
        return f"{v:.6f}"
    return str(v)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, columns, rows) -> None:
    Path(path).write_text(csv_text(columns, rows), encoding="utf-8", newline="\n")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != SCHEMA_LINE:
        raise ValueError(f"{path}: missing '{SCHEMA_LINE}' header")
    header = lines[1].split(",")
    return header, [ln.split(",") for ln in lines[2:] if ln]


def keypoint_rows(frame_id, kps):
    for i in range(len(kps)):
        yield (
            frame_id, float(kps.x[i]), float(kps.y[i]), int(kps.octave[i]),
            float(kps.response[i]), float(kps.angle[i]),
        )


def cull_rows(frame_id, kps, report):
    for i in range(len(report)):
        yield (
            frame_id, i, float(kps.x[i]), float(kps.y[i]), int(report.leaf_area[i]),
            float(report.density[i]), float(report.h_c[i]), float(report.c_light[i]),
            float(report.score[i]), bool(report.culled[i]),
        )


def frame_row(result, timestamp):
    b = result.brightness
    s = result.stats
    return (
        result.frame_id, timestamp,
        b.label.value if b else "raw",
        float(b.deviation) if b else float("nan"),
        float(s.entropy) if s else float("nan"),
        float(s.mean_gradient) if s else float("nan"),
        float(s.global_threshold) if s else float("nan"),
        result.n_detected, result.n_kept,
    )


def timing_row(result):
    return (result.frame_id, *(float(result.timings[c]) for c in TIMING_COLUMNS[1:]))


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
