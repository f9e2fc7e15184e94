"""Illumination-adaptive FAST front-end: enhancement, adaptive thresholds and keypoint culling.

Exit codes: 0 success, 1 usage/config error, 2 I/O error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import reports, synthetic
from .config import PipelineConfig, dumps_toml
from .dataset import KINDS, load_sequence
from .enhance import enhance
from .errors import ConfigError, DatasetError, FrameError, LumenError
from .image import quantize, read_image, write_image
from .pipeline import bench, match_frames, parse_range, run_frame, run_sequence, sweep

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--config", type=Path, default=d(None), help="TOML pipeline config")
    parser.add_argument("--debug-dump", type=Path, default=d(None), metavar="DIR",
                        help="write intermediate PNGs and threshold-map JSON here")
    parser.add_argument("--threads", type=int, default=d(1), help="worker threads for multi-frame commands")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for synthetic fixture generation")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lumen-front", description=__doc__.splitlines()[0])
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, suppress=True)
        return sp

    sp = cmd("enhance", "enhance one image")
    sp.add_argument("image", type=Path)
    sp.add_argument("-o", "--output", type=Path, required=True)

    sp = cmd("detect", "detect (and cull) keypoints in an image or directory")
    sp.add_argument("input", type=Path)
    sp.add_argument("--kind", choices=KINDS, default="plain")
    sp.add_argument("-o", "--output", type=Path, required=True)
    sp.add_argument("--cull-report", type=Path, default=None, help="also write the per-keypoint scoring CSV")

    sp = cmd("sweep", "keypoint count vs uniform FAST threshold, raw and enhanced")
    sp.add_argument("image", type=Path)
    sp.add_argument("--thresholds", default="5:60:5", help="a:b:step (inclusive)")
    sp.add_argument("-o", "--output", type=Path, required=True)

    sp = cmd("match", "match two frames")
    sp.add_argument("image_a", type=Path)
    sp.add_argument("image_b", type=Path)
    sp.add_argument("-o", "--output", type=Path, required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--shift", default=None, metavar="DX,DY", help="known translation from a to b")
    g.add_argument("--homography", default=None, metavar="H11,...,H33", help="known 3x3 homography, row-major")

    sp = cmd("bench", "time the pipeline over a sequence")
    sp.add_argument("directory", type=Path)
    sp.add_argument("--kind", choices=KINDS, default="plain")
    sp.add_argument("--budget-ms", type=float, default=50.0)
    sp.add_argument("-o", "--output", type=Path, default=None, help="timing CSV")

    sp = cmd("run", "full per-frame reports for a sequence")
    sp.add_argument("directory", type=Path)
    sp.add_argument("--kind", choices=KINDS, default="plain")
    sp.add_argument("-o", "--output", type=Path, required=True)

    sp = cmd("synth", "write a synthetic frame sequence")
    sp.add_argument("directory", type=Path)
    sp.add_argument("--frames", type=int, default=20)
    sp.add_argument("--width", type=int, default=752)
    sp.add_argument("--height", type=int, default=480)
    sp.add_argument("--kind", choices=("plain", "euroc"), default="plain")
    sp.add_argument("--darken", action="store_true", help="apply the cubic darkening curve")
    return p


def _load_config(args) -> PipelineConfig:
    return PipelineConfig.load(args.config) if args.config else PipelineConfig()


def _dump_debug(directory: Path, result) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    stem = f"frame_{result.frame_id:06d}"
    if result.enhanced is not None:
        e = result.enhanced
        write_image(directory / f"{stem}_blurred.png", e.blurred)
        write_image(directory / f"{stem}_gamma.png", e.gamma_corrected)
        write_image(directory / f"{stem}_enhanced.png", e.output)
        write_image(directory / f"{stem}_mask.png", quantize(e.mask + 128.0))
    if result.tmap is not None:
        reports.write_json(directory / f"{stem}_threshold_map.json", result.tmap.to_dict())


def _frames_for(path: Path, kind: str):
    """A FrameSource for a directory, or None for a single image path."""
    if path.is_dir():
        return load_sequence(path, kind)
    if not path.exists():
        raise DatasetError(f"{path}: no such file or directory")
    return None


def cmd_enhance(args, cfg):
    img = read_image(args.image)
    frame = enhance(img, cfg.enhancement)
    write_image(args.output, frame.output)
    print(f"{args.image}: {frame.brightness.label.value} (t={frame.brightness.deviation:+.3f}) -> {args.output}")
    if args.debug_dump:
        _dump_debug(args.debug_dump, run_frame(img, cfg))
    return EXIT_OK


def cmd_detect(args, cfg):
    source = _frames_for(args.input, args.kind)
    if source is None:
        results = [run_frame(read_image(args.input), cfg, 0)]
    else:
        results = run_sequence(source, cfg, args.threads)
    kp_rows, cull_rows = [], []
    for r in results:
        kp_rows.extend(reports.keypoint_rows(r.frame_id, r.keypoints))
        if r.report is not None:
            cull_rows.extend(reports.cull_rows(r.frame_id, r.detected, r.report))
        if args.debug_dump:
            _dump_debug(args.debug_dump, r)
    reports.write_csv(args.output, reports.KEYPOINT_COLUMNS, kp_rows)
    if args.cull_report:
        reports.write_csv(args.cull_report, reports.CULL_COLUMNS, cull_rows)
    total = sum(r.n_kept for r in results)
    print(f"{len(results)} frame(s), {total} keypoints -> {args.output}")
    return EXIT_OK


def cmd_sweep(args, cfg):
    img = read_image(args.image)
    try:
        thresholds = parse_range(args.thresholds)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = sweep(img, thresholds, cfg)
    reports.write_csv(
        args.output, reports.SWEEP_COLUMNS,
        ((float(r.threshold), r.count_raw, r.count_enhanced) for r in rows),
    )
    print(f"{len(rows)} thresholds -> {args.output}")
    return EXIT_OK


def _homography(args) -> np.ndarray:
    try:
        if args.shift:
            dx, dy = (float(v) for v in args.shift.split(","))
            return np.array([[1, 0, dx], [0, 1, dy], [0, 0, 1]], dtype=np.float64)
        if args.homography:
            vals = [float(v) for v in args.homography.split(",")]
            if len(vals) != 9:
                raise ValueError
            return np.array(vals, dtype=np.float64).reshape(3, 3)
    except ValueError:
        raise UsageError("--shift takes DX,DY and --homography takes 9 comma-separated numbers") from None
    return np.eye(3)


def cmd_match(args, cfg):
    h = _homography(args)
    a = read_image(args.image_a)
    b = read_image(args.image_b)
    rep = match_frames(a, b, cfg, h)
    reports.write_csv(
        args.output, reports.MATCH_COLUMNS,
        ((0, 1, m.index_a, m.index_b, m.hamming_distance, float(m.ratio)) for m in rep.matches),
    )
    print(
        f"matches={rep.n_matches} mean_hamming={rep.mean_hamming:.2f} "
        f"inlier_ratio={rep.inlier_ratio:.4f} (a={rep.n_a}, b={rep.n_b}) -> {args.output}"
    )
    return EXIT_OK


def cmd_bench(args, cfg):
    source = load_sequence(args.directory, args.kind)
    rep = bench(source, cfg, args.budget_ms)
    rows = [(s.stage, s.mean_ms, s.p95_ms) for s in rep.stages]
    if args.output:
        reports.write_csv(args.output, reports.BENCH_COLUMNS, rows)
    print(f"{rep.n_frames} frames at {rep.width}x{rep.height}")
    print(f"{'stage':<10} {'mean_ms':>9} {'p95_ms':>9}")
    for stage, mean, p95 in rows:
        print(f"{stage:<10} {mean:9.2f} {p95:9.2f}")
    budget = "inf" if math.isinf(rep.budget_ms) else f"{rep.budget_ms:.2f}"
    if not rep.within_budget:
        print(f"BUDGET EXCEEDED: p95 {rep.total.p95_ms:.2f} ms > {budget} ms", file=sys.stderr)
        return EXIT_BUDGET
    print(f"within budget: p95 {rep.total.p95_ms:.2f} ms <= {budget} ms")
    return EXIT_OK


def cmd_run(args, cfg):
    source = load_sequence(args.directory, args.kind)
    results = run_sequence(source, cfg, args.threads)
    out = args.output
    out.mkdir(parents=True, exist_ok=True)
    kp_rows, cull_rows, frame_rows, timing_rows = [], [], [], []
    for (ts, _), r in zip(source.frames, results):
        kp_rows.extend(reports.keypoint_rows(r.frame_id, r.keypoints))
        if r.report is not None:
            cull_rows.extend(reports.cull_rows(r.frame_id, r.detected, r.report))
        frame_rows.append(reports.frame_row(r, ts))
        timing_rows.append(reports.timing_row(r))
        if args.debug_dump:
            _dump_debug(args.debug_dump, r)
    reports.write_csv(out / "frames.csv", reports.FRAME_COLUMNS, frame_rows)
    reports.write_csv(out / "keypoints.csv", reports.KEYPOINT_COLUMNS, kp_rows)
    reports.write_csv(out / "culling.csv", reports.CULL_COLUMNS, cull_rows)
    (out / "config.toml").write_text(dumps_toml(cfg), encoding="utf-8")
    # Wall-clock numbers are kept apart so the files above stay reproducible.
    timing_dir = out / "timings"
    timing_dir.mkdir(exist_ok=True)
    reports.write_csv(timing_dir / "timings.csv", reports.TIMING_COLUMNS, timing_rows)
    print(f"{len(results)} frames -> {out}")
    return EXIT_OK


def cmd_synth(args, cfg):
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    frames = synthetic.sequence(args.frames, args.width, args.height, seed=args.seed)
    if args.darken:
        frames = [synthetic.darken(f) for f in frames]
    if args.kind == "euroc":
        synthetic.write_euroc_sequence(args.directory, frames)
    else:
        synthetic.write_plain_sequence(args.directory, frames)
    print(f"{len(frames)} frames ({args.width}x{args.height}, seed {args.seed}) -> {args.directory}")
    return EXIT_OK


COMMANDS = {
    "enhance": cmd_enhance,
    "detect": cmd_detect,
    "sweep": cmd_sweep,
    "match": cmd_match,
    "bench": cmd_bench,
    "run": cmd_run,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        cfg = _load_config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, ConfigError) as exc:
        print(f"lumen-front: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FrameError as exc:
        print(f"lumen-front: error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc.cause, (DatasetError, OSError)) else EXIT_USAGE
    except (DatasetError, OSError) as exc:
        print(f"lumen-front: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LumenError as exc:
        print(f"lumen-front: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
