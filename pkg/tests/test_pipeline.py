import math

import numpy as np
import pytest

from lumen_front import reports, synthetic
from lumen_front.config import PipelineConfig
from lumen_front.dataset import load_sequence
from lumen_front.errors import FrameError, TooFewFrames, UnreadableImage
from lumen_front.image import GrayImage
from lumen_front.pipeline import (
    STAGES, bench_frames, match_frames, parse_range, run_frame, run_sequence, sweep,
)


def test_detect_only_on_constant_image():
    cfg = PipelineConfig().with_stages(enhance=False, adaptive_threshold=False, cull=False)
    r = run_frame(GrayImage(np.full((64, 64), 100, np.uint8)), cfg)
    assert r.n_detected == r.n_kept == 0 and r.descriptors.shape == (0, 32)
    assert r.brightness is None and r.report is None


def test_full_pipeline_contracts(textured):
    cfg = PipelineConfig()
    r = run_frame(textured, cfg, frame_id=7)
    assert r.frame_id == 7
    assert r.n_kept <= r.n_detected <= cfg.detector.max_features
    kept_scores = r.report.score[r.report.kept_indices]
    assert np.all(kept_scores >= cfg.cull.s_min)
    assert r.keypoints == r.detected[r.report.kept_indices]
    assert r.descriptors.shape == (r.n_kept, 32) and r.valid.shape == (r.n_kept,)
    assert set(r.timings) == {*STAGES, "total"}
    assert r.image == r.enhanced.output


def test_run_frame_is_deterministic(textured):
    a, b = run_frame(textured), run_frame(textured)
    assert a.keypoints == b.keypoints and a.detected == b.detected
    assert np.array_equal(a.descriptors, b.descriptors)
    assert np.array_equal(a.report.score, b.report.score)
    assert a.stats == b.stats and a.brightness == b.brightness


def test_stage_toggles(textured):
    base = PipelineConfig()
    r = run_frame(textured, base.with_stages(cull=False))
    assert r.keypoints == r.detected and r.report is None
    r = run_frame(textured, base.with_stages(enhance=False))
    assert r.image == textured and r.enhanced is None
    r = run_frame(textured, base.with_stages(adaptive_threshold=False, fixed_threshold=17.0))
    assert np.all(r.tmap.final == 17.0) and r.stats is None
    assert np.all(r.detected.response >= 17)


def test_sequence_errors_carry_the_frame_id(tmp_path):
    frames = synthetic.sequence(3, 64, 48, seed=1)
    paths = synthetic.write_plain_sequence(tmp_path, frames)
    src = load_sequence(tmp_path)
    paths[1].write_bytes(b"corrupt")
    with pytest.raises(FrameError) as exc:
        run_sequence(src, PipelineConfig())
    assert exc.value.frame_id == 1 and isinstance(exc.value.cause, UnreadableImage)
    assert "frame 1" in str(exc.value) and paths[1].name in str(exc.value)


def test_run_sequence_order_is_thread_independent(tmp_path):
    synthetic.write_plain_sequence(tmp_path, synthetic.sequence(6, 96, 64, seed=2))
    src = load_sequence(tmp_path)
    one = run_sequence(src, PipelineConfig(), threads=1)
    four = run_sequence(src, PipelineConfig(), threads=4)
    assert [r.frame_id for r in four] == list(range(6))
    assert all(a.keypoints == b.keypoints for a, b in zip(one, four))


def test_sweep_constant_and_monotone(textured, darkened):
    rows = sweep(GrayImage(np.full((32, 32), 60, np.uint8)), [5, 10])
    assert all(r.count_raw == r.count_enhanced == 0 for r in rows)
    rows = sweep(darkened, range(5, 50, 5))
    raw = [r.count_raw for r in rows]
    enh = [r.count_enhanced for r in rows]
    assert raw == sorted(raw, reverse=True) and enh == sorted(enh, reverse=True)
    at20 = next(r for r in rows if r.threshold == 20)
    assert at20.count_enhanced > at20.count_raw


def test_sweep_rejects_bad_thresholds(textured):
    with pytest.raises(ValueError):
        sweep(textured, [])
    with pytest.raises(ValueError):
        sweep(textured, [0.5, 10])


def test_parse_range():
    assert parse_range("5:20:5") == [5, 10, 15, 20]
    assert parse_range("7") == [7]
    assert parse_range("1:2:0.5") == [1, 1.5, 2]
    for bad in ("5:1:1", "1:5", "a:b:c", "1:5:0"):
        with pytest.raises(ValueError):
            parse_range(bad)


def test_match_frame_against_itself(textured):
    rep = match_frames(textured, textured)
    assert rep.n_a > 0
    assert rep.self_matches >= 0.95 * rep.n_a
    assert rep.inlier_ratio == 1.0 and rep.mean_hamming == 0.0


def test_match_against_noise_and_translation(textured):
    noise = synthetic.noise_frame(320, 240, seed=9)
    assert match_frames(textured, noise).inlier_ratio <= 0.05
    moved = synthetic.translate(textured, 2, 0)
    h = np.array([[1, 0, 2], [0, 1, 0], [0, 0, 1]], float)
    rep = match_frames(textured, moved, homography=h)
    assert rep.n_matches > 50 and rep.inlier_ratio > 0.9
    assert np.all(np.abs(rep.points_b[rep.inliers] - rep.points_a[rep.inliers] - [2, 0]) <= 2)


def test_bench_report_shape_and_budget():
    frames = synthetic.sequence(10, 160, 120, seed=4)
    rep = bench_frames(frames, budget_ms=math.inf)
    assert [s.stage for s in rep.stages] == [*STAGES, "total"]
    assert rep.within_budget and rep.n_frames == 10 and (rep.width, rep.height) == (160, 120)
    assert not bench_frames(frames, budget_ms=0.0).within_budget
    with pytest.raises(TooFewFrames):
        bench_frames(frames[:9])


def test_csv_schema_and_formatting(tmp_path):
    p = tmp_path / "x.csv"
    reports.write_csv(p, ("a", "b", "c", "d"), [(1, 0.5, True, float("nan"))])
    assert p.read_text() == "# lumen-front v1\na,b,c,d\n1,0.500000,1,nan\n"
    header, rows = reports.read_csv(p)
    assert header == ["a", "b", "c", "d"] and rows == [["1", "0.500000", "1", "nan"]]
