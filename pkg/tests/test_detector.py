import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from lumen_front.detector import (
    DetectorConfig, Keypoint, Keypoints, build_pyramid, candidates, corner_score, count_candidates,
    detect, fast_segment_test, nms, score_map,
)
from lumen_front.errors import ConfigError, OutOfBounds
from lumen_front.image import GrayImage
from lumen_front.threshold import ThresholdMap, threshold_map


def square(size=64, lo=0, hi=255, a=20, b=40):
    img = np.full((size, size), lo, np.uint8)
    img[a:b, a:b] = hi
    return GrayImage(img)


def naive_nms(scores, r):
    h, w = scores.shape
    keep = []
    for y in range(h):
        for x in range(w):
            s = scores[y, x]
            if s < 0:
                continue
            ok = True
            for yy in range(max(0, y - r), min(h, y + r + 1)):
                for xx in range(max(0, x - r), min(w, x + r + 1)):
                    q = scores[yy, xx]
                    if (yy, xx) != (y, x) and q >= 0 and (q, -yy, -xx) > (s, -y, -x):
                        ok = False
            if ok:
                keep.append((x, y, s))
    return keep


@pytest.mark.parametrize("kwargs", [{"n_levels": 0}, {"scale_factor": 1.0}, {"max_features": 0},
                                    {"nms_radius": -1}])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        DetectorConfig(**kwargs)


def test_segment_test_examples():
    const = GrayImage(np.full((9, 9), 80, np.uint8))
    assert not any(fast_segment_test(const, x, y, 1) for x in range(3, 6) for y in range(3, 6))
    dot = np.zeros((9, 9), np.uint8)
    dot[4, 4] = 255
    assert fast_segment_test(GrayImage(dot), 4, 4, 50)  # all 16 circle pixels darker
    sq = square()
    assert fast_segment_test(sq, 20, 20, 30)
    assert not fast_segment_test(sq, 30, 30, 30)
    with pytest.raises(OutOfBounds):
        fast_segment_test(sq, 2, 10, 10)
    with pytest.raises(OutOfBounds):
        corner_score(sq, 10, 61)


def test_arc_of_eight_is_not_enough():
    img = np.full((9, 9), 100, np.uint8)
    for k, (dx, dy) in enumerate(oracles.CIRCLE16):
        if k < 8:
            img[4 + dy, 4 + dx] = 200
    img = GrayImage(img)
    assert not fast_segment_test(img, 4, 4, 10)
    img2 = img.data.copy()
    dx, dy = oracles.CIRCLE16[15]  # extend the arc across the wrap-around
    img2[4 + dy, 4 + dx] = 200
    assert fast_segment_test(GrayImage(img2), 4, 4, 10)


@given(arrays(np.uint8, (12, 12)), st.sampled_from([0, 3.5, 10, 12.5, 40]))
def test_reference_segment_test_matches_oracle(a, t):
    img = GrayImage(a)
    for y in range(3, 9):
        for x in range(3, 9):
            assert fast_segment_test(img, x, y, t) == oracles.segment_test(a, x, y, t)


@given(arrays(np.uint8, (14, 16)), st.sampled_from([0, 5, 10, 20, 40]))
def test_vectorized_oracle_agrees_with_scalar_oracle(a, t):
    assert oracles.detections_vectorized(a, t) == oracles.detections(a, t)


def test_corner_score_examples(textured):
    const = GrayImage(np.full((9, 9), 80, np.uint8))
    assert corner_score(const, 4, 4) == 0
    sq = square()
    assert fast_segment_test(sq, 20, 20, 20) and corner_score(sq, 20, 20) >= 20
    a = textured.data[:40, :40]
    sub = GrayImage(a)
    for y in range(3, 37, 3):
        for x in range(3, 37, 3):
            assert corner_score(sub, x, y) == oracles.corner_score(a, x, y)


@pytest.mark.parametrize("t", [5, 10, 12.5, 20, 40])
def test_fast_path_matches_reference(textured, t):
    a = textured.data[60:124, 100:164].copy()
    img = GrayImage(a)
    scores = score_map(img, ThresholdMap.uniform(64, 64, t))
    passing = {(x, y) for y, x in zip(*np.nonzero(scores >= 0))}
    assert passing == oracles.detections(a, t)
    for x, y in passing:
        assert scores[y, x] == corner_score(img, x, y)
        # Integer score: passes at floor(t) even when t is fractional.
        assert scores[y, x] >= math.floor(t)


def test_score_map_border_is_empty(textured):
    s = score_map(textured, ThresholdMap.uniform(textured.width, textured.height, 5))
    assert np.all(s[:3] < 0) and np.all(s[-3:] < 0) and np.all(s[:, :3] < 0) and np.all(s[:, -3:] < 0)


def test_candidates_and_counts_agree(textured):
    c = candidates(textured, 15)
    assert c.shape[1] == 2 and len(c) == count_candidates(textured, 15)


def test_count_is_nonincreasing_in_threshold(textured):
    counts = [count_candidates(textured, t) for t in range(1, 60, 4)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


@given(arrays(np.int32, (14, 17), elements=st.integers(-1, 6)), st.integers(0, 3))
def test_nms_matches_naive_and_is_idempotent(scores, r):
    xs, ys, ss = nms(scores, r)
    assert list(zip(xs.tolist(), ys.tolist(), ss.tolist())) == naive_nms(scores, r)
    sparse = np.full_like(scores, -1)
    sparse[ys, xs] = ss
    xs2, ys2, _ = nms(sparse, r)
    assert np.array_equal(xs, xs2) and np.array_equal(ys, ys2)


def test_nms_tie_goes_to_smaller_y_then_x():
    s = np.full((10, 10), -1, np.int32)
    s[5, 5] = s[5, 6] = s[6, 4] = 7
    xs, ys, _ = nms(s, 2)
    assert list(zip(xs.tolist(), ys.tolist())) == [(5, 5)]


def test_pyramid_sizes_and_stop():
    img = GrayImage(np.zeros((480, 752), np.uint8))
    pyr = build_pyramid(img, DetectorConfig(n_levels=4, scale_factor=1.2))
    assert [p.shape for p in pyr] == [(480, 752), (400, 627), (333, 522), (278, 435)]
    tiny = build_pyramid(GrayImage(np.zeros((10, 10), np.uint8)), DetectorConfig(n_levels=4))
    assert [p.shape for p in tiny] == [(10, 10), (8, 8)]
    const = build_pyramid(GrayImage(np.full((40, 40), 77, np.uint8)), DetectorConfig())
    assert all(np.all(p.data == 77) for p in const)


def test_detect_constant_is_empty():
    img = GrayImage(np.full((48, 48), 90, np.uint8))
    assert len(detect(img, ThresholdMap.uniform(48, 48, 5))) == 0


def test_detect_square_finds_four_corners():
    sq = square()
    kps = detect(sq, ThresholdMap.uniform(64, 64, 20), DetectorConfig(n_levels=1))
    assert len(kps) == 4
    corners = [(20, 20), (39, 20), (20, 39), (39, 39)]
    for cx, cy in corners:
        d = np.hypot(kps.x - cx, kps.y - cy)
        assert d.min() <= 2.0


def test_detect_uses_projected_cell_thresholds(textured):
    # Different threshold per cell: level-1 pixels look up the cell of (x*s, y*s).
    cfg = DetectorConfig(n_levels=2, nms_radius=0, max_features=100000)
    rng = np.random.default_rng(0)
    tm = threshold_map(textured)
    tm = ThresholdMap(tm.width, tm.height, tm.cell_size, tm.otsu, tm.center, tm.local,
                      rng.uniform(5, 40, tm.final.shape), tm.stats, tm.f_t_min)
    pyr = build_pyramid(textured, cfg)
    lvl = pyr[1]
    s = score_map(lvl, tm, 1.2)
    a = lvl.data
    for y in range(3, lvl.height - 3, 7):
        for x in range(3, lvl.width - 3, 5):
            t = tm.threshold_at(x * 1.2, y * 1.2)
            assert (s[y, x] >= 0) == oracles.segment_test(a, x, y, t)


def test_detect_orders_truncates_and_maps_coordinates(textured):
    tm = threshold_map(textured)
    full = detect(textured, tm, DetectorConfig(max_features=100000))
    assert np.all(np.diff(full.response) <= 0)
    capped = detect(textured, tm, DetectorConfig(max_features=50))
    assert capped == full[:50]
    cfg = DetectorConfig()
    pyr = build_pyramid(textured, cfg)
    for k in full:
        s = cfg.scale_factor ** k.octave
        lx, ly = k.x / s, k.y / s
        assert abs(lx - round(lx)) < 1e-9 and abs(ly - round(ly)) < 1e-9
        h, w = pyr[k.octave].shape
        assert 3 <= round(lx) < w - 3 and 3 <= round(ly) < h - 3
        assert k.response >= math.floor(tm.threshold_at(k.x, k.y))
        assert math.isnan(k.angle)


def test_detect_count_monotone_in_uniform_threshold(textured):
    cfg = DetectorConfig(n_levels=1, nms_radius=0, max_features=10**6)
    counts = [len(detect(textured, ThresholdMap.uniform(320, 240, t), cfg)) for t in (5, 10, 20, 40)]
    assert counts == sorted(counts, reverse=True)


def test_detect_is_deterministic(textured):
    tm = threshold_map(textured)
    assert detect(textured, tm) == detect(textured, tm)


def test_keypoints_container():
    kps = Keypoints.from_list([Keypoint(1, 2, 0, 9.0), Keypoint(3, 4, 1, 5.0)])
    k = kps[1]
    assert len(kps) == 2 and (k.x, k.y, k.octave, k.response) == (3.0, 4.0, 1, 5.0)
    assert math.isnan(k.angle)
    assert Keypoints.concat([kps, kps[:1]]).x.tolist() == [1, 3, 1]
    assert len(Keypoints.concat([])) == 0
    with pytest.raises(ValueError):
        Keypoints([1, 2], [1], [0, 0], [1, 1])
