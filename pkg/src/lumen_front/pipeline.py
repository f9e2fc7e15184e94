"""Per-frame orchestration plus the sweep, matching and benchmark drivers."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import PipelineConfig
from .culling import CullReport, cull
from .dataset import FrameSource
from .descriptor import Match, compute_descriptors, match
from .detector import Keypoints, build_pyramid, count_candidates, detect
from .enhance import BrightnessClass, EnhancedFrame, enhance
from .errors import FrameError, LumenError, TooFewFrames
from .image import GrayImage, read_image
from .threshold import GlobalStats, ThresholdMap, threshold_map

STAGES = ("enhance", "threshold", "detect", "describe", "cull")


@dataclass(eq=False)
class FrameResult:
    frame_id: int
    brightness: BrightnessClass | None
    stats: GlobalStats | None
    detected: Keypoints
    keypoints: Keypoints  # kept after culling
    descriptors: np.ndarray  # uint8[n_kept, 32]
    valid: np.ndarray  # descriptor validity per kept keypoint
    report: CullReport | None
    timings: dict[str, float] = field(default_factory=dict)
    enhanced: EnhancedFrame | None = None
    tmap: ThresholdMap | None = None
    image: GrayImage | None = None  # detector input

    @property
    def n_detected(self) -> int:
        return len(self.detected)

    @property
    def n_kept(self) -> int:
        return len(self.keypoints)


def run_frame(img: GrayImage, cfg: PipelineConfig | None = None, frame_id: int = 0) -> FrameResult:
    """Enhance -> threshold map -> detect -> describe -> cull, honouring stage toggles.

    Disabled stages fall back to the raw image, a uniform ``fixed_threshold``,
    and keeping every detection respectively.
    """
    cfg = cfg or PipelineConfig()
    try:
        return _run_frame(img, cfg, frame_id)
    except LumenError as exc:
        raise FrameError(frame_id, exc) from exc


def _run_frame(img: GrayImage, cfg: PipelineConfig, frame_id: int) -> FrameResult:
    timings = {}
    clock = time.perf_counter

    t0 = clock()
    enhanced = None
    work = img
    if cfg.stages.enhance:
        enhanced = enhance(img, cfg.enhancement)
        work = enhanced.output
    t1 = clock()
    timings["enhance"] = (t1 - t0) * 1e3

    if cfg.stages.adaptive_threshold:
        tmap = threshold_map(work, cfg.threshold)
    else:
        tmap = ThresholdMap.uniform(work.width, work.height, cfg.stages.fixed_threshold)
    t2 = clock()
    timings["threshold"] = (t2 - t1) * 1e3

    pyramid = build_pyramid(work, cfg.detector)
    detected = detect(work, tmap, cfg.detector, pyramid)
    t3 = clock()
    timings["detect"] = (t3 - t2) * 1e3

    detected, desc, valid = compute_descriptors(pyramid, detected, cfg.detector.scale_factor)
    t4 = clock()
    timings["describe"] = (t4 - t3) * 1e3

    report = None
    kept, kept_desc, kept_valid = detected, desc, valid
    if cfg.stages.cull:
        kept, report = cull(detected, work, cfg.cull)
        idx = report.kept_indices
        kept_desc, kept_valid = desc[idx], valid[idx]
    t5 = clock()
    timings["cull"] = (t5 - t4) * 1e3
    timings["total"] = (t5 - t0) * 1e3

    return FrameResult(
        frame_id=frame_id,
        brightness=enhanced.brightness if enhanced else None,
        stats=tmap.stats,
        detected=detected,
        keypoints=kept,
        descriptors=kept_desc,
        valid=kept_valid,
        report=report,
        timings=timings,
        enhanced=enhanced,
        tmap=tmap,
        image=work,
    )


def run_sequence(source: FrameSource, cfg: PipelineConfig, threads: int = 1):
    """Process every frame; results come back in frame order whatever the thread count."""

    def job(item):
        i, (_, path) = item
        try:
            img = read_image(path)
        except LumenError as exc:
            raise FrameError(i, exc) from exc
        return run_frame(img, cfg, frame_id=i)

    items = list(enumerate(source.frames))
    if threads <= 1:
        return [job(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(job, items))


# ---------------------------------------------------------------- sweep


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    count_raw: int
    count_enhanced: int


def sweep(img: GrayImage, thresholds, cfg: PipelineConfig | None = None) -> list[SweepRow]:
    """Pre-NMS level-0 FAST counts per uniform threshold, raw vs enhanced."""
    cfg = cfg or PipelineConfig()
    thresholds = list(thresholds)
    if not thresholds:
        raise ValueError("at least one threshold is required")
    if any(t < 1 for t in thresholds):
        raise ValueError("thresholds must be >= 1")
    enhanced = enhance(img, cfg.enhancement).output
    return [SweepRow(t, count_candidates(img, t), count_candidates(enhanced, t)) for t in thresholds]


def parse_range(spec: str) -> list[float]:
    """``"a:b:step"`` -> [a, a+step, ..., <= b]; a bare number is a single threshold."""
    parts = spec.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad threshold range {spec!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3 or nums[2] <= 0 or nums[1] < nums[0]:
        raise ValueError(f"bad threshold range {spec!r}; expected a:b:step with step > 0")
    a, b, step = nums
    n = int(np.floor((b - a) / step + 1e-9)) + 1
    return [a + i * step for i in range(n)]


# ---------------------------------------------------------------- matching


@dataclass(eq=False)
class MatchReport:
    n_a: int
    n_b: int
    matches: list[Match]
    points_a: np.ndarray  # (n_matches, 2) level-0 coordinates
    points_b: np.ndarray
    inliers: np.ndarray  # bool per match
    self_matches: int  # matches with index_a == index_b and distance 0

    @property
    def n_matches(self) -> int:
        return len(self.matches)

    @property
    def mean_hamming(self) -> float:
        if not self.matches:
            return 0.0
        return float(np.mean([m.hamming_distance for m in self.matches]))

    @property
    def inlier_ratio(self) -> float:
        return float(self.inliers.mean()) if self.matches else 0.0


def _project(h: np.ndarray, pts: np.ndarray) -> np.ndarray:
    ph = np.hstack([pts, np.ones((pts.shape[0], 1))]) @ h.T
    return ph[:, :2] / ph[:, 2:3]


def match_frames(
    frame_a: GrayImage,
    frame_b: GrayImage,
    cfg: PipelineConfig | None = None,
    homography=None,
) -> MatchReport:
    """Match the kept, validly described keypoints of two frames.

    ``homography`` maps frame-a pixels onto frame-b (identity by default); a
    match is an inlier when the projected point lands within
    ``matching.inlier_tolerance`` pixels of its partner.
    """
    cfg = cfg or PipelineConfig()
    h = np.eye(3) if homography is None else np.asarray(homography, dtype=np.float64)
    ra = run_frame(frame_a, cfg, 0)
    rb = run_frame(frame_b, cfg, 1)
    ia = np.nonzero(ra.valid)[0]
    ib = np.nonzero(rb.valid)[0]
    empty = np.zeros((0, 2))
    if ia.size == 0 or ib.size == 0:
        return MatchReport(ia.size, ib.size, [], empty, empty, np.zeros(0, bool), 0)
    raw = match(ra.descriptors[ia], rb.descriptors[ib], cfg.matching.ratio_threshold)
    matches = [Match(int(ia[m.index_a]), int(ib[m.index_b]), m.hamming_distance, m.ratio) for m in raw]
    sel_a = np.array([m.index_a for m in matches], dtype=np.int64)
    sel_b = np.array([m.index_b for m in matches], dtype=np.int64)
    pa = np.stack([ra.keypoints.x[sel_a], ra.keypoints.y[sel_a]], axis=1) if matches else empty
    pb = np.stack([rb.keypoints.x[sel_b], rb.keypoints.y[sel_b]], axis=1) if matches else empty
    if matches:
        err = np.linalg.norm(_project(h, pa) - pb, axis=1)
        inliers = err <= cfg.matching.inlier_tolerance
    else:
        inliers = np.zeros(0, bool)
    self_matches = sum(1 for m in matches if m.index_a == m.index_b and m.hamming_distance == 0)
    return MatchReport(ia.size, ib.size, matches, pa, pb, inliers, self_matches)


# ---------------------------------------------------------------- benchmark


@dataclass(frozen=True)
class StageTiming:
    stage: str
    mean_ms: float
    p95_ms: float


@dataclass(frozen=True)
class BenchReport:
    n_frames: int
    width: int
    height: int
    stages: tuple[StageTiming, ...]
    budget_ms: float

    @property
    def total(self) -> StageTiming:
        return self.stages[-1]

    @property
    def within_budget(self) -> bool:
        return self.total.p95_ms <= self.budget_ms


def bench_frames(frames: list[GrayImage], cfg: PipelineConfig | None = None, budget_ms: float = 50.0) -> BenchReport:
    cfg = cfg or PipelineConfig()
    if len(frames) < 10:
        raise TooFewFrames(f"benchmark needs at least 10 frames, got {len(frames)}")
    run_frame(frames[0], cfg)  # warm-up: JIT compilation and caches
    samples = {s: [] for s in (*STAGES, "total")}
    for i, img in enumerate(frames):
        res = run_frame(img, cfg, i)
        for s in samples:
            samples[s].append(res.timings[s])
    rows = tuple(
        StageTiming(s, float(np.mean(v)), float(np.percentile(v, 95))) for s, v in samples.items()
    )
    return BenchReport(len(frames), frames[0].width, frames[0].height, rows, float(budget_ms))


def bench(source: FrameSource, cfg: PipelineConfig | None = None, budget_ms: float = 50.0) -> BenchReport:
    """Time the full pipeline per frame; images are decoded before timing starts."""
    if len(source) < 10:
        raise TooFewFrames(f"{source.root}: benchmark needs at least 10 frames, got {len(source)}")
    frames = []
    for i, (_, path) in enumerate(source.frames):
        try:
            frames.append(read_image(path))
        except LumenError as exc:
            raise FrameError(i, exc) from exc
    return bench_frames(frames, cfg, budget_ms)
