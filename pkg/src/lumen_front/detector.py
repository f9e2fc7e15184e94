"""FAST-9 corner detection over an image pyramid with per-cell thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError, OutOfBounds
from .image import GrayImage
from .threshold import ThresholdMap

ARC_LENGTH = 9
MARGIN = 3

# Bresenham circle of radius 3, clockwise from 12 o'clock, as (dx, dy).
CIRCLE = np.array(
    [
        (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
        (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
    ],
    dtype=np.int64,
)
_CX = CIRCLE[:, 0].copy()
_CY = CIRCLE[:, 1].copy()


@dataclass(frozen=True)
class DetectorConfig:
    n_levels: int = 4
    scale_factor: float = 1.2
    nms_radius: int = 3
    max_features: int = 2000

    def __post_init__(self):
        if self.n_levels < 1:
            raise ConfigError(f"n_levels must be >= 1, got {self.n_levels}")
        if not self.scale_factor > 1:
            raise ConfigError(f"scale_factor must be > 1, got {self.scale_factor}")
        if self.nms_radius < 0:
            raise ConfigError(f"nms_radius must be >= 0, got {self.nms_radius}")
        if self.max_features <= 0:
            raise ConfigError(f"max_features must be > 0, got {self.max_features}")

    @property
    def arc_length(self) -> int:
        return ARC_LENGTH


@dataclass(frozen=True)
class Keypoint:
    x: float
    y: float
    octave: int
    response: float
    angle: float = math.nan


class Keypoints:
    """Column store of keypoints; coordinates are in the level-0 frame."""

    __slots__ = ("x", "y", "octave", "response", "angle")

    def __init__(self, x=(), y=(), octave=(), response=(), angle=None):
        self.x = np.asarray(x, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        self.octave = np.asarray(octave, dtype=np.int64)
        self.response = np.asarray(response, dtype=np.float64)
        if angle is None:
            angle = np.full(self.x.shape, np.nan)
        self.angle = np.asarray(angle, dtype=np.float64)
        n = self.x.shape[0]
        if not all(a.shape == (n,) for a in (self.y, self.octave, self.response, self.angle)):
            raise ValueError("keypoint columns must be 1-D and equally long")

    @classmethod
    def from_list(cls, kps) -> Keypoints:
        kps = list(kps)
        return cls(
            [k.x for k in kps], [k.y for k in kps], [k.octave for k in kps],
            [k.response for k in kps], [k.angle for k in kps],
        )

    @classmethod
    def concat(cls, parts) -> Keypoints:
        parts = list(parts)
        if not parts:
            return cls()
        return cls(*(np.concatenate([getattr(p, f) for p in parts]) for f in cls.__slots__))

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, idx):
        if isinstance(idx, (int, np.integer)):
            return Keypoint(
                float(self.x[idx]), float(self.y[idx]), int(self.octave[idx]),
                float(self.response[idx]), float(self.angle[idx]),
            )
        return Keypoints(*(getattr(self, f)[idx] for f in self.__slots__))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, Keypoints):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f), equal_nan=True)
            for f in self.__slots__
        )

    def __repr__(self):
        return f"Keypoints(n={len(self)})"

    def with_angles(self, angle) -> Keypoints:
        return Keypoints(self.x, self.y, self.octave, self.response, angle)


# ---------------------------------------------------------------- reference


def _check_interior(img: GrayImage, x: int, y: int) -> None:
    if not (MARGIN <= x < img.width - MARGIN and MARGIN <= y < img.height - MARGIN):
        raise OutOfBounds(f"({x}, {y}) is within {MARGIN} px of the border of a {img.width}x{img.height} image")


def fast_segment_test(img: GrayImage, x: int, y: int, t: float) -> bool:
    """True iff 9 contiguous circle pixels are all > center + t or all < center - t."""
    _check_interior(img, x, y)
    data = img.data
    c = int(data[y, x])
    ring = [int(data[y + dy, x + dx]) for dx, dy in CIRCLE]
    for sign in (1, -1):
        run = 0
        # Walk the ring twice so arcs may wrap past index 15.
        for v in ring + ring:
            if sign * (v - c) > t:
                run += 1
                if run >= ARC_LENGTH:
                    return True
            else:
                run = 0
    return False


def corner_score(img: GrayImage, x: int, y: int) -> int:
    """Largest integer threshold at which the segment test still passes (0 if none)."""
    _check_interior(img, x, y)
    if not fast_segment_test(img, x, y, 0):
        return 0
    lo, hi = 0, 255  # passes at lo; fails at hi since no difference exceeds 255
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fast_segment_test(img, x, y, mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------- fast path


@njit(cache=True, nogil=True)
def _has_arc(mask):
    m = mask | (mask << 16)
    run = m
    for k in range(1, 9):
        run &= m >> k
    return run != 0


@njit(cache=True, nogil=True)
def _arc_score(d, sign):
    best = -1000
    for s in range(16):
        mn = 1000
        for j in range(9):
            v = sign * d[(s + j) & 15]
            if v < mn:
                mn = v
        if mn > best:
            best = mn
    return best


@njit(cache=True, nogil=True)
def _score_map(src, thr_int, row_cell, col_cell, cx, cy):
    # Returns int32 scores, -1 where the segment test fails. thr_int holds
    # floor(threshold): for integer differences d > t <=> d > floor(t).
    h, w = src.shape
    out = np.full((h, w), -1, dtype=np.int32)
    d = np.empty(16, dtype=np.int32)
    for y in range(3, h - 3):
        trow = thr_int[row_cell[y]]
        up = src[y - 3]
        row = src[y]
        down = src[y + 3]
        for x in range(3, w - 3):
            t = trow[col_cell[x]]
            c = np.int32(row[x])
            hi = c + t
            lo = c - t
            # Every 9-arc covers pixel 0 or pixel 8 (and pixel 4 or pixel 12).
            p0 = np.int32(up[x])
            p8 = np.int32(down[x])
            if not (p0 > hi or p8 > hi or p0 < lo or p8 < lo):
                continue
            p4 = np.int32(row[x + 3])
            p12 = np.int32(row[x - 3])
            nb = (p0 > hi) + (p4 > hi) + (p8 > hi) + (p12 > hi)
            nd = (p0 < lo) + (p4 < lo) + (p8 < lo) + (p12 < lo)
            if nb < 2 and nd < 2:
                continue
            bright = 0
            dark = 0
            for k in range(16):
                v = np.int32(src[y + cy[k], x + cx[k]])
                d[k] = v - c
                if v > hi:
                    bright |= 1 << k
                elif v < lo:
                    dark |= 1 << k
            if nb >= 2 and _has_arc(bright):
                out[y, x] = _arc_score(d, 1) - 1
            elif nd >= 2 and _has_arc(dark):
                out[y, x] = _arc_score(d, -1) - 1
    return out


@njit(cache=True, nogil=True)
def _nms(scores, radius):
    h, w = scores.shape
    n = 0
    for y in range(h):
        for x in range(w):
            if scores[y, x] >= 0:
                n += 1
    xs = np.empty(n, dtype=np.int64)
    ys = np.empty(n, dtype=np.int64)
    ss = np.empty(n, dtype=np.int64)
    k = 0
    for y in range(h):
        for x in range(w):
            s = scores[y, x]
            if s < 0:
                continue
            keep = True
            for yy in range(max(y - radius, 0), min(y + radius + 1, h)):
                for xx in range(max(x - radius, 0), min(x + radius + 1, w)):
                    q = scores[yy, xx]
                    if q < 0 or (yy == y and xx == x):
                        continue
                    # (score desc, y asc, x asc) is a strict total order.
                    if q > s or (q == s and (yy < y or (yy == y and xx < x))):
                        keep = False
                        break
                if not keep:
                    break
            if keep:
                xs[k] = x
                ys[k] = y
                ss[k] = s
                k += 1
    return xs[:k], ys[:k], ss[:k]


@njit(cache=True, nogil=True)
def _resize_bilinear(src, out_h, out_w):
    h, w = src.shape
    out = np.empty((out_h, out_w), dtype=np.uint8)
    sy = h / out_h
    sx = w / out_w
    x0s = np.empty(out_w, dtype=np.int64)
    x1s = np.empty(out_w, dtype=np.int64)
    fxs = np.empty(out_w, dtype=np.float64)
    for x in range(out_w):
        fx = (x + 0.5) * sx - 0.5
        if fx < 0.0:
            fx = 0.0
        x0 = int(math.floor(fx))
        if x0 > w - 1:
            x0 = w - 1
        x0s[x] = x0
        x1s[x] = min(x0 + 1, w - 1)
        fxs[x] = fx - x0
    for y in range(out_h):
        fy = (y + 0.5) * sy - 0.5
        if fy < 0.0:
            fy = 0.0
        y0 = int(math.floor(fy))
        if y0 > h - 1:
            y0 = h - 1
        y1 = min(y0 + 1, h - 1)
        ay = fy - y0
        for x in range(out_w):
            ax = fxs[x]
            a = src[y0, x0s[x]] * (1.0 - ax) + src[y0, x1s[x]] * ax
            b = src[y1, x0s[x]] * (1.0 - ax) + src[y1, x1s[x]] * ax
            v = a * (1.0 - ay) + b * ay
            out[y, x] = np.uint8(min(math.floor(v + 0.5), 255.0))
    return out


def level_scale(cfg: DetectorConfig, level: int) -> float:
    return cfg.scale_factor**level


def build_pyramid(img: GrayImage, cfg: DetectorConfig) -> list[GrayImage]:
    """Successively resampled levels; stops early once a level would drop below 8 px."""
    levels = [img]
    for lvl in range(1, cfg.n_levels):
        scale = level_scale(cfg, lvl)
        w = int(round(img.width / scale))
        h = int(round(img.height / scale))
        if w < 8 or h < 8:
            break
        levels.append(GrayImage(_resize_bilinear(levels[-1].data, h, w)))
    return levels


def _level_threshold_index(tmap: ThresholdMap, shape, scale: float):
    h, w = shape
    ys = np.minimum(np.floor(np.arange(h) * scale).astype(np.int64), tmap.height - 1)
    xs = np.minimum(np.floor(np.arange(w) * scale).astype(np.int64), tmap.width - 1)
    return ys // tmap.cell_size, xs // tmap.cell_size


def score_map(img: GrayImage, tmap: ThresholdMap, scale: float = 1.0) -> np.ndarray:
    """Per-pixel FAST score (-1 where the segment test fails) for one pyramid level."""
    row_cell, col_cell = _level_threshold_index(tmap, img.shape, scale)
    thr_int = np.floor(tmap.final).astype(np.int32)
    return _score_map(img.data, thr_int, row_cell, col_cell, _CX, _CY)


def candidates(img: GrayImage, t: float) -> np.ndarray:
    """Pre-NMS detections at a uniform threshold, as an ``(n, 2)`` array of (x, y)."""
    scores = score_map(img, ThresholdMap.uniform(img.width, img.height, t))
    ys, xs = np.nonzero(scores >= 0)
    return np.stack([xs, ys], axis=1)


def count_candidates(img: GrayImage, t: float) -> int:
    scores = score_map(img, ThresholdMap.uniform(img.width, img.height, t))
    return int(np.count_nonzero(scores >= 0))


def nms(scores: np.ndarray, radius: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Keep detections that beat every detected neighbour in the (2r+1)^2 window.

    Ties in score go to the smaller (y, x). Returns ``(xs, ys, scores)`` in
    raster order.
    """
    return _nms(np.ascontiguousarray(scores, dtype=np.int32), int(radius))


def detect(
    frame: GrayImage,
    tmap: ThresholdMap,
    cfg: DetectorConfig | None = None,
    pyramid: list[GrayImage] | None = None,
) -> Keypoints:
    cfg = cfg or DetectorConfig()
    if pyramid is None:
        pyramid = build_pyramid(frame, cfg)
    parts = []
    for lvl, level in enumerate(pyramid):
        scale = level_scale(cfg, lvl)
        xs, ys, ss = nms(score_map(level, tmap, scale), cfg.nms_radius)
        parts.append((xs, ys, ss, np.full(xs.shape, lvl, dtype=np.int64), scale))
    if not parts:
        return Keypoints()
    lx = np.concatenate([p[0] for p in parts])
    ly = np.concatenate([p[1] for p in parts])
    resp = np.concatenate([p[2] for p in parts]).astype(np.float64)
    octave = np.concatenate([p[3] for p in parts])
    scale = np.concatenate([np.full(p[0].shape, p[4]) for p in parts])
    order = np.lexsort((lx, ly, octave, -resp))[: cfg.max_features]
    return Keypoints(lx[order] * scale[order], ly[order] * scale[order], octave[order], resp[order])
