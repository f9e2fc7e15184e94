"""Global and per-subregion FAST thresholds.

The global threshold blends histogram entropy (bits) and mean Sobel magnitude.
Each square subregion gets a local threshold from the distance between its
center pixel and its Otsu split; the result is clipped to
``[f_t_min, global]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError
from .image import GrayImage, histogram, normalize_histogram


@dataclass(frozen=True)
class ThresholdConfig:
    alpha: float = 2.0
    beta: float = 0.25
    delta: float = 0.5
    subregion_size: int = 40
    f_t_min: float = 7.0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("alpha and beta must be >= 0")
        if not self.delta > 0:
            raise ConfigError(f"delta must be > 0, got {self.delta}")
        if self.subregion_size < 8:
            raise ConfigError(f"subregion_size must be >= 8, got {self.subregion_size}")
        if self.f_t_min < 1:
            raise ConfigError(f"f_t_min must be >= 1, got {self.f_t_min}")


@dataclass(frozen=True)
class GlobalStats:
    entropy: float
    mean_gradient: float
    global_threshold: float


@dataclass(frozen=True)
class CellThreshold:
    row: int
    col: int
    x: int
    y: int
    width: int
    height: int
    otsu: int
    center_intensity: int
    local: float
    final: float


@dataclass(frozen=True, eq=False)
class ThresholdMap:
    """Per-cell thresholds on a regular grid over the level-0 image.

    Arrays are indexed ``[row, col]``. The last row/column of cells is
    truncated when the image size is not a multiple of ``cell_size``.
    """

    width: int
    height: int
    cell_size: int
    otsu: np.ndarray
    center: np.ndarray
    local: np.ndarray
    final: np.ndarray
    stats: GlobalStats | None
    f_t_min: float = 0.0

    @property
    def grid_w(self) -> int:
        return self.final.shape[1]

    @property
    def grid_h(self) -> int:
        return self.final.shape[0]

    @classmethod
    def uniform(cls, width: int, height: int, t: float, cell_size: int | None = None) -> ThresholdMap:
        """A single fixed threshold everywhere (the non-adaptive baseline)."""
        size = cell_size or max(width, height)
        gh, gw = -(-height // size), -(-width // size)
        full = np.full((gh, gw), float(t))
        zeros = np.zeros((gh, gw), dtype=np.int64)
        return cls(width, height, size, zeros, zeros.copy(), full.copy(), full, None, float(t))

    def cell_rect(self, row: int, col: int) -> tuple[int, int, int, int]:
        x = col * self.cell_size
        y = row * self.cell_size
        return x, y, min(self.cell_size, self.width - x), min(self.cell_size, self.height - y)

    def threshold_at(self, x: float, y: float) -> float:
        col = min(max(int(x), 0), self.width - 1) // self.cell_size
        row = min(max(int(y), 0), self.height - 1) // self.cell_size
        return float(self.final[row, col])

    def cells(self) -> list[CellThreshold]:
        out = []
        for r in range(self.grid_h):
            for c in range(self.grid_w):
                x, y, w, h = self.cell_rect(r, c)
                out.append(
                    CellThreshold(
                        r, c, x, y, w, h,
                        int(self.otsu[r, c]), int(self.center[r, c]),
                        float(self.local[r, c]), float(self.final[r, c]),
                    )
                )
        return out

    def to_dict(self) -> dict:
        stats = None
        if self.stats is not None:
            stats = {
                "entropy": self.stats.entropy,
                "mean_gradient": self.stats.mean_gradient,
                "global_threshold": self.stats.global_threshold,
            }
        return {
            "width": self.width,
            "height": self.height,
            "cell_size": self.cell_size,
            "grid_w": self.grid_w,
            "grid_h": self.grid_h,
            "global": stats,
            "cells": [
                {
                    "row": c.row, "col": c.col, "x": c.x, "y": c.y, "w": c.width, "h": c.height,
                    "otsu": c.otsu, "center_intensity": c.center_intensity,
                    "local": c.local, "final": c.final,
                }
                for c in self.cells()
            ],
        }


def entropy(img: GrayImage) -> float:
    """Shannon entropy of the intensity histogram, in bits."""
    p = normalize_histogram(histogram(img))
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum()) + 0.0


@njit(cache=True, nogil=True)
def _mean_gradient(src):
    h, w = src.shape
    acc = 0.0
    for y in range(h):
        y0 = max(y - 1, 0)
        y1 = min(y + 1, h - 1)
        for x in range(w):
            x0 = max(x - 1, 0)
            x1 = min(x + 1, w - 1)
            a = float(src[y0, x0])
            b = float(src[y0, x])
            c = float(src[y0, x1])
            d = float(src[y, x0])
            f = float(src[y, x1])
            g = float(src[y1, x0])
            k = float(src[y1, x])
            m = float(src[y1, x1])
            gx = (c + 2.0 * f + m) - (a + 2.0 * d + g)
            gy = (g + 2.0 * k + m) - (a + 2.0 * b + c)
            acc += math.sqrt(gx * gx + gy * gy)
    return acc / (h * w)


def mean_gradient(img: GrayImage) -> float:
    """Mean Sobel gradient magnitude over every pixel (replicated borders)."""
    return float(_mean_gradient(img.data))


def global_threshold(entropy_bits: float, gradient: float, cfg: ThresholdConfig) -> float:
    return cfg.alpha * entropy_bits + cfg.beta * gradient


def global_stats(img: GrayImage, cfg: ThresholdConfig) -> GlobalStats:
    fh = entropy(img)
    fg = mean_gradient(img)
    return GlobalStats(fh, fg, global_threshold(fh, fg, cfg))


_AMBIGUOUS = -2


@njit(cache=True, nogil=True)
def _otsu_from_hist(hist):
    # sigma^2(t) = (mu_T * P_t - mu_t)^2 / (P_t (1 - P_t)) for 0 < P_t < 1;
    # validity is decided on integer counts so rounding never admits P_t == 1.
    # Returns _AMBIGUOUS when two different splits come within float noise
    # of the maximum, so the caller can settle it exactly.
    n = 0
    total = 0
    for i in range(256):
        n += hist[i]
        total += i * hist[i]
    mu_total = total / n
    var = np.full(255, -1.0)
    counts = np.zeros(255, dtype=np.int64)
    best_t = -1
    best = -1.0
    count = 0
    moment = 0
    for t in range(255):
        count += hist[t]
        moment += t * hist[t]
        counts[t] = count
        if count == 0 or count == n:
            continue
        p_t = count / n
        mu_t = moment / n
        diff = mu_total * p_t - mu_t
        var[t] = diff * diff / (p_t * (1.0 - p_t))
        if var[t] > best:
            best = var[t]
            best_t = t
    if best_t < 0:
        for i in range(256):
            if hist[i] > 0:
                return i
    # Splits with the same count as best_t are the same partition (empty bins in between).
    tol = best * 1e-9
    for t in range(255):
        if var[t] >= best - tol and counts[t] != counts[best_t]:
            return _AMBIGUOUS
    return best_t


def _otsu_exact(hist) -> int:
    # Integer form of the same criterion: maximise (T c - n m)^2 / (c (n - c)).
    hist = [int(v) for v in hist]
    n = sum(hist)
    total = sum(i * v for i, v in enumerate(hist))
    best_t, best_num, best_den = -1, 0, 1
    c = m = 0
    for t in range(255):
        c += hist[t]
        m += t * hist[t]
        if c == 0 or c == n:
            continue
        num = (total * c - n * m) ** 2
        den = c * (n - c)
        if best_t < 0 or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    if best_t < 0:
        return next(i for i, v in enumerate(hist) if v)
    return best_t


def otsu_from_histogram(hist) -> int:
    hist = np.ascontiguousarray(hist, dtype=np.int64)
    if hist.shape != (256,) or hist.sum() <= 0:
        raise ValueError("need a non-empty 256-bin histogram")
    t = int(_otsu_from_hist(hist))
    return _otsu_exact(hist) if t == _AMBIGUOUS else t


def otsu_threshold(region) -> int:
    """Otsu split of a region (GrayImage or 2-D uint8 array).

    Ties go to the smallest threshold; a single-intensity region returns
    that intensity.
    """
    data = region.data if isinstance(region, GrayImage) else np.asarray(region)
    if data.size == 0:
        raise ValueError("empty region")
    return otsu_from_histogram(np.bincount(data.ravel(), minlength=256))


def local_threshold(region, cfg: ThresholdConfig) -> tuple[int, int, float]:
    """Return ``(center_intensity, otsu, delta * |center - otsu|)`` for a region."""
    data = region.data if isinstance(region, GrayImage) else np.asarray(region)
    h, w = data.shape
    center = int(data[h // 2, w // 2])
    t_o = otsu_threshold(data)
    return center, t_o, cfg.delta * abs(center - t_o)


@njit(cache=True, nogil=True)
def _cell_stats(src, size):
    h, w = src.shape
    gh = (h + size - 1) // size
    gw = (w + size - 1) // size
    otsu = np.empty((gh, gw), dtype=np.int64)
    center = np.empty((gh, gw), dtype=np.int64)
    hist = np.empty(256, dtype=np.int64)
    for r in range(gh):
        y0 = r * size
        y1 = min(y0 + size, h)
        for c in range(gw):
            x0 = c * size
            x1 = min(x0 + size, w)
            hist[:] = 0
            for y in range(y0, y1):
                for x in range(x0, x1):
                    hist[src[y, x]] += 1
            otsu[r, c] = _otsu_from_hist(hist)
            center[r, c] = src[y0 + (y1 - y0) // 2, x0 + (x1 - x0) // 2]
    return otsu, center


def clip_threshold(local, f_t_min: float, upper: float):
    """Clip into ``[f_t_min, upper]``; when ``upper < f_t_min`` the floor wins."""
    return np.maximum(np.minimum(local, upper), f_t_min)


def threshold_map(img: GrayImage, cfg: ThresholdConfig | None = None) -> ThresholdMap:
    cfg = cfg or ThresholdConfig()
    stats = global_stats(img, cfg)
    otsu, center = _cell_stats(img.data, cfg.subregion_size)
    for r, c in zip(*np.nonzero(otsu == _AMBIGUOUS)):
        x, y = c * cfg.subregion_size, r * cfg.subregion_size
        cell = img.data[y: y + cfg.subregion_size, x: x + cfg.subregion_size]
        otsu[r, c] = _otsu_exact(np.bincount(cell.ravel(), minlength=256))
    local = cfg.delta * np.abs(center - otsu).astype(np.float64)
    final = clip_threshold(local, cfg.f_t_min, stats.global_threshold)
    return ThresholdMap(
        width=img.width,
        height=img.height,
        cell_size=cfg.subregion_size,
        otsu=otsu,
        center=center,
        local=local,
        final=final,
        stats=stats,
        f_t_min=cfg.f_t_min,
    )
