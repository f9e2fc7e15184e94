"""Seeded synthetic frames for tests, sweeps and benchmarks."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .image import GrayImage, write_image


def textured_frame(width: int = 752, height: int = 480, seed: int = 0, n_shapes: int | None = None) -> GrayImage:
    """Piecewise-constant rectangles over a shaded background, plus mild noise.

    Rectangle corners give the detector plenty of real corners; the noise
    keeps flat areas from being perfectly flat.
    """
    rng = np.random.default_rng(seed)
    if n_shapes is None:
        n_shapes = max(8, width * height // 2000)
    yy, xx = np.mgrid[0:height, 0:width]
    img = 90.0 + 50.0 * np.sin(xx / width * np.pi * 1.5 + rng.uniform(0, 6)) * np.cos(yy / height * np.pi)
    for _ in range(n_shapes):
        w = int(rng.integers(6, max(7, width // 8)))
        h = int(rng.integers(6, max(7, height // 8)))
        x = int(rng.integers(0, max(1, width - w)))
        y = int(rng.integers(0, max(1, height - h)))
        img[y: y + h, x: x + w] = rng.uniform(20, 235)
    img += rng.normal(0.0, 2.0, size=img.shape)
    return GrayImage(np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8))


def darken(img: GrayImage, power: float = 3.0) -> GrayImage:
    """Apply ``v -> round(255 * (v / 255) ** power)`` (rounding half-up)."""
    v = img.data.astype(np.float64) / 255.0
    return GrayImage(np.floor(255.0 * v**power + 0.5).astype(np.uint8))


def translate(img: GrayImage, dx: int, dy: int) -> GrayImage:
    """Integer shift so that ``out[y, x] = img[y - dy, x - dx]``; uncovered pixels replicate the edge."""
    h, w = img.shape
    ys = np.clip(np.arange(h) - dy, 0, h - 1)
    xs = np.clip(np.arange(w) - dx, 0, w - 1)
    return GrayImage(img.data[np.ix_(ys, xs)])


def noise_frame(width: int, height: int, seed: int = 0) -> GrayImage:
    rng = np.random.default_rng(seed)
    return GrayImage(rng.integers(0, 256, size=(height, width), dtype=np.uint8))


def sequence(n: int, width: int = 752, height: int = 480, seed: int = 0, step: int = 2) -> list[GrayImage]:
    """A panning sequence: frame i is the base frame shifted by ``i * step`` pixels."""
    base = textured_frame(width, height, seed)
    return [translate(base, i * step, (i * step) // 2) for i in range(n)]


def write_plain_sequence(directory, frames, suffix: str = ".png") -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, frame in enumerate(frames):
        p = directory / f"{i:06d}{suffix}"
        write_image(p, frame)
        paths.append(p)
    return paths


def write_euroc_sequence(root, frames, t0: int = 1403636579763555584, dt: int = 50_000_000) -> Path:
    """Lay frames out as ``mav0/cam0/data.csv`` + ``mav0/cam0/data/<ts>.png``."""
    cam = Path(root) / "mav0" / "cam0"
    (cam / "data").mkdir(parents=True, exist_ok=True)
    lines = ["#timestamp [ns],filename"]
    for i, frame in enumerate(frames):
        ts = t0 + i * dt
        write_image(cam / "data" / f"{ts}.png", frame)
        lines.append(f"{ts},{ts}.png")
    (cam / "data.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return Path(root)
