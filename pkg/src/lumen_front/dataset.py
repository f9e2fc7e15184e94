"""Frame sequence loading for EuRoC, TUM-VI and plain image directories.

Only the left camera (cam0) is read. Both EuRoC and TUM-VI index images
with a ``data.csv`` of ``timestamp_ns,filename`` lines next to a ``data/``
directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedIndex, MissingDirectory, MissingIndex, UnreadableImage

KINDS = ("euroc", "tumvi", "plain")
IMAGE_SUFFIXES = (".png", ".pgm")


@dataclass(frozen=True)
class FrameSource:
    frames: tuple[tuple[int, Path], ...]
    kind: str
    root: Path

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    @property
    def timestamps(self) -> list[int]:
        return [t for t, _ in self.frames]

    @property
    def paths(self) -> list[Path]:
        return [p for _, p in self.frames]


def _cam0_dir(root: Path, kind: str) -> Path:
    candidates = [root / "mav0" / "cam0", root / "cam0"] if kind == "tumvi" else [root / "mav0" / "cam0"]
    for c in candidates:
        if (c / "data.csv").exists():
            return c
    return candidates[0]


def _read_index(csv_path: Path, image_dir: Path) -> list[tuple[int, Path]]:
    frames = []
    with open(csv_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2 or not parts[1]:
                raise MalformedIndex(f"{csv_path}:{lineno}: expected 'timestamp,filename', got {line!r}")
            try:
                ts = int(parts[0])
            except ValueError:
                raise MalformedIndex(f"{csv_path}:{lineno}: timestamp {parts[0]!r} is not an integer") from None
            if frames and ts <= frames[-1][0]:
                raise MalformedIndex(f"{csv_path}:{lineno}: timestamp {ts} does not increase")
            frames.append((ts, image_dir / parts[1]))
    return frames


def load_sequence(path, kind: str = "plain") -> FrameSource:
    root = Path(path)
    if kind not in KINDS:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    if not root.is_dir():
        raise MissingDirectory(f"{root}: not a directory")
    if kind == "plain":
        files = sorted(
            (p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES and p.is_file()),
            key=lambda p: p.name,
        )
        frames = [(i, p) for i, p in enumerate(files)]
    else:
        cam = _cam0_dir(root, kind)
        csv_path = cam / "data.csv"
        if not csv_path.exists():
            raise MissingIndex(f"{csv_path}: index file not found")
        frames = _read_index(csv_path, cam / "data")
    for _, p in frames:
        if not p.is_file() or not os.access(p, os.R_OK):
            raise UnreadableImage(f"{p}: image listed in the sequence is missing or unreadable")
    return FrameSource(tuple(frames), kind, root)
