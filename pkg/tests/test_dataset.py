import numpy as np
import pytest

from lumen_front import synthetic
from lumen_front.dataset import load_sequence
from lumen_front.errors import MalformedIndex, MissingDirectory, MissingIndex, UnreadableImage
from lumen_front.image import GrayImage, write_image


def small(i):
    return GrayImage(np.full((8, 8), i, np.uint8))


def test_plain_directory_is_lexicographic(tmp_path):
    for i in reversed(range(1, 11)):
        write_image(tmp_path / f"{i:04d}.png", small(i))
    (tmp_path / "notes.txt").write_text("ignored")
    src = load_sequence(tmp_path, "plain")
    assert len(src) == 10 and src.timestamps == list(range(10))
    assert [p.name for p in src.paths] == [f"{i:04d}.png" for i in range(1, 11)]


def euroc(tmp_path, lines, files=("a.png", "b.png", "c.png")):
    cam = tmp_path / "mav0" / "cam0"
    (cam / "data").mkdir(parents=True)
    for i, f in enumerate(files):
        write_image(cam / "data" / f, small(i))
    (cam / "data.csv").write_text("\n".join(lines) + "\n")
    return tmp_path


def test_euroc_three_lines(tmp_path):
    root = euroc(tmp_path, ["#timestamp [ns],filename", "100,a.png", "250,b.png", "400,c.png"])
    src = load_sequence(root, "euroc")
    assert src.timestamps == [100, 250, 400]
    assert [p.name for p in src.paths] == ["a.png", "b.png", "c.png"]


def test_tumvi_accepts_either_layout(tmp_path):
    root = euroc(tmp_path, ["1,a.png", "2,b.png"])
    assert len(load_sequence(root, "tumvi")) == 2
    cam = tmp_path / "other" / "cam0"
    (cam / "data").mkdir(parents=True)
    write_image(cam / "data" / "x.png", small(1))
    (cam / "data.csv").write_text("5,x.png\n")
    assert load_sequence(tmp_path / "other", "tumvi").timestamps == [5]


def test_missing_index_names_expected_path(tmp_path):
    (tmp_path / "mav0" / "cam0").mkdir(parents=True)
    with pytest.raises(MissingIndex, match=r"mav0/cam0/data\.csv"):
        load_sequence(tmp_path, "euroc")


@pytest.mark.parametrize("lines", [
    ["100,a.png,extra"], ["abc,a.png"], ["100"], ["100,a.png", "100,b.png"], ["200,a.png", "100,b.png"],
])
def test_malformed_index(tmp_path, lines):
    root = euroc(tmp_path, lines)
    with pytest.raises(MalformedIndex, match="data.csv:"):
        load_sequence(root, "euroc")


def test_missing_image_and_directory(tmp_path):
    root = euroc(tmp_path, ["1,a.png", "2,gone.png"])
    with pytest.raises(UnreadableImage, match="gone.png"):
        load_sequence(root, "euroc")
    with pytest.raises(MissingDirectory):
        load_sequence(tmp_path / "absent", "plain")
    with pytest.raises(ValueError):
        load_sequence(tmp_path, "kitti")


def test_synthetic_writers_round_trip(tmp_path):
    frames = synthetic.sequence(3, 32, 24, seed=5)
    synthetic.write_plain_sequence(tmp_path / "p", frames)
    synthetic.write_euroc_sequence(tmp_path / "e", frames)
    assert len(load_sequence(tmp_path / "p")) == 3
    src = load_sequence(tmp_path / "e", "euroc")
    assert np.all(np.diff(src.timestamps) > 0)


def test_synthetic_helpers():
    a = synthetic.textured_frame(40, 30, seed=2)
    assert a == synthetic.textured_frame(40, 30, seed=2)
    t = synthetic.translate(a, 2, 1)
    assert np.array_equal(t.data[1:, 2:], a.data[:-1, :-2])
    d = synthetic.darken(GrayImage(np.full((8, 8), 128, np.uint8)))
    assert np.all(d.data == 32)  # round(255 * (128/255)^3) = round(32.25)
