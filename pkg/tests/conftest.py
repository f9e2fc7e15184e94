import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lumen_front import synthetic
from lumen_front.image import GrayImage

# First calls pay for JIT compilation, so no per-example deadline.
settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def textured():
    return synthetic.textured_frame(320, 240, seed=1)


@pytest.fixture(scope="session")
def darkened(textured):
    return synthetic.darken(textured)


def random_image(rng, h, w, lo=0, hi=256):
    return GrayImage(rng.integers(lo, hi, size=(h, w), dtype=np.uint8))


# ---------------------------------------------------------------- acceptance summary
#
# Tests marked ``@pytest.mark.criterion(n, "title")`` may attach a "measured"
# user property; the terminal summary prints one PASS/FAIL line per criterion.

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = mark.args
    measured = dict(item.user_properties).get("measured", "")
    _CRITERIA[number] = (title, "PASS" if rep.passed else "FAIL", measured)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict, measured = _CRITERIA[number]
        line = f"criterion {number:2d} {verdict}  {title}"
        terminalreporter.write_line(f"{line}  [{measured}]" if measured else line)
