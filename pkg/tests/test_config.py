import pytest

from lumen_front.config import MatchConfig, PipelineConfig, StageToggles, dumps_toml
from lumen_front.errors import ConfigError


def test_defaults():
    cfg = PipelineConfig()
    assert cfg.enhancement.lambda_ == 0.5 and cfg.threshold.subregion_size == 40
    assert cfg.detector.n_levels == 4 and cfg.cull.s_min == 0.3
    assert cfg.stages == StageToggles() and cfg.stages.fixed_threshold == 20.0
    assert cfg.matching == MatchConfig(0.8, 2.0)


def test_load_toml(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text(
        "[enhancement]\nlambda = 0.75\nsigma = 1.5\n"
        "[threshold]\nf_t_min = 9\n"
        "[cull]\ninvert_lighting_term = true\nw1 = 0.5\nw2 = 0.5\n"
        "[stages]\ncull = false\n"
    )
    cfg = PipelineConfig.load(p)
    assert cfg.enhancement.lambda_ == 0.75 and cfg.enhancement.sigma == 1.5
    assert cfg.threshold.f_t_min == 9.0 and isinstance(cfg.threshold.f_t_min, float)
    assert cfg.cull.invert_lighting_term and not cfg.stages.cull
    assert cfg.detector == PipelineConfig().detector


def test_round_trip_through_toml(tmp_path):
    cfg = PipelineConfig().with_stages(enhance=False, fixed_threshold=12.5)
    p = tmp_path / "c.toml"
    p.write_text(dumps_toml(cfg))
    assert PipelineConfig.load(p) == cfg
    assert "lambda = 0.5" in p.read_text()


@pytest.mark.parametrize("text,match", [
    ("[enhancement]\nsigmaa = 1.0\n", "unknown key 'sigmaa'"),
    ("[detectors]\nn_levels = 2\n", r"unknown config section \[detectors\]"),
    ("[detector]\nn_levels = 2.5\n", "must be an integer"),
    ("[stages]\ncull = 1\n", "true or false"),
    ("[threshold]\ndelta = \"big\"\n", "must be a number"),
    ("[cull]\nw1 = 0.9\n", "sum to 1"),
    ("enhancement = 3\n", "must be a table"),
    ("[enhancement\n", "line 1"),
])
def test_bad_configs_name_the_problem(tmp_path, text, match):
    p = tmp_path / "bad.toml"
    p.write_text(text)
    with pytest.raises(ConfigError, match=match) as exc:
        PipelineConfig.load(p)
    assert "bad.toml" in str(exc.value)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="nope.toml"):
        PipelineConfig.load(tmp_path / "nope.toml")


def test_invalid_toggles():
    with pytest.raises(ConfigError):
        StageToggles(fixed_threshold=0.5)
    with pytest.raises(ConfigError):
        MatchConfig(ratio_threshold=-1)
