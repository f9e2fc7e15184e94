"""Pipeline configuration and its TOML representation.

Sections mirror the sub-configs::

    [enhancement]   sigma, kernel_size, lambda, tau, mu_expected, t_bright, t_dim, epsilon, eta
    [threshold]     alpha, beta, delta, subregion_size, f_t_min
    [detector]      n_levels, scale_factor, nms_radius, max_features
    [cull]          max_per_leaf, max_depth, d_opt, k, rho, h_th, w1, w2, s_min, invert_lighting_term
    [matching]      ratio_threshold, inlier_tolerance
    [stages]        enhance, adaptive_threshold, cull, fixed_threshold

Unknown sections or keys are rejected.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .culling import CullConfig
from .detector import DetectorConfig
from .enhance import EnhancementConfig
from .errors import ConfigError
from .threshold import ThresholdConfig

# TOML key -> dataclass field, where they differ.
_ALIASES = {"lambda": "lambda_"}


@dataclass(frozen=True)
class StageToggles:
    enhance: bool = True
    adaptive_threshold: bool = True
    cull: bool = True
    fixed_threshold: float = 20.0  # used when adaptive_threshold is off

    def __post_init__(self):
        if not self.fixed_threshold >= 1:
            raise ConfigError(f"fixed_threshold must be >= 1, got {self.fixed_threshold}")


@dataclass(frozen=True)
class MatchConfig:
    ratio_threshold: float = 0.8
    inlier_tolerance: float = 2.0  # pixels

    def __post_init__(self):
        if self.ratio_threshold < 0:
            raise ConfigError("ratio_threshold must be >= 0")
        if self.inlier_tolerance < 0:
            raise ConfigError("inlier_tolerance must be >= 0")


@dataclass(frozen=True)
class PipelineConfig:
    enhancement: EnhancementConfig = field(default_factory=EnhancementConfig)
    threshold: ThresholdConfig = field(default_factory=ThresholdConfig)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    cull: CullConfig = field(default_factory=CullConfig)
    matching: MatchConfig = field(default_factory=MatchConfig)
    stages: StageToggles = field(default_factory=StageToggles)

    @classmethod
    def from_dict(cls, data: dict) -> PipelineConfig:
        kwargs = {}
        sections = {f.name: f.default_factory for f in dataclasses.fields(cls)}
        for name, values in data.items():
            if name not in sections:
                raise ConfigError(f"unknown config section [{name}]")
            if not isinstance(values, dict):
                raise ConfigError(f"[{name}] must be a table")
            kwargs[name] = _build(sections[name], name, values)
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> PipelineConfig:
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        try:
            return cls.from_dict(data)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    def to_dict(self) -> dict:
        inverse = {v: k for k, v in _ALIASES.items()}
        out = {}
        for f in dataclasses.fields(self):
            sub = getattr(self, f.name)
            out[f.name] = {inverse.get(k, k): v for k, v in dataclasses.asdict(sub).items()}
        return out

    def with_stages(self, **toggles) -> PipelineConfig:
        return dataclasses.replace(self, stages=dataclasses.replace(self.stages, **toggles))


def _build(factory, section: str, values: dict):
    default = factory()
    fields = {f.name: f for f in dataclasses.fields(default)}
    kwargs = {}
    for key, value in values.items():
        name = _ALIASES.get(key, key)
        if name not in fields:
            raise ConfigError(f"unknown key '{key}' in [{section}]")
        kwargs[name] = _coerce(getattr(default, name), value, f"{section}.{key}")
    try:
        return type(default)(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def _coerce(default, value, where: str):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be true or false")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        return float(value)
    return value


def dumps_toml(cfg: PipelineConfig) -> str:
    lines = []
    for section, values in cfg.to_dict().items():
        lines.append(f"[{section}]")
        for k, v in values.items():
            if isinstance(v, bool):
                lines.append(f"{k} = {'true' if v else 'false'}")
            else:
                lines.append(f"{k} = {v!r}")
        lines.append("")
    return "\n".join(lines)
