"""Run configuration: every detector setting in one YAML document.

All keys are optional; anything omitted takes the library default. Unknown
keys are rejected so typos do not silently fall back to defaults.

Example::

    wavelet:
      threshold_fraction: 0.15
    stm:
      mfcc:
        num_filters: 26
    tolerances_ms: [10, 20, 30, 40]
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Callable

import yaml

from .baselines import BaselineConfig, detect_vops_comb_esm, detect_vops_se_gci
from .corpus import Signal
from .cwt import WaveletConfig, detect_vops_cwt
from .events import EventList
from .fusion import FusionConfig, detect_vops
from .stm import MfccConfig, StmConfig

CONFIG_ENV = "VOPDETECT_CONFIG"
METHODS = ("proposed", "cwt-only", "comb-esm", "se-gci")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    wavelet: WaveletConfig = WaveletConfig()
    stm: StmConfig = StmConfig()
    fusion: FusionConfig = FusionConfig()
    baseline: BaselineConfig = BaselineConfig()
    tolerances_ms: tuple = (10, 20, 30, 40)
    sample_rate: int = 16000

    def __post_init__(self):
        if not self.tolerances_ms or any(t <= 0 for t in self.tolerances_ms):
            raise ValueError("tolerances_ms must be a non-empty list of positive values")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def tolerances(self) -> tuple:
        return tuple(ms / 1000.0 for ms in self.tolerances_ms)


_NESTED = {
    RunConfig: {"wavelet": WaveletConfig, "stm": StmConfig, "fusion": FusionConfig,
                "baseline": BaselineConfig},
    StmConfig: {"mfcc": MfccConfig},
}


def _build(cls, data, path=""):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown key(s) in {path or 'config'}: {', '.join(unknown)}")
    kwargs = {}
    for key, value in data.items():
        sub = _NESTED.get(cls, {}).get(key)
        if sub is not None:
            kwargs[key] = _build(sub, value, f"{path}{key}.")
        elif isinstance(value, list):
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path or 'config'}: {exc}") from exc


def config_from_dict(data) -> RunConfig:
    return _build(RunConfig, data)


def config_to_dict(cfg: RunConfig) -> dict:
    def plain(v):
        if isinstance(v, dict):
            return {k: plain(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [plain(x) for x in v]
        return v

    return plain(dataclasses.asdict(cfg))


def load_config(path=None) -> RunConfig:
    """Read ``path`` (or ``$VOPDETECT_CONFIG``); defaults when neither is set."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(data)


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=True)


def make_detector(method: str, cfg: RunConfig = RunConfig()) -> Callable[[Signal], EventList]:
    if method == "proposed":
        return lambda s: detect_vops(s, cfg.wavelet, cfg.stm, cfg.fusion)
    if method == "cwt-only":
        return lambda s: detect_vops_cwt(s, cfg.wavelet)
    if method == "comb-esm":
        return lambda s: detect_vops_comb_esm(s, cfg.baseline)
    if method == "se-gci":
        return lambda s: detect_vops_se_gci(s, cfg.baseline)
    raise ConfigError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
