"""Flat ``key = value`` run configuration shared by the CLI commands."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError
from .extractor import ExtractionConfig
from .rules import DEFAULT_CONFIG, LayerConfig, read_key_values

log = logging.getLogger(__name__)

LAYER_KEYS = {f.name for f in fields(LayerConfig)}
EXTRACTION_KEYS = {"exclude_prefixes", "drop_unused_imports", "include_package_nodes"}
HYPER_KEYS = {"k": int, "max_depth": int, "min_leaf": int, "epochs": int,
              "learning_rate": float, "regularization": float, "seed": int}


@dataclass
class Settings:
    layer: LayerConfig = DEFAULT_CONFIG
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)
    hyperparameters: dict = field(default_factory=dict)

    def snapshot(self) -> dict:
        return {"layer": self.layer.as_dict(),
                "extraction": {"exclude_prefixes": list(self.extraction.exclude_prefixes),
                               "drop_unused_imports": self.extraction.drop_unused_imports,
                               "include_package_nodes": self.extraction.include_package_nodes},
                "hyperparameters": dict(self.hyperparameters)}


def _flag(key: str, value: str) -> bool:
    text = value.strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def parse_settings(text: str) -> Settings:
    values = read_key_values(text)
    for key in values:
        if key not in LAYER_KEYS | EXTRACTION_KEYS | set(HYPER_KEYS):
            log.warning("ignoring unknown config key %r", key)
    layer = LayerConfig.from_mapping({k: v for k, v in values.items() if k in LAYER_KEYS},
                                     DEFAULT_CONFIG)
    extraction = ExtractionConfig()
    if "exclude_prefixes" in values:
        prefixes = tuple(p.strip() for p in values["exclude_prefixes"].split(",") if p.strip())
        extraction = replace(extraction, exclude_prefixes=prefixes)
    for key in ("drop_unused_imports", "include_package_nodes"):
        if key in values:
            extraction = replace(extraction, **{key: _flag(key, values[key])})
    hyper = {}
    for key, cast in HYPER_KEYS.items():
        if key in values:
            try:
                hyper[key] = cast(values[key])
            except ValueError:
                raise ConfigError(f"{key}: {values[key]!r} is not a valid {cast.__name__}") from None
    return Settings(layer, extraction, hyper)
