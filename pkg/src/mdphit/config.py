"""Flat ``key = value`` configuration with one INI section per command.

Resolution order, lowest to highest priority: command defaults, preset,
config file, ``--set`` overrides, ``MDP_SEED`` (seed only), ``--seed``.
Unknown sections and unknown keys are errors.
"""

from __future__ import annotations

import configparser
import os
from typing import Mapping, Optional

from . import __version__
from .distributions import DistributionSpec, make_distribution

COMMANDS = ("rate-curve", "clt-check", "lln-check", "legendre", "path-rate", "validate")

DIST_PARAMS = {
    "exponential": {"rate": "1.0"},
    "poisson": {"rate": "1.0"},
    "normal": {"mean": "1.0", "std": "1.0"},
    "bernoulli": {"p": "0.5", "offset": "0.5"},
    "table": {"values": None, "probs": None},
}
ALL_DIST_KEYS = {"dist"} | {k for v in DIST_PARAMS.values() for k in v}

COMMAND_DEFAULTS = {
    "rate-curve": {
        "dist": "poisson", "n": "100", "r": "0.25", "an_exponent": "0.9",
        "replications": "10000", "t_grid": None, "t_max": None, "t_points": "40",
        "horizon": None, "seed": "0", "tail": "upper",
    },
    "clt-check": {
        "dist": "poisson", "n": "10000", "r": "0.25", "replications": "5000",
        "horizon": None, "seed": "0",
    },
    "lln-check": {
        "dist": "exponential", "r": "0.25", "n_list": "100,1000,10000",
        "replications": "1000", "seed": "0",
    },
    "legendre": {"dist": "poisson", "x": "0.5,1.0,2.0", "method": "auto"},
    "path-rate": {
        "dist": "normal", "sigma2": None, "path": None, "endpoint_a": None,
        "endpoint_T": None, "segments": "8",
    },
    "validate": {"dist": "normal"},
}

_PRESET_BASE = {
    "n": "100", "r": "0.25", "an_exponent": "0.9", "replications": "10000",
    "t_max": "1.0", "t_points": "40", "tail": "upper",
}
PRESETS = {
    "example1": {**_PRESET_BASE, "dist": "exponential", "rate": "1.0"},
    "example2": {**_PRESET_BASE, "dist": "poisson", "rate": "1.0"},
}


class ConfigError(ValueError):
    """Invalid or unknown configuration input."""


def parse_overrides(pairs) -> dict:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def read_config_file(path: str, command: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    for section in parser.sections():
        if section not in COMMANDS:
            raise ConfigError(f"{path}: unknown section [{section}]")
    if parser.defaults():
        raise ConfigError(f"{path}: keys outside a command section")
    if not parser.has_section(command):
        return {}
    return dict(parser.items(command))


def resolve(command: str, file_values: Mapping[str, str] = (), overrides: Mapping[str, str] = (),
            preset: Optional[str] = None, seed: Optional[int] = None,
            environ: Mapping[str, str] = os.environ) -> dict:
    """Merge all sources into the resolved ``key -> string`` mapping."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    base = dict(COMMAND_DEFAULTS[command])
    allowed = set(base) | ALL_DIST_KEYS
    user = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}")
        if command != "rate-curve":
            raise ConfigError("presets apply to rate-curve only")
        user.update(PRESETS[preset])
    user.update(file_values or {})
    user.update(overrides or {})
    for key in user:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for {command}")
    if "seed" in base:
        if seed is not None:
            user["seed"] = str(int(seed))
        elif environ.get("MDP_SEED"):
            user["seed"] = environ["MDP_SEED"]
    elif seed is not None:
        raise ConfigError(f"{command} takes no seed")

    merged = {k: v for k, v in base.items()}
    merged.update({k: v for k, v in user.items() if k not in ALL_DIST_KEYS - {"dist"}})
    kind = merged["dist"].lower()
    if kind not in DIST_PARAMS:
        raise ConfigError(f"unknown dist {kind!r}; expected one of {sorted(DIST_PARAMS)}")
    merged["dist"] = kind
    params = dict(DIST_PARAMS[kind])
    for key, value in user.items():
        if key in ALL_DIST_KEYS - {"dist"}:
            if key not in params:
                raise ConfigError(f"key {key!r} does not apply to dist={kind}")
            params[key] = value
    for key, value in params.items():
        if value is None:
            raise ConfigError(f"dist={kind} requires {key!r}")
    merged.update(params)
    return {k: v for k, v in merged.items() if v is not None}


def floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"not a list of numbers: {text!r}") from exc


def number(values: Mapping[str, str], key: str, kind=float):
    try:
        return kind(values[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}={values.get(key)!r} is not a valid {kind.__name__}") from exc


def build_distribution(values: Mapping[str, str]) -> DistributionSpec:
    kind = values["dist"]
    params = {}
    for key in DIST_PARAMS[kind]:
        params[key] = tuple(floats(values[key])) if kind == "table" else number(values, key)
    try:
        return make_distribution(kind, **params)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def manifest_text(command: str, values: Mapping[str, str]) -> str:
    """Resolved configuration in the same format the reader accepts."""
    import numpy
    import scipy

    lines = [
        f"# mdphit {__version__}, numpy {numpy.__version__}, scipy {scipy.__version__}",
        f"[{command}]",
    ]
    lines += [f"{k} = {values[k]}" for k in sorted(values)]
    return "\n".join(lines) + "\n"
