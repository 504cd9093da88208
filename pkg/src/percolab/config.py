"""Run configuration: a TOML file with one table per subcommand.

Every key has a default, so an empty file (or no file) is a valid
configuration.  Unknown tables or keys are rejected.

    [experiment]        # chemdist, gamma, shortcut, fit
    n_grid = [8, 16, 32, 64]
    samples = 1000
    seed = 0
    p = 0.5
    delta = 0.9
    epsilon = 0.25
    nu = 0.5            # TOML's inf lifts the ratio constraint
    statistics = ["chemdist", "pi3", "one_arm"]
    verify = false
    R = 3

    [sample]
    n = 8
    count = 10

    [arm]
    family = "pi3"      # pi1, pi2, pi3 or pi_prime
    k = 0               # arm count for pi_prime
    inner = 0           # 0 means the smallest admissible radius
    outer = [8, 16, 32, 64]

    [rsw]
    k = 2
    n_grid = [8, 16, 32, 64]

    [compare]
    n = 32
    k = 1
    distances = [4, 8, 12, 16, 20, 24]
    arm_samples = 0     # 0 means experiment.samples

    [oracle]
    suites = []         # empty means all

    [fit]
    input = "runs/chemdist/results.csv"   # a results.csv from chemdist (pi3 included gives delta-hat)
    statistics = ["S_n", "gamma_length", "s_length", "one_arm", "pi3"]
"""

from __future__ import annotations

import dataclasses
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .montecarlo import ExperimentConfig

SECTIONS = {
    "sample": {"n": 8, "count": 10},
    "arm": {"family": "pi3", "k": 0, "inner": 0, "outer": [8, 16, 32, 64]},
    "rsw": {"k": 2, "n_grid": [8, 16, 32, 64]},
    "compare": {"n": 32, "k": 1, "distances": [4, 8, 12, 16, 20, 24], "arm_samples": 0},
    "oracle": {"suites": []},
    "fit": {"input": "runs/chemdist/results.csv", "statistics": ["S_n", "gamma_length", "s_length", "one_arm", "pi3"]},
}


class ConfigError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class RunConfig:
    experiment: ExperimentConfig
    sections: dict

    def section(self, name: str) -> dict:
        return self.sections[name]

    def to_dict(self) -> dict:
        out = {"experiment": self.experiment.to_dict()}
        out.update(self.sections)
        return out


def _check_type(where: str, key: str, value, default):
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif isinstance(default, (list, tuple)):
        ok = isinstance(value, list)
    else:
        ok = isinstance(value, type(default))
    if not ok:
        raise ConfigError(f"[{where}] {key} has the wrong type ({type(value).__name__})")


def parse_config(data: dict, seed: int | None = None) -> RunConfig:
    unknown = set(data) - set(SECTIONS) - {"experiment"}
    if unknown:
        raise ConfigError(f"unknown tables {sorted(unknown)}")
    exp_defaults = ExperimentConfig().to_dict()
    exp = dict(exp_defaults)
    for key, value in data.get("experiment", {}).items():
        if key not in exp_defaults:
            raise ConfigError(f"[experiment] unknown key {key!r}")
        _check_type("experiment", key, value, exp_defaults[key])
        exp[key] = value
    if seed is not None:
        exp["seed"] = seed
    try:
        experiment = ExperimentConfig(**exp)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"[experiment] {err}") from err
    sections = {}
    for name, defaults in SECTIONS.items():
        merged = {k: (list(v) if isinstance(v, list) else v) for k, v in defaults.items()}
        for key, value in data.get(name, {}).items():
            if key not in defaults:
                raise ConfigError(f"[{name}] unknown key {key!r}")
            _check_type(name, key, value, defaults[key])
            merged[key] = value
        sections[name] = merged
    if sections["rsw"]["k"] not in (1, 2, 3):
        raise ConfigError("[rsw] k must be 1, 2 or 3")
    if sections["sample"]["n"] < 1 or sections["sample"]["count"] < 1:
        raise ConfigError("[sample] n and count must be positive")
    return RunConfig(experiment, sections)


def load_config(path: str | Path | None, seed: int | None = None) -> RunConfig:
    """Parse a TOML file; ``None`` gives the defaults.  Missing or malformed files raise ConfigError."""
    if path is None:
        return parse_config({}, seed)
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"cannot parse {path}: {err}") from err
    return parse_config(data, seed)
