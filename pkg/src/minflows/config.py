"""Run configuration, read from a TOML file.

Top-level keys: ``seed``, ``trials``, ``out``. Tables: ``[group]`` and
``[h_group]`` (group specs), ``[blueprint]``, ``[subshift]``,
``[construct]`` and ``[budgets]``. See ``configs/desk_z.toml`` for every
key with its default.
"""
from __future__ import annotations

import os
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError

OUT_ENV = "MINFLOWS_OUT"


@dataclass(frozen=True)
class RunConfig:
    g_spec: dict = field(default_factory=lambda: {"family": "lattice", "dim": 1})
    h_spec: dict = field(default_factory=lambda: {"family": "lattice", "dim": 1})
    g_radii: tuple = (0, 1, 10)
    h_radii: tuple = (0, 0)
    height: int = 2
    stages: int = 2
    h_window_radius: int = 3
    trials: int = 100
    seed: int = 0
    max_set_size: int = 2_000_000
    max_pattern_set: int = 4096
    out_dir: str = "reports"
    render: bool = True
    # subshift suite
    part_radius: int = 1
    part_colors: int | None = None  # None means |C^-1 C|
    print_radius: int = 0
    subshift_window: int = 10
    # construction suite
    samples: int = 10
    reach_window: int = 4

    def validate(self) -> "RunConfig":
        if any(r < 0 for r in self.g_radii) or any(r < 0 for r in self.h_radii):
            raise ConfigError("radii must be nonnegative")
        if not self.g_radii:
            raise ConfigError("g_radii must be nonempty")
        if not 0 <= self.height <= len(self.g_radii) - 1:
            raise ConfigError(f"height {self.height} needs {self.height + 1} G radii, got {len(self.g_radii)}")
        if not 0 <= self.stages <= self.height:
            raise ConfigError(f"stage count {self.stages} must be at most the blueprint height {self.height}")
        if self.stages and len(self.h_radii) < self.stages:
            raise ConfigError(f"{self.stages} stages need {self.stages} H radii (C_0..C_{self.stages - 1})")
        if any(a > b for a, b in zip(self.h_radii, self.h_radii[1:])):
            raise ConfigError("H radii must be nondecreasing")
        if self.max_set_size <= 0 or self.max_pattern_set <= 0:
            raise ConfigError("budgets must be positive")
        if self.trials < 0 or self.samples < 0:
            raise ConfigError("trials and samples must be nonnegative")
        if self.part_colors is not None and self.part_colors < 1:
            raise ConfigError("part_colors must be positive")
        return self

    def to_record(self) -> dict:
        d = asdict(self)
        d["g_radii"] = list(self.g_radii)
        d["h_radii"] = list(self.h_radii)
        d.pop("out_dir")
        return d


_TABLES = {
    "blueprint": {"radii": "g_radii", "height": "height", "render": "render"},
    "subshift": {
        "part_radius": "part_radius",
        "part_colors": "part_colors",
        "print_radius": "print_radius",
        "window_radius": "subshift_window",
        "trials": "trials",
    },
    "construct": {
        "h_radii": "h_radii",
        "stages": "stages",
        "h_window_radius": "h_window_radius",
        "samples": "samples",
        "reach_window": "reach_window",
    },
    "budgets": {"max_set_size": "max_set_size", "max_pattern_set": "max_pattern_set"},
}


def config_from_dict(data: dict) -> RunConfig:
    kw: dict = {}
    known = {"seed", "trials", "out", "group", "h_group", *_TABLES}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "seed" in data:
        kw["seed"] = int(data["seed"])
    if "trials" in data:
        kw["trials"] = int(data["trials"])
    if "out" in data:
        kw["out_dir"] = str(data["out"])
    if "group" in data:
        kw["g_spec"] = dict(data["group"])
    if "h_group" in data:
        kw["h_spec"] = dict(data["h_group"])
    for table, keys in _TABLES.items():
        section = data.get(table, {})
        bad = set(section) - set(keys)
        if bad:
            raise ConfigError(f"unknown keys in [{table}]: {sorted(bad)}")
        for key, attr in keys.items():
            if key in section:
                val = section[key]
                kw[attr] = tuple(int(v) for v in val) if attr in ("g_radii", "h_radii") else val
    try:
        return RunConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | os.PathLike | None, **overrides) -> RunConfig:
    """Read a TOML file (or defaults), apply non-None overrides, validate."""
    data: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad TOML in {path}: {exc}") from exc
    cfg = config_from_dict(data)
    if "out" not in data and os.environ.get(OUT_ENV):
        cfg = replace(cfg, out_dir=os.environ[OUT_ENV])
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()


def out_path(cfg: RunConfig) -> Path:
    p = Path(cfg.out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p
