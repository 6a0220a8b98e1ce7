"""Run configuration shared by the CLI commands."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, asdict
from typing import Any

from .errors import ConfigError
from .model import BILATERAL_BASES

ENV_CONFIG_VAR = "GDAF_CONFIG"

DEFAULT_LOOP_JOINTS = (
    "hip_flexion_l",
    "hip_flexion_r",
    "knee_l",
    "knee_r",
    "ankle_l",
    "ankle_r",
)


@dataclass(frozen=True)
class RunConfig:
    eps: float = 1e-8
    n_samples: int = 101
    pair_set: tuple[str, ...] = BILATERAL_BASES
    joint_map_path: str | None = None
    min_stride_s: float = 0.4
    robot_jump_threshold: float = 2.0  # deg per sample
    steady_state_trim_strides: int = 2
    duration_mode: str = "from_data"  # from_data | unit
    heel_velocity_channel: str = "event:heel_velocity_r"
    robot_event_channel: str = "pos:ankle_r"
    stride_average: str = "mean"  # mean | median
    include_flagged_work_cells: bool = True
    loop_joints: tuple[str, ...] = DEFAULT_LOOP_JOINTS

    def __post_init__(self):
        if self.eps <= 0:
            raise ConfigError(f"eps must be > 0, got {self.eps}")
        if self.n_samples < 2:
            raise ConfigError(f"n_samples must be >= 2, got {self.n_samples}")
        if not self.pair_set:
            raise ConfigError("pair_set must not be empty")
        if self.min_stride_s <= 0:
            raise ConfigError(f"min_stride_s must be > 0, got {self.min_stride_s}")
        if self.robot_jump_threshold <= 0:
            raise ConfigError(
                f"robot_jump_threshold must be > 0, got {self.robot_jump_threshold}"
            )
        if self.steady_state_trim_strides < 0:
            raise ConfigError("steady_state_trim_strides must be >= 0")
        if self.duration_mode not in ("from_data", "unit"):
            raise ConfigError(f"unknown duration_mode {self.duration_mode!r}")
        if self.stride_average not in ("mean", "median"):
            raise ConfigError(f"unknown stride_average {self.stride_average!r}")
        object.__setattr__(self, "pair_set", tuple(self.pair_set))
        object.__setattr__(self, "loop_joints", tuple(self.loop_joints))

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["pair_set"] = list(self.pair_set)
        d["loop_joints"] = list(self.loop_joints)
        return d


def load_config(path: str | os.PathLike) -> RunConfig:
    """Read a JSON config file; unknown keys are rejected."""
    with open(path, "rb") as fh:
        try:
            doc = json.loads(fh.read().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    try:
        return RunConfig(**doc)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def resolve_config(explicit_path: str | None) -> RunConfig:
    """Explicit --config wins; else the GDAF_CONFIG env var; else defaults."""
    if explicit_path is not None:
        return load_config(explicit_path)
    env_path = os.environ.get(ENV_CONFIG_VAR)
    if env_path:
        return load_config(env_path)
    return RunConfig()
