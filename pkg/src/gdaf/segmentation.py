"""Turning raw fixed-rate recordings into cycle-normalized gait sets.

A raw recording (``.rawrec.json``) is a flat bank of equal-length time
series. Channel names are quantity-qualified: ``pos:knee_l`` (degrees),
``torque:knee_l`` (N.m or N.m/kg), ``power:knee_l`` (W or W/kg),
``vel:knee_l`` (rad/s, used to recompute power as velocity x torque) and
``event:...`` for event-source signals such as the right-heel forward
velocity. If ``body_mass_kg`` is present, torques and powers are divided
by it before storage.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateStrideError,
    EmptyInputError,
    IncompleteGridError,
    InsufficientStridesError,
    MalformedDocumentError,
    MappingError,
    SchemaError,
)
from .model import (
    ChannelId,
    GaitSet,
    JointMap,
    SpeedGrid,
    channel_from_name,
)

RAWREC_EXTENSION = ".rawrec.json"

QUANTITY_PREFIXES = ("pos", "torque", "power", "vel", "event")


@dataclass(frozen=True)
class RawRecording:
    """One fixed-rate multi-channel recording at a single labeled speed."""

    sample_rate_hz: float
    channels: tuple[str, ...]
    data: np.ndarray  # (n_channels, n_t)
    speed_label_mps: float
    body_mass_kg: float | None = None
    source: str = ""

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "channels", tuple(self.channels))

    def series(self, qualified_name: str) -> np.ndarray:
        try:
            idx = self.channels.index(qualified_name)
        except ValueError:
            raise SchemaError(
                f"{self.source or 'recording'}: no channel {qualified_name!r}"
            ) from None
        return self.data[idx]

    def has(self, qualified_name: str) -> bool:
        return qualified_name in self.channels

    def joint_names(self) -> tuple[str, ...]:
        """Joint channel names, from the pos: channels, in file order."""
        return tuple(
            name.split(":", 1)[1] for name in self.channels if name.startswith("pos:")
        )


def load_raw_recording(path: str | os.PathLike) -> RawRecording:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        detail = (
            f"line {exc.lineno} column {exc.colno}"
            if isinstance(exc, json.JSONDecodeError)
            else str(exc)
        )
        raise MalformedDocumentError(f"{path}: not valid JSON ({detail})") from exc
    if not isinstance(doc, dict):
        raise MalformedDocumentError(f"{path}: top level must be an object")
    for key in ("sample_rate_hz", "channels", "data", "speed_label_mps"):
        if key not in doc:
            raise SchemaError(f"{path}: missing key {key}")

    channels = [str(c) for c in doc["channels"]]
    for name in channels:
        prefix = name.split(":", 1)[0]
        if prefix not in QUANTITY_PREFIXES or ":" not in name:
            raise SchemaError(
                f"{path}: channel {name!r} must be '<quantity>:<name>' with "
                f"quantity in {QUANTITY_PREFIXES}"
            )

    try:
        data = np.asarray(doc["data"], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"{path}: data series must have equal lengths ({exc})") from exc
    if data.ndim != 2 or data.shape[0] != len(channels):
        raise SchemaError(
            f"{path}: data must be a {len(channels)} x n array of equal-length series"
        )
    rate = float(doc["sample_rate_hz"])
    if rate <= 0:
        raise SchemaError(f"{path}: sample_rate_hz must be > 0, got {rate}")

    mass = doc.get("body_mass_kg")
    return RawRecording(
        sample_rate_hz=rate,
        channels=tuple(channels),
        data=data,
        speed_label_mps=float(doc["speed_label_mps"]),
        body_mass_kg=None if mass is None else float(mass),
        source=str(path),
    )


@dataclass(frozen=True)
class StrideEvents:
    """Ascending sample indices of detected (right) heel strikes."""

    strike_indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.strike_indices)


def _enforce_separation(candidates: Iterable[int], min_gap: float) -> list[int]:
    # Earliest candidate wins; later ones inside the guard window are dropped.
    kept: list[int] = []
    for idx in candidates:
        if not kept or idx - kept[-1] >= min_gap:
            kept.append(idx)
    return kept


def detect_heel_strikes(
    v: np.ndarray, rate_hz: float, min_stride_s: float
) -> StrideEvents:
    """Find heel strikes as downward zero crossings of the heel velocity.

    A strike is any index i with v[i-1] > 0 >= v[i]; crossings closer than
    min_stride_s * rate_hz samples to the previous kept strike are dropped.
    """
    v = np.asarray(v, dtype=float)
    if v.size < 3:
        raise InsufficientStridesError(f"series too short ({v.size} samples)")
    if min_stride_s <= 0:
        raise ValueError("min_stride_s must be > 0")
    crossings = np.nonzero((v[:-1] > 0) & (v[1:] <= 0))[0] + 1
    kept = _enforce_separation(crossings.tolist(), min_stride_s * rate_hz)
    if len(kept) < 2:
        raise InsufficientStridesError(
            f"found {len(kept)} heel strike(s); need at least 2"
        )
    return StrideEvents(tuple(int(i) for i in kept))


def detect_robot_strikes(
    theta: np.ndarray,
    rate_hz: float,
    jump_threshold_deg_per_sample: float,
    min_stride_s: float,
) -> StrideEvents:
    """Gait events from abrupt ankle-pitch changes.

    Looks at local maxima of |theta[i] - theta[i-1]| exceeding the jump
    threshold, with the same minimum-separation guard as heel strikes.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.size < 3:
        raise InsufficientStridesError(f"series too short ({theta.size} samples)")
    d = np.abs(np.diff(theta))  # d[j] is the jump into sample j+1
    candidates = []
    for j in range(d.size):
        if d[j] <= jump_threshold_deg_per_sample:
            continue
        left_ok = j == 0 or d[j] >= d[j - 1]
        right_ok = j == d.size - 1 or d[j] >= d[j + 1]
        if left_ok and right_ok:
            candidates.append(j + 1)
    kept = _enforce_separation(candidates, min_stride_s * rate_hz)
    if len(kept) < 2:
        raise InsufficientStridesError(
            f"found {len(kept)} ankle-jump event(s); need at least 2"
        )
    return StrideEvents(tuple(int(i) for i in kept))


def resample_cycle(segment: np.ndarray, n_samples: int) -> np.ndarray:
    """Linearly interpolate one stride onto n_samples even cycle positions."""
    segment = np.asarray(segment, dtype=float)
    grid = np.linspace(0.0, segment.size - 1, n_samples)
    return np.interp(grid, np.arange(segment.size), segment)


def slice_strides(series: np.ndarray, events: StrideEvents) -> list[np.ndarray]:
    """Split one series into per-stride segments, start inclusive to next strike."""
    series = np.asarray(series, dtype=float)
    out = []
    strikes = events.strike_indices
    for k in range(len(strikes) - 1):
        s, e = strikes[k], strikes[k + 1]
        if e - s < 1 or e >= series.size:
            raise DegenerateStrideError(
                f"stride {k} spans samples [{s}, {e}] which is degenerate "
                f"for a series of {series.size} samples"
            )
        out.append(series[s : e + 1])
    return out


def slice_and_resample(
    series: np.ndarray, events: StrideEvents, n_samples: int
) -> list[np.ndarray]:
    """Per-stride cycle-normalized series (0..100% on n_samples points).

    The 100% point of each stride equals the series value at the next
    strike; endpoints are preserved exactly.
    """
    return [resample_cycle(seg, n_samples) for seg in slice_strides(series, events)]


def stride_durations_s(events: StrideEvents, rate_hz: float) -> list[float]:
    strikes = events.strike_indices
    return [(strikes[k + 1] - strikes[k]) / rate_hz for k in range(len(strikes) - 1)]


def average_strides(strides: Sequence[np.ndarray], mode: str = "mean") -> np.ndarray:
    """Pointwise mean (or median) across strides of equal length."""
    if len(strides) == 0:
        raise EmptyInputError("no strides to average")
    lengths = {len(s) for s in strides}
    if len(lengths) != 1:
        raise ValueError(f"strides must share a sample count, got {sorted(lengths)}")
    stack = np.stack([np.asarray(s, dtype=float) for s in strides])
    if mode == "mean":
        return stack.mean(axis=0)
    if mode == "median":
        return np.median(stack, axis=0)
    raise ValueError(f"unknown averaging mode {mode!r}")


def apply_joint_map(gs: GaitSet, jmap: JointMap) -> GaitSet:
    """Express a gait set in the mapped (robot) channel space.

    Angles transform as sign*angle + offset_deg, torques as sign*torque,
    and powers are unchanged (both moment and angular velocity flip under
    an axis flip, so their product is invariant). Channels listed in
    excluded_human_channels, and any channel the map does not mention,
    are dropped.
    """
    for entry in jmap.entries:
        if entry.human not in gs.channel_names:
            raise MappingError(
                f"joint map references {entry.human!r} which is not in the "
                f"{gs.entity} set"
            )

    out_channels: list[ChannelId] = []
    pos_rows, torque_rows, power_rows = [], [], []
    for entry in jmap.entries:
        idx = gs.channel_index(entry.human)
        try:
            out_channels.append(channel_from_name(entry.robot))
        except Exception as exc:
            raise MappingError(
                f"robot channel name {entry.robot!r} is not parseable: {exc}"
            ) from exc
        pos_rows.append(entry.sign * gs.pos_deg[idx] + entry.offset_deg)
        torque_rows.append(entry.sign * gs.torque_nmkg[idx])
        power_rows.append(gs.power_wkg[idx])

    return GaitSet(
        entity=gs.entity,
        channels=tuple(out_channels),
        speed_grid=gs.speed_grid,
        pos_deg=np.stack(pos_rows),
        torque_nmkg=np.stack(torque_rows),
        power_wkg=np.stack(power_rows),
        cycle_duration_s=gs.cycle_duration_s,
        provenance=gs.provenance,
    )


def build_gaitset(
    entity: str,
    channels: Sequence[str],
    speed_grid: SpeedGrid,
    cells: Mapping[tuple[str, str, int], np.ndarray],
    durations_s: Sequence[float] | None = None,
    provenance: Mapping[str, str] | None = None,
) -> GaitSet:
    """Assemble a GaitSet from averaged per-(quantity, channel, speed) cycles.

    ``cells`` is keyed by (quantity, channel_name, speed_index) with
    quantity in {pos, torque, power}. Every cell must be present.
    """
    channel_ids = tuple(channel_from_name(n) for n in channels)
    n_samples = None
    grids = {}
    for quantity in ("pos", "torque", "power"):
        rows = []
        for name in channels:
            per_speed = []
            for s_idx in range(len(speed_grid)):
                cell = cells.get((quantity, name, s_idx))
                if cell is None:
                    raise IncompleteGridError(
                        f"missing {quantity} cell for channel {name!r} at speed "
                        f"{speed_grid.speeds_mps[s_idx]} m/s"
                    )
                cell = np.asarray(cell, dtype=float)
                if n_samples is None:
                    n_samples = cell.size
                elif cell.size != n_samples:
                    raise IncompleteGridError(
                        f"cell ({quantity}, {name}, {speed_grid.speeds_mps[s_idx]}) "
                        f"has {cell.size} samples, expected {n_samples}"
                    )
                per_speed.append(cell)
            rows.append(np.stack(per_speed))
        grids[quantity] = np.stack(rows)

    duration_arr = None
    if durations_s is not None:
        duration_arr = np.asarray(list(durations_s), dtype=float)

    return GaitSet(
        entity=entity,
        channels=channel_ids,
        speed_grid=speed_grid,
        pos_deg=grids["pos"],
        torque_nmkg=grids["torque"],
        power_wkg=grids["power"],
        cycle_duration_s=duration_arr,
        provenance=provenance or {},
    )


# ---------------------------------------------------------------------------
# Recording-to-GaitSet pipeline
# ---------------------------------------------------------------------------


@dataclass
class SpeedSummary:
    """Per-speed bookkeeping produced while segmenting."""

    speed_mps: float
    n_strides: int
    mean_duration_s: float


def _event_series(rec: RawRecording, entity: str, event_channel: str) -> np.ndarray:
    if not rec.has(event_channel):
        raise SchemaError(
            f"{rec.source or 'recording'}: {entity} event channel "
            f"{event_channel!r} not present"
        )
    return rec.series(event_channel)


def _quantity_series(rec: RawRecording, joint: str) -> dict[str, np.ndarray]:
    """Raw pos/torque/power series for one joint, with mass normalization.

    Power is recomputed as angular velocity (rad/s) times torque when a
    vel: channel is supplied; otherwise the stored power channel is used.
    """
    mass = rec.body_mass_kg
    pos = rec.series(f"pos:{joint}")
    torque = rec.series(f"torque:{joint}")
    if mass is not None:
        torque = torque / mass
    if rec.has(f"vel:{joint}"):
        power = rec.series(f"vel:{joint}") * torque
    elif rec.has(f"power:{joint}"):
        power = rec.series(f"power:{joint}")
        if mass is not None:
            power = power / mass
    else:
        raise SchemaError(
            f"{rec.source or 'recording'}: joint {joint!r} has neither a "
            f"power: nor a vel: channel"
        )
    return {"pos": pos, "torque": torque, "power": power}


def segment_recordings(
    recordings: Sequence[RawRecording],
    entity: str,
    n_samples: int,
    min_stride_s: float,
    robot_jump_threshold: float,
    trim_strides: int,
    event_channel: str,
    average_mode: str = "mean",
    provenance: Mapping[str, str] | None = None,
) -> tuple[GaitSet, list[SpeedSummary]]:
    """Segment a batch of recordings into one GaitSet, grouping by speed label.

    Strikes come from the configured event channel (downward zero crossing
    of heel velocity for humans, ankle-pitch jump surrogate for robots).
    The first and last ``trim_strides`` strides of each recording are
    dropped to keep only steady-state walking.
    """
    if not recordings:
        raise EmptyInputError("no recordings to segment")

    groups: dict[float, list[RawRecording]] = {}
    for rec in recordings:
        groups.setdefault(round(rec.speed_label_mps, 6), []).append(rec)
    speeds = sorted(groups)
    speed_grid = SpeedGrid(speeds)

    channels: list[str] | None = None
    cells: dict[tuple[str, str, int], np.ndarray] = {}
    durations: list[float] = []
    summaries: list[SpeedSummary] = []

    for s_idx, speed in enumerate(speeds):
        per_quantity: dict[tuple[str, str], list[np.ndarray]] = {}
        speed_durations: list[float] = []
        for rec in groups[speed]:
            joints = list(rec.joint_names())
            if channels is None:
                channels = joints
            elif joints != channels:
                raise SchemaError(
                    f"{rec.source or 'recording'}: channel list {joints} does "
                    f"not match the first recording's {channels}"
                )
            event = _event_series(rec, entity, event_channel)
            if entity == "robot":
                events = detect_robot_strikes(
                    event, rec.sample_rate_hz, robot_jump_threshold, min_stride_s
                )
            else:
                events = detect_heel_strikes(event, rec.sample_rate_hz, min_stride_s)

            n_strides = len(events.strike_indices) - 1
            keep = slice(trim_strides, n_strides - trim_strides)
            if n_strides - 2 * trim_strides < 1:
                raise InsufficientStridesError(
                    f"{rec.source or 'recording'}: {n_strides} stride(s) detected, "
                    f"none left after trimming {trim_strides} from each end"
                )
            speed_durations.extend(
                stride_durations_s(events, rec.sample_rate_hz)[keep]
            )
            for joint in joints:
                series_by_quantity = _quantity_series(rec, joint)
                for quantity, series in series_by_quantity.items():
                    strides = slice_and_resample(series, events, n_samples)[keep]
                    per_quantity.setdefault((quantity, joint), []).extend(strides)

        assert channels is not None
        for (quantity, joint), strides in per_quantity.items():
            cells[(quantity, joint, s_idx)] = average_strides(strides, average_mode)
        durations.append(float(np.mean(speed_durations)))
        summaries.append(
            SpeedSummary(speed, len(speed_durations), float(np.mean(speed_durations)))
        )

    gs = build_gaitset(
        entity=entity,
        channels=channels or [],
        speed_grid=speed_grid,
        cells=cells,
        durations_s=durations,
        provenance=provenance,
    )
    return gs, summaries
