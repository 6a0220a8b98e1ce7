"""Core domain model: channels, speed grids, gait sets and joint maps.

All containers are immutable value objects; numpy arrays are coerced to
float64 and frozen so instances can be shared freely between workers.
Validation is centralized in :func:`validate_gaitset`, which reports
violations as data instead of raising so that callers can decide what is
fatal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MappingError, MissingChannelError, UnknownSpeedError

N_SAMPLES_DEFAULT = 101

# Tolerance used when matching speeds between grids (floats formatted and
# re-parsed elsewhere must still hit the same grid point).
SPEED_MATCH_DECIMALS = 6


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    CENTRAL = "central"


class AnatomicalGroup(str, Enum):
    PELVIS = "pelvis"
    HIP = "hip"
    KNEE = "knee"
    ANKLE = "ankle"
    SUBTALAR = "subtalar"


# Canonical channel vocabulary. Central pelvis channels plus six bilateral
# joint bases; extra channels are allowed in a GaitSet but ignored by the
# default metric configuration.
PELVIS_CHANNELS = ("pelvis_tilt", "pelvis_list", "pelvis_rotation")
BILATERAL_BASES = (
    "hip_flexion",
    "hip_adduction",
    "hip_rotation",
    "knee",
    "ankle",
    "subtalar",
)

_GROUP_BY_PREFIX = {
    "pelvis": AnatomicalGroup.PELVIS,
    "hip": AnatomicalGroup.HIP,
    "knee": AnatomicalGroup.KNEE,
    "ankle": AnatomicalGroup.ANKLE,
    "subtalar": AnatomicalGroup.SUBTALAR,
}


@dataclass(frozen=True)
class ChannelId:
    """One named trajectory channel, e.g. ``hip_flexion_l``."""

    name: str
    side: Side
    anatomical_group: AnatomicalGroup

    @property
    def base(self) -> str:
        """Channel name with any ``_l``/``_r`` side suffix removed."""
        if self.name.endswith(("_l", "_r")):
            return self.name[:-2]
        return self.name


def channel_from_name(name: str) -> ChannelId:
    """Build a ChannelId from a conventional channel name.

    Side is taken from a trailing ``_l``/``_r`` (anything else is central);
    the anatomical group from the leading token of the name.
    """
    if name.endswith("_l"):
        side = Side.LEFT
    elif name.endswith("_r"):
        side = Side.RIGHT
    else:
        side = Side.CENTRAL
    prefix = name.split("_", 1)[0]
    group = _GROUP_BY_PREFIX.get(prefix)
    if group is None:
        raise MissingChannelError(
            f"cannot infer anatomical group from channel name {name!r}"
        )
    return ChannelId(name=name, side=side, anatomical_group=group)


def canonical_channels() -> tuple[ChannelId, ...]:
    """The default channel vocabulary: 3 pelvis + 6 bilateral pairs."""
    names = list(PELVIS_CHANNELS)
    for base in BILATERAL_BASES:
        names.append(f"{base}_l")
        names.append(f"{base}_r")
    return tuple(channel_from_name(n) for n in names)


@dataclass(frozen=True)
class SpeedGrid:
    """Ascending list of walking speeds in m/s."""

    speeds_mps: tuple[float, ...]

    def __init__(self, speeds_mps: Iterable[float]):
        object.__setattr__(self, "speeds_mps", tuple(float(v) for v in speeds_mps))

    def __len__(self) -> int:
        return len(self.speeds_mps)

    def index_of(self, speed: float) -> int:
        """Index of ``speed`` on the grid, matching to 1e-6 m/s."""
        key = round(float(speed), SPEED_MATCH_DECIMALS)
        for i, v in enumerate(self.speeds_mps):
            if round(v, SPEED_MATCH_DECIMALS) == key:
                return i
        raise UnknownSpeedError(
            f"speed {speed} m/s not on grid; available: {list(self.speeds_mps)}"
        )

    @classmethod
    def reference(cls) -> "SpeedGrid":
        """The 28-point reference grid, 0.50 to 1.85 m/s in 0.05 steps."""
        return cls(round(0.50 + 0.05 * k, 2) for k in range(28))


@dataclass(frozen=True)
class BilateralPair:
    """Left/right instances of the same joint channel."""

    pair_name: str
    left: ChannelId
    right: ChannelId


def default_pairs(channels: Sequence[ChannelId] | None = None) -> tuple[BilateralPair, ...]:
    """The six default bilateral pairs, restricted to ``channels`` if given."""
    available = {c.name for c in channels} if channels is not None else None
    pairs = []
    for base in BILATERAL_BASES:
        ln, rn = f"{base}_l", f"{base}_r"
        if available is not None and (ln not in available or rn not in available):
            continue
        pairs.append(
            BilateralPair(base, channel_from_name(ln), channel_from_name(rn))
        )
    return tuple(pairs)


def resolve_pairs(
    pair_names: Sequence[str], channels: Sequence[ChannelId]
) -> tuple[BilateralPair, ...]:
    """Resolve pair base names against a channel list.

    Raises MissingChannelError if either side of a requested pair is absent.
    """
    available = {c.name for c in channels}
    pairs = []
    for base in pair_names:
        ln, rn = f"{base}_l", f"{base}_r"
        if ln not in available or rn not in available:
            raise MissingChannelError(
                f"bilateral pair {base!r} needs channels {ln!r} and {rn!r}"
            )
        pairs.append(
            BilateralPair(base, channel_from_name(ln), channel_from_name(rn))
        )
    return tuple(pairs)


@dataclass(frozen=True)
class JointMapEntry:
    human: str
    robot: str
    sign: int = 1
    offset_deg: float = 0.0


@dataclass(frozen=True)
class JointMap:
    """Human-to-robot channel correspondence with per-channel transforms.

    Mapped angle channels transform as ``robot = sign * human + offset_deg``;
    torques pick up the sign only and powers are frame-invariant.
    """

    entries: tuple[JointMapEntry, ...]
    excluded_human_channels: tuple[str, ...] = ()

    def __post_init__(self):
        robots = [e.robot for e in self.entries]
        humans = [e.human for e in self.entries]
        if len(set(robots)) != len(robots) or len(set(humans)) != len(humans):
            raise MappingError("joint map must be one-to-one on mapped channels")
        for e in self.entries:
            if e.sign not in (1, -1):
                raise MappingError(f"sign must be +1 or -1, got {e.sign} for {e.human!r}")

    @classmethod
    def identity(cls, channel_names: Iterable[str]) -> "JointMap":
        return cls(tuple(JointMapEntry(n, n) for n in channel_names))

    def inverse(self) -> "JointMap":
        """Map from robot space back to human space (exact inverse of angles)."""
        inv = tuple(
            JointMapEntry(e.robot, e.human, e.sign, -e.sign * e.offset_deg)
            for e in self.entries
        )
        return JointMap(inv, ())


_QUANTITIES = ("pos_deg", "torque_nmkg", "power_wkg")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GaitSet:
    """Channel x speed grid of cycle-normalized angle/torque/power trajectories.

    ``pos_deg``, ``torque_nmkg`` and ``power_wkg`` all have shape
    (n_channels, n_speeds, n_samples); sample k of a cycle sits at gait
    percentage 100*k/(n_samples-1).
    """

    entity: str
    channels: tuple[ChannelId, ...]
    speed_grid: SpeedGrid
    pos_deg: np.ndarray
    torque_nmkg: np.ndarray
    power_wkg: np.ndarray
    cycle_duration_s: np.ndarray | None = None
    provenance: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        for name in _QUANTITIES:
            object.__setattr__(self, name, _frozen_array(getattr(self, name)))
        if self.cycle_duration_s is not None:
            object.__setattr__(
                self, "cycle_duration_s", _frozen_array(self.cycle_duration_s)
            )
        object.__setattr__(self, "provenance", dict(self.provenance))

    # -- shape helpers ----------------------------------------------------
    @property
    def n_samples(self) -> int:
        return self.pos_deg.shape[2]

    @property
    def channel_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.channels)

    def channel_index(self, name: str) -> int:
        for i, c in enumerate(self.channels):
            if c.name == name:
                return i
        raise MissingChannelError(
            f"channel {name!r} not in {self.entity} set; "
            f"available: {list(self.channel_names)}"
        )

    def series(self, quantity: str, channel: str, speed: float) -> np.ndarray:
        """One cycle-normalized series; quantity is pos|torque|power."""
        grid = self.quantity_grid(quantity)
        return grid[self.channel_index(channel), self.speed_grid.index_of(speed)]

    def quantity_grid(self, quantity: str) -> np.ndarray:
        aliases = {"pos": "pos_deg", "torque": "torque_nmkg", "power": "power_wkg"}
        name = aliases.get(quantity, quantity)
        if name not in _QUANTITIES:
            raise KeyError(f"unknown quantity {quantity!r}")
        return getattr(self, name)

    def duration_at(self, speed: float) -> float | None:
        if self.cycle_duration_s is None:
            return None
        return float(self.cycle_duration_s[self.speed_grid.index_of(speed)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaitSet):
            return NotImplemented
        return (
            self.entity == other.entity
            and self.channels == other.channels
            and self.speed_grid == other.speed_grid
            and np.array_equal(self.pos_deg, other.pos_deg)
            and np.array_equal(self.torque_nmkg, other.torque_nmkg)
            and np.array_equal(self.power_wkg, other.power_wkg)
            and (
                (self.cycle_duration_s is None and other.cycle_duration_s is None)
                or (
                    self.cycle_duration_s is not None
                    and other.cycle_duration_s is not None
                    and np.array_equal(self.cycle_duration_s, other.cycle_duration_s)
                )
            )
            and dict(self.provenance) == dict(other.provenance)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Violation:
    """One structural defect found by validate_gaitset."""

    field: str
    message: str
    channel: str | None = None
    speed: float | None = None

    def __str__(self) -> str:
        where = ""
        if self.channel is not None:
            where += f" channel={self.channel}"
        if self.speed is not None:
            where += f" speed={self.speed}"
        return f"{self.field}:{where + ' ' if where else ' '}{self.message}"


def validate_gaitset(gs: GaitSet) -> list[Violation]:
    """Check every GaitSet invariant; returns an empty list iff the set is valid.

    Violations are data, not failures: each one names the offending field
    and, where applicable, the channel and speed.
    """
    out: list[Violation] = []

    if gs.entity not in ("human", "robot"):
        out.append(Violation("entity", f"must be 'human' or 'robot', got {gs.entity!r}"))

    names = [c.name for c in gs.channels]
    seen = set()
    for n in names:
        if n in seen:
            out.append(Violation("channels", f"duplicate channel name {n!r}", channel=n))
        seen.add(n)
    for c in gs.channels:
        if c.side == Side.CENTRAL and c.anatomical_group != AnatomicalGroup.PELVIS:
            out.append(
                Violation(
                    "channels",
                    "side=central is only allowed for pelvis channels",
                    channel=c.name,
                )
            )

    speeds = gs.speed_grid.speeds_mps
    for i, v in enumerate(speeds):
        if v <= 0:
            out.append(Violation("speed_grid", f"speed {v} must be > 0", speed=v))
        if i > 0 and speeds[i] <= speeds[i - 1]:
            out.append(
                Violation(
                    "speed_grid",
                    f"speeds must be strictly increasing ({speeds[i - 1]} then {v})",
                    speed=v,
                )
            )

    expected = (len(gs.channels), len(speeds))
    n_samples = None
    for qname in _QUANTITIES:
        grid = getattr(gs, qname)
        if grid.ndim != 3:
            out.append(Violation(qname, f"grid must be 3-D, got {grid.ndim}-D"))
            continue
        if grid.shape[:2] != expected:
            out.append(
                Violation(
                    qname,
                    f"grid shape {grid.shape} does not match "
                    f"{expected[0]} channels x {expected[1]} speeds",
                )
            )
            continue
        if n_samples is None:
            n_samples = grid.shape[2]
        elif grid.shape[2] != n_samples:
            out.append(
                Violation(
                    qname,
                    f"sample count {grid.shape[2]} differs from pos_deg ({n_samples})",
                )
            )
            continue
        if grid.shape[2] < 2:
            out.append(Violation(qname, f"cycles need >= 2 samples, got {grid.shape[2]}"))
        finite = np.isfinite(grid)
        if not finite.all():
            ch_idx, sp_idx, _ = np.nonzero(~finite)
            ch = gs.channels[ch_idx[0]].name if len(gs.channels) else "?"
            sp = speeds[sp_idx[0]] if len(speeds) else None
            out.append(
                Violation(qname, "non-finite value", channel=ch, speed=sp)
            )

    if gs.cycle_duration_s is not None:
        dur = gs.cycle_duration_s
        if dur.shape != (len(speeds),):
            out.append(
                Violation(
                    "cycle_duration_s",
                    f"shape {dur.shape} must be ({len(speeds)},)",
                )
            )
        else:
            for i, v in enumerate(dur):
                if not np.isfinite(v) or v <= 0:
                    out.append(
                        Violation(
                            "cycle_duration_s",
                            f"duration {v} must be a positive finite number",
                            speed=speeds[i],
                        )
                    )
    return out
