"""Gait divergence metrics.

Everything here is a pure function over cycle-normalized series:

* waveform similarity: per-joint Pearson correlation of angle, moment and
  power trajectories, combined as 0.5/0.3/0.2 weighted means over joints;
* bilateral symmetry: extrema-based symmetry index per joint pair, with
  human feature magnitudes as the reference denominator for both entities;
* energetics: positive/negative joint work from trapezoidal integration of
  clamped power, bilateral work asymmetry and human-robot work divergence;
* the composite per-speed cost combining a symmetry pillar and a
  human-likeness pillar with equal weight (lower is better).

``eps`` guards every reference denominator; the default is 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateVarianceError, MissingChannelError
from .model import BilateralPair, GaitSet

DEFAULT_EPS = 1e-8

# |W| below this (J/kg) marks a work-divergence cell as reference-degenerate.
WORK_REF_FLOOR = 1e-6

WAVEFORM_WEIGHTS = {"angle": 0.5, "moment": 0.3, "power": 0.2}

_QUANTITY_FOR = {"angle": "pos", "moment": "torque", "power": "power"}


# ---------------------------------------------------------------------------
# Waveform similarity
# ---------------------------------------------------------------------------


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Sample Pearson correlation of two equal-length series.

    Identical inputs return exactly 1.0; a constant input raises
    DegenerateVarianceError since the correlation is undefined. The result
    is clamped to [-1, 1] against rounding overshoot.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"series must be equal-length 1-D, got {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = float(np.dot(dx, dx))
    vy = float(np.dot(dy, dy))
    if vx == 0.0 or vy == 0.0:
        raise DegenerateVarianceError("correlation of a constant series is undefined")
    if np.array_equal(x, y):
        return 1.0
    r = float(np.dot(dx, dy)) / math.sqrt(vx * vy)
    return min(1.0, max(-1.0, r))


def waveform_similarity(
    gs_h: GaitSet,
    gs_r: GaitSet,
    joints: Sequence[str],
    speed: float,
) -> dict[str, dict[str, float | None]]:
    """Per-joint correlation of the two entities' trajectories at one speed.

    Returns {"angle"|"moment"|"power": {joint: r}} with None marking cells
    where either series is constant (flagged, excluded from means).
    """
    out: dict[str, dict[str, float | None]] = {}
    for label, quantity in _QUANTITY_FOR.items():
        cells: dict[str, float | None] = {}
        for joint in joints:
            xh = gs_h.series(quantity, joint, speed)
            xr = gs_r.series(quantity, joint, speed)
            try:
                cells[joint] = pearson(xh, xr)
            except DegenerateVarianceError:
                cells[joint] = None
        out[label] = cells
    return out


def combined_waveform(
    mean_r_angle: float, mean_r_moment: float, mean_r_power: float
) -> float:
    """Weighted combination of the per-quantity mean correlations.

    Angles dominate (0.5) over moments (0.3) and powers (0.2): kinematics
    are the most repeatable quantity, kinetics the noisiest.
    """
    return 0.5 * mean_r_angle + 0.3 * mean_r_moment + 0.2 * mean_r_power


# ---------------------------------------------------------------------------
# Bilateral symmetry
# ---------------------------------------------------------------------------


def extrema(series: np.ndarray) -> tuple[float, float]:
    """(max, min) of one cycle: peak flexion and peak extension."""
    series = np.asarray(series, dtype=float)
    if series.size < 1:
        raise ValueError("empty series")
    return float(series.max()), float(series.min())


def symmetry_index(
    gs_entity: GaitSet,
    gs_human_ref: GaitSet,
    pair: BilateralPair,
    speed: float,
    eps: float = DEFAULT_EPS,
) -> float:
    """Extrema-based bilateral symmetry index for one joint pair.

    Numerator: the entity's own left/right differences of cycle max and
    min. Denominator: the HUMAN extrema magnitudes at the same pair and
    speed, so human and robot values share a reference scale. 0 means the
    entity's left and right extrema coincide.
    """
    le_max, le_min = extrema(gs_entity.series("pos", pair.left.name, speed))
    re_max, re_min = extrema(gs_entity.series("pos", pair.right.name, speed))
    lh_max, lh_min = extrema(gs_human_ref.series("pos", pair.left.name, speed))
    rh_max, rh_min = extrema(gs_human_ref.series("pos", pair.right.name, speed))
    num = 2.0 * (abs(le_max - re_max) + abs(le_min - re_min))
    den = abs(lh_max) + abs(rh_max) + abs(lh_min) + abs(rh_min) + eps
    return num / den


def combined_si(values: Sequence[float]) -> float:
    """Mean symmetry index over the bilateral pairs."""
    if len(values) == 0:
        raise ValueError("need at least one pair")
    return float(sum(values)) / len(values)


# ---------------------------------------------------------------------------
# Energetics
# ---------------------------------------------------------------------------


def work_decompose(power: np.ndarray, duration_s: float) -> tuple[float, float]:
    """Positive and negative joint work over one cycle (J/kg).

    Trapezoidal integration of the clamped power on the uniform cycle grid
    with dt = duration / (n - 1). Returns (w_plus >= 0, w_minus <= 0).
    """
    power = np.asarray(power, dtype=float)
    if duration_s <= 0:
        raise ValueError(f"cycle duration must be > 0, got {duration_s}")
    if power.size < 2:
        raise ValueError("need at least 2 samples")
    dt = duration_s / (power.size - 1)
    w_plus = float(np.trapezoid(np.maximum(power, 0.0), dx=dt))
    w_minus = float(np.trapezoid(np.minimum(power, 0.0), dx=dt))
    return w_plus, w_minus


@dataclass(frozen=True)
class JointWork:
    """Positive/negative work of one joint at one speed."""

    w_plus: float
    w_minus: float


def entity_works(
    gs: GaitSet, speed: float, joints: Sequence[str] | None = None
) -> tuple[dict[str, JointWork], bool]:
    """Per-joint work decomposition at one speed.

    Uses the set's stored cycle duration; when absent, falls back to a
    1-second cycle (per-normalized-cycle work) and reports that through the
    returned unit_duration flag so cross-entity comparisons can be
    annotated.
    """
    names = list(joints) if joints is not None else list(gs.channel_names)
    duration = gs.duration_at(speed)
    unit_duration = duration is None
    t = 1.0 if duration is None else duration
    works = {}
    for name in names:
        works[name] = JointWork(*work_decompose(gs.series("power", name, speed), t))
    return works, unit_duration


def work_symmetry(
    entity: Mapping[str, JointWork],
    human_ref: Mapping[str, JointWork],
    pair: BilateralPair,
    eps: float = DEFAULT_EPS,
) -> float:
    """Bilateral work asymmetry of one pair, human-referenced.

    Averages the normalized left/right gaps of positive and negative work;
    denominators use the human reference works so entities are comparable.
    """
    try:
        el, er = entity[pair.left.name], entity[pair.right.name]
        hl, hr = human_ref[pair.left.name], human_ref[pair.right.name]
    except KeyError as exc:
        raise MissingChannelError(f"no work entry for channel {exc.args[0]!r}") from exc
    term_plus = 2.0 * abs(el.w_plus - er.w_plus) / (abs(hl.w_plus) + abs(hr.w_plus) + eps)
    term_minus = 2.0 * abs(el.w_minus - er.w_minus) / (
        abs(hl.w_minus) + abs(hr.w_minus) + eps
    )
    return 0.5 * (term_plus + term_minus)


def work_divergence(
    human: JointWork, robot: JointWork, eps: float = DEFAULT_EPS
) -> tuple[float, bool]:
    """Human-robot work divergence of one joint.

    Normalizes each signed-work gap by the human work magnitude. Returns
    (value, reference_degenerate): the flag marks cells whose human
    reference work is so small that the ratio is dominated by eps.
    """
    d = 0.5 * (
        abs(human.w_plus - robot.w_plus) / (abs(human.w_plus) + eps)
        + abs(human.w_minus - robot.w_minus) / (abs(human.w_minus) + eps)
    )
    degenerate = abs(human.w_plus) < WORK_REF_FLOOR or abs(human.w_minus) < WORK_REF_FLOOR
    return d, degenerate


# ---------------------------------------------------------------------------
# Composite cost
# ---------------------------------------------------------------------------


def pillar_symmetry(si_robot: float, a_work_robot: float) -> float:
    """Symmetry pillar: S = 0.5*SI + 0.5*A/10.

    The work-asymmetry term is scaled by 1/10 so kinematic symmetry
    dominates despite the disparate units.
    """
    return 0.5 * si_robot + 0.5 * (a_work_robot / 10.0)


def pillar_humanlikeness(r_wav: float, d_work: float) -> float:
    """Human-likeness pillar: H = ((1 - R_wav) + d_work/10) / 2.

    The waveform similarity enters as a cost (1 - R); the work divergence
    is scaled by 1/10 to balance units.
    """
    return ((1.0 - r_wav) + d_work / 10.0) / 2.0


def gdaf_cost(s_robot: float, h: float) -> float:
    """Composite cost C = 0.5*S + 0.5*H; lower means better symmetry and
    human-likeness."""
    return 0.5 * s_robot + 0.5 * h


# ---------------------------------------------------------------------------
# Torque-angle loops
# ---------------------------------------------------------------------------


def torque_angle_loop(gs: GaitSet, joint: str, speed: float) -> np.ndarray:
    """(angle_deg, torque_nmkg) points over one cycle, closed at the end.

    Returns an (n_samples + 1, 2) array in gait-cycle order with the 0%
    point repeated last, so the loop polygon is explicitly closed.
    """
    angle = gs.series("pos", joint, speed)
    torque = gs.series("torque", joint, speed)
    pts = np.column_stack([angle, torque])
    return np.vstack([pts, pts[:1]])


# ---------------------------------------------------------------------------
# Tables and per-speed indices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricTable:
    """Joint-by-speed (or pair-by-speed) matrix of one scalar metric.

    ``defined`` masks cells that could not be computed (degenerate
    variance); undefined cells hold 0 in ``values`` and are excluded from
    means.
    """

    metric_name: str
    row_keys: tuple[str, ...]
    col_keys: tuple[float, ...]
    values: np.ndarray
    defined: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        defined = np.asarray(self.defined, dtype=bool)
        if values.shape != (len(self.row_keys), len(self.col_keys)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(self.row_keys)} rows x {len(self.col_keys)} cols"
            )
        if defined.shape != values.shape:
            raise ValueError("defined mask must match values shape")
        if not np.isfinite(values[defined]).all():
            raise ValueError("defined cells must be finite")
        values.setflags(write=False)
        defined.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "defined", defined)
        object.__setattr__(self, "row_keys", tuple(self.row_keys))
        object.__setattr__(self, "col_keys", tuple(float(c) for c in self.col_keys))

    def column_mean(self, col: int) -> float:
        mask = self.defined[:, col]
        if not mask.any():
            raise DegenerateVarianceError(
                f"{self.metric_name}: no defined cells at column {col}"
            )
        return float(self.values[mask, col].mean())

    @property
    def n_undefined(self) -> int:
        return int((~self.defined).sum())


def similarity_tables(
    gs_h: GaitSet,
    gs_r: GaitSet,
    joints: Sequence[str],
    speeds: Sequence[float],
) -> dict[str, MetricTable]:
    """Angle/moment/power similarity heatmaps over a speed list."""
    tables = {}
    for label in _QUANTITY_FOR:
        values = np.zeros((len(joints), len(speeds)))
        defined = np.ones_like(values, dtype=bool)
        tables[label] = (values, defined)
    for c, speed in enumerate(speeds):
        cells = waveform_similarity(gs_h, gs_r, joints, speed)
        for label, (values, defined) in tables.items():
            for r_idx, joint in enumerate(joints):
                cell = cells[label][joint]
                if cell is None:
                    defined[r_idx, c] = False
                else:
                    values[r_idx, c] = cell
    return {
        label: MetricTable(
            metric_name=f"similarity_{label}",
            row_keys=tuple(joints),
            col_keys=tuple(speeds),
            values=values,
            defined=defined,
        )
        for label, (values, defined) in tables.items()
    }


@dataclass(frozen=True)
class GdafIndices:
    """All per-speed indices: pillar inputs, pillars, and the composite cost."""

    speed_mps: float
    si_robot: float
    si_human: float
    a_work_robot: float
    a_work_human: float
    s_robot: float
    r_wav: float
    d_work: float
    h: float
    c: float

    @classmethod
    def from_pillars(
        cls,
        speed_mps: float,
        si_robot: float,
        si_human: float,
        a_work_robot: float,
        a_work_human: float,
        r_wav: float,
        d_work: float,
    ) -> "GdafIndices":
        """Build a row whose S/H/C identities hold by construction."""
        s_robot = pillar_symmetry(si_robot, a_work_robot)
        h = pillar_humanlikeness(r_wav, d_work)
        return cls(
            speed_mps=speed_mps,
            si_robot=si_robot,
            si_human=si_human,
            a_work_robot=a_work_robot,
            a_work_human=a_work_human,
            s_robot=s_robot,
            r_wav=r_wav,
            d_work=d_work,
            h=h,
            c=gdaf_cost(s_robot, h),
        )


@dataclass(frozen=True)
class SpeedFlags:
    """Quality flags accumulated while computing one speed's indices."""

    excluded_similarity_cells: int
    flagged_work_cells: int
    unit_duration: bool


def gdaf_indices_at_speed(
    gs_h: GaitSet,
    gs_r: GaitSet,
    joints: Sequence[str],
    pairs: Sequence[BilateralPair],
    speed: float,
    eps: float = DEFAULT_EPS,
    include_flagged_work_cells: bool = True,
) -> tuple[GdafIndices, SpeedFlags]:
    """Compute the full index row for one speed.

    Means run over ``joints`` for waveform similarity and work divergence
    and over ``pairs`` for the symmetry metrics. Degenerate similarity
    cells are excluded from the per-quantity means; reference-degenerate
    work cells are included unless include_flagged_work_cells is False.
    """
    cells = waveform_similarity(gs_h, gs_r, joints, speed)
    means = {}
    excluded = 0
    for label in _QUANTITY_FOR:
        defined = [v for v in cells[label].values() if v is not None]
        excluded += len(cells[label]) - len(defined)
        if not defined:
            raise DegenerateVarianceError(
                f"all {label} similarity cells at {speed} m/s are degenerate"
            )
        means[label] = float(sum(defined)) / len(defined)
    r_wav = combined_waveform(means["angle"], means["moment"], means["power"])

    si_human = combined_si(
        [symmetry_index(gs_h, gs_h, p, speed, eps) for p in pairs]
    )
    si_robot = combined_si(
        [symmetry_index(gs_r, gs_h, p, speed, eps) for p in pairs]
    )

    works_h, unit_h = entity_works(gs_h, speed, joints)
    works_r, unit_r = entity_works(gs_r, speed, joints)
    a_human = combined_si(
        [work_symmetry(works_h, works_h, p, eps) for p in pairs]
    )
    a_robot = combined_si(
        [work_symmetry(works_r, works_h, p, eps) for p in pairs]
    )

    d_cells = []
    flagged = 0
    for joint in joints:
        d, degenerate = work_divergence(works_h[joint], works_r[joint], eps)
        if degenerate:
            flagged += 1
            if not include_flagged_work_cells:
                continue
        d_cells.append(d)
    if not d_cells:
        raise MissingChannelError(
            f"no work-divergence cells left at {speed} m/s after exclusions"
        )
    d_work = float(sum(d_cells)) / len(d_cells)

    indices = GdafIndices.from_pillars(
        speed_mps=speed,
        si_robot=si_robot,
        si_human=si_human,
        a_work_robot=a_robot,
        a_work_human=a_human,
        r_wav=r_wav,
        d_work=d_work,
    )
    flags = SpeedFlags(
        excluded_similarity_cells=excluded,
        flagged_work_cells=flagged,
        unit_duration=unit_h or unit_r,
    )
    return indices, flags
