"""Report bundles: the analysis artifacts materialized as tabular files.

A bundle directory holds:

* ``manifest.json``          run metadata, config echo, quality-flag counts
* ``similarity_angle.csv``   joint-by-speed correlation heatmaps
* ``similarity_moment.csv``
* ``similarity_power.csv``
* ``si_distribution.csv``    per-pair symmetry index, both entities
* ``work_curves.csv``        positive/negative work per channel vs speed
* ``loops/<entity>_<joint>_<speed>.csv``  torque-angle loop points
* ``gdaf_table.csv``         the per-speed index table

Bundles are deterministic: identical inputs and config produce
byte-identical trees. Floats are written in shortest round-trip form, so
values read back equal the values computed.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .config import RunConfig
from .errors import ConfigError, MissingChannelError, NoCommonSpeedsError
from .io import format_float
from .metrics import (
    GdafIndices,
    MetricTable,
    SpeedFlags,
    entity_works,
    gdaf_indices_at_speed,
    similarity_tables,
    symmetry_index,
    torque_angle_loop,
)
from .model import GaitSet, SPEED_MATCH_DECIMALS, resolve_pairs


def common_speeds(gs_h: GaitSet, gs_r: GaitSet) -> list[float]:
    """Speeds present on both grids, matched after rounding to 1e-6 m/s."""
    robot_keys = {
        round(v, SPEED_MATCH_DECIMALS) for v in gs_r.speed_grid.speeds_mps
    }
    out = [
        v
        for v in gs_h.speed_grid.speeds_mps
        if round(v, SPEED_MATCH_DECIMALS) in robot_keys
    ]
    if not out:
        raise NoCommonSpeedsError(
            f"no common speeds between human grid {list(gs_h.speed_grid.speeds_mps)} "
            f"and robot grid {list(gs_r.speed_grid.speeds_mps)}"
        )
    return out


@dataclass(frozen=True)
class ReportBundle:
    manifest: dict[str, Any]
    heatmaps: dict[str, MetricTable]
    si_distribution: list[tuple[str, str, float, float]]
    work_curves: list[tuple[str, str, float, float, float]]
    loops: dict[tuple[str, str, float], np.ndarray]
    gdaf_table: list[GdafIndices]


def build_report(
    gs_h: GaitSet,
    gs_r: GaitSet,
    config: RunConfig | None = None,
    input_meta: Mapping[str, Any] | None = None,
) -> ReportBundle:
    """Compute every artifact family over the common speed grid.

    Deterministic for identical inputs and config. ``input_meta`` is echoed
    into the manifest (the CLI stores input paths and digests there).
    """
    config = config or RunConfig()
    speeds = common_speeds(gs_h, gs_r)
    joints = [n for n in gs_h.channel_names if n in set(gs_r.channel_names)]
    if not joints:
        raise MissingChannelError("the two sets share no channels")
    try:
        pairs = resolve_pairs(config.pair_set, [gs_h.channels[gs_h.channel_index(j)] for j in joints])
    except MissingChannelError as exc:
        raise ConfigError(f"pair_set is unresolvable on the common channels: {exc}") from exc

    if config.duration_mode == "unit":
        gs_h = dataclasses.replace(gs_h, cycle_duration_s=None)
        gs_r = dataclasses.replace(gs_r, cycle_duration_s=None)

    heatmaps = similarity_tables(gs_h, gs_r, joints, speeds)

    si_rows: list[tuple[str, str, float, float]] = []
    for pair in pairs:
        for entity, gs in (("human", gs_h), ("robot", gs_r)):
            for speed in speeds:
                si_rows.append(
                    (pair.pair_name, entity, speed, symmetry_index(gs, gs_h, pair, speed, config.eps))
                )

    work_rows: list[tuple[str, str, float, float, float]] = []
    unit_duration = False
    for entity, gs in (("human", gs_h), ("robot", gs_r)):
        for speed in speeds:
            works, unit = entity_works(gs, speed, joints)
            unit_duration = unit_duration or unit
            for joint in joints:
                w = works[joint]
                work_rows.append((joint, entity, speed, w.w_plus, w.w_minus))

    loop_joints = [j for j in config.loop_joints if j in joints]
    loops: dict[tuple[str, str, float], np.ndarray] = {}
    for entity, gs in (("human", gs_h), ("robot", gs_r)):
        for joint in loop_joints:
            for speed in speeds:
                loops[(entity, joint, speed)] = torque_angle_loop(gs, joint, speed)

    table: list[GdafIndices] = []
    flag_totals = SpeedFlags(0, 0, unit_duration)
    for speed in speeds:
        row, flags = gdaf_indices_at_speed(
            gs_h,
            gs_r,
            joints,
            pairs,
            speed,
            eps=config.eps,
            include_flagged_work_cells=config.include_flagged_work_cells,
        )
        table.append(row)
        flag_totals = SpeedFlags(
            flag_totals.excluded_similarity_cells + flags.excluded_similarity_cells,
            flag_totals.flagged_work_cells + flags.flagged_work_cells,
            flag_totals.unit_duration or flags.unit_duration,
        )

    manifest: dict[str, Any] = {
        "tool": "gdaf",
        "artifact": "report-bundle",
        "inputs": dict(input_meta or {}),
        "config": config.to_dict(),
        "common_speeds_mps": list(speeds),
        "joints": list(joints),
        "pairs": [p.pair_name for p in pairs],
        "flags": {
            "excluded_similarity_cells": flag_totals.excluded_similarity_cells,
            "flagged_work_cells": flag_totals.flagged_work_cells,
            "unit_duration_assumption": flag_totals.unit_duration,
        },
    }
    return ReportBundle(
        manifest=manifest,
        heatmaps=heatmaps,
        si_distribution=si_rows,
        work_curves=work_rows,
        loops=loops,
        gdaf_table=table,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

GDAF_TABLE_COLUMNS = (
    "speed_mps",
    "si_robot",
    "si_human",
    "a_work_robot",
    "a_work_human",
    "s_robot",
    "r_wav",
    "d_work",
    "h",
    "c",
)


def _write_text(path: Path, text: str) -> None:
    path.write_bytes(text.encode("utf-8"))


def _heatmap_csv(table: MetricTable) -> str:
    header = "joint," + ",".join(format_float(s) for s in table.col_keys)
    lines = [header]
    for r, joint in enumerate(table.row_keys):
        cells = [
            format_float(table.values[r, c]) if table.defined[r, c] else ""
            for c in range(len(table.col_keys))
        ]
        lines.append(joint + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def write_bundle(bundle: ReportBundle, out_dir: str | os.PathLike) -> None:
    """Write one tabular file per artifact family plus the manifest."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)

    _write_text(
        root / "manifest.json",
        json.dumps(bundle.manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
    )

    for label, table in bundle.heatmaps.items():
        _write_text(root / f"similarity_{label}.csv", _heatmap_csv(table))

    lines = ["pair,entity,speed_mps,si"]
    for pair, entity, speed, si in bundle.si_distribution:
        lines.append(f"{pair},{entity},{format_float(speed)},{format_float(si)}")
    _write_text(root / "si_distribution.csv", "\n".join(lines) + "\n")

    lines = ["channel,entity,speed_mps,w_plus_jkg,w_minus_jkg"]
    for channel, entity, speed, wp, wm in bundle.work_curves:
        lines.append(
            f"{channel},{entity},{format_float(speed)},{format_float(wp)},{format_float(wm)}"
        )
    _write_text(root / "work_curves.csv", "\n".join(lines) + "\n")

    loops_dir = root / "loops"
    loops_dir.mkdir(exist_ok=True)
    for (entity, joint, speed), pts in bundle.loops.items():
        lines = ["angle_deg,torque_nmkg"]
        for angle, torque in pts:
            lines.append(f"{format_float(angle)},{format_float(torque)}")
        _write_text(
            loops_dir / f"{entity}_{joint}_{format_float(speed)}.csv",
            "\n".join(lines) + "\n",
        )

    lines = [",".join(GDAF_TABLE_COLUMNS)]
    for row in bundle.gdaf_table:
        lines.append(
            ",".join(format_float(getattr(row, col)) for col in GDAF_TABLE_COLUMNS)
        )
    _write_text(root / "gdaf_table.csv", "\n".join(lines) + "\n")


def read_gdaf_table(path: str | os.PathLike) -> list[GdafIndices]:
    """Parse a gdaf_table.csv back into index rows."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln]
    header = tuple(lines[0].split(","))
    if header != GDAF_TABLE_COLUMNS:
        raise ValueError(f"unexpected gdaf_table header: {header}")
    rows = []
    for ln in lines[1:]:
        values = [float(v) for v in ln.split(",")]
        rows.append(GdafIndices(**dict(zip(GDAF_TABLE_COLUMNS, values))))
    return rows


def format_table_i(table: Sequence[GdafIndices]) -> str:
    """Human-oriented rendering of the index table.

    One column per speed; symmetry rows show the robot value with the
    human reference in parentheses.
    """
    speeds = [row.speed_mps for row in table]
    headers = ["metric"] + [f"{s:g}" for s in speeds]

    def fmt_pair(r: float, h: float) -> str:
        return f"{r:.4f} ({h:.4f})"

    rows = [
        ("SI", [fmt_pair(t.si_robot, t.si_human) for t in table]),
        ("A_work", [fmt_pair(t.a_work_robot, t.a_work_human) for t in table]),
        ("S", [f"{t.s_robot:.4f}" for t in table]),
        ("R_wav", [f"{t.r_wav:.4f}" for t in table]),
        ("d_work", [f"{t.d_work:.4f}" for t in table]),
        ("H", [f"{t.h:.4f}" for t in table]),
        ("C", [f"{t.c:.4f}" for t in table]),
    ]
    widths = [max(len(headers[0]), max(len(r[0]) for r in rows))]
    for c in range(len(speeds)):
        widths.append(
            max(len(headers[c + 1]), max(len(r[1][c]) for r in rows))
        )
    out_lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
    ]
    for name, cells in rows:
        out_lines.append(
            "  ".join(v.ljust(w) for v, w in zip([name] + cells, widths))
        )
    return "\n".join(out_lines) + "\n"
