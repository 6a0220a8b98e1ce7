"""Reading and writing the on-disk gait-set container and tabular exports.

The container is UTF-8 JSON (``.gaitset.json``) with fixed top-level keys:
entity, channels, speeds_mps, n_samples, pos_deg, torque_nmkg, power_wkg,
cycle_duration_s (optional) and provenance. Trajectory grids are nested
channel-major, speed-minor, sample-innermost. Numbers round-trip at full
double precision (shortest-repr float formatting).
"""

from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from .errors import MalformedDocumentError, MappingError, SchemaError, UnknownSpeedError
from .model import (
    ChannelId,
    GaitSet,
    JointMap,
    JointMapEntry,
    SpeedGrid,
    Side,
    AnatomicalGroup,
    validate_gaitset,
)

GAITSET_EXTENSION = ".gaitset.json"

_REQUIRED_KEYS = (
    "entity",
    "channels",
    "speeds_mps",
    "n_samples",
    "pos_deg",
    "torque_nmkg",
    "power_wkg",
)


def gaitset_to_document(gs: GaitSet) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "entity": gs.entity,
        "channels": [
            {"name": c.name, "side": c.side.value, "anatomical_group": c.anatomical_group.value}
            for c in gs.channels
        ],
        "speeds_mps": list(gs.speed_grid.speeds_mps),
        "n_samples": gs.n_samples,
        "pos_deg": gs.pos_deg.tolist(),
        "torque_nmkg": gs.torque_nmkg.tolist(),
        "power_wkg": gs.power_wkg.tolist(),
    }
    if gs.cycle_duration_s is not None:
        doc["cycle_duration_s"] = gs.cycle_duration_s.tolist()
    doc["provenance"] = dict(gs.provenance)
    return doc


def canonical_document_bytes(doc: dict[str, Any]) -> bytes:
    """The one canonical serialization: fixed key order, LF-terminated."""
    ordered: dict[str, Any] = {}
    for key in (*_REQUIRED_KEYS, "cycle_duration_s", "provenance"):
        if key in doc:
            ordered[key] = doc[key]
    for key in doc:
        if key not in ordered:
            ordered[key] = doc[key]
    text = json.dumps(ordered, ensure_ascii=False, allow_nan=True)
    return text.encode("utf-8") + b"\n"


def _as_channel(obj: Any, where: str) -> ChannelId:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: channel entries must be objects, got {type(obj).__name__}")
    try:
        return ChannelId(
            name=str(obj["name"]),
            side=Side(obj["side"]),
            anatomical_group=AnatomicalGroup(obj["anatomical_group"]),
        )
    except KeyError as exc:
        raise SchemaError(f"{where}: channel entry missing key {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def document_to_gaitset(doc: dict[str, Any]) -> GaitSet:
    for key in _REQUIRED_KEYS:
        if key not in doc:
            raise SchemaError(f"missing key {key}")

    channels = tuple(
        _as_channel(c, f"channels[{i}]") for i, c in enumerate(doc["channels"])
    )
    speeds = SpeedGrid(doc["speeds_mps"])
    n_samples = int(doc["n_samples"])
    expected = (len(channels), len(speeds), n_samples)

    grids = {}
    for key in ("pos_deg", "torque_nmkg", "power_wkg"):
        arr = np.asarray(doc[key], dtype=float)
        if arr.shape != expected:
            raise SchemaError(
                f"array {key} has shape {arr.shape}, expected "
                f"{expected} (channels x speeds x n_samples)"
            )
        grids[key] = arr

    duration = None
    if doc.get("cycle_duration_s") is not None:
        duration = np.asarray(doc["cycle_duration_s"], dtype=float)
        if duration.shape != (len(speeds),):
            raise SchemaError(
                f"array cycle_duration_s has shape {duration.shape}, "
                f"expected ({len(speeds)},)"
            )

    provenance = doc.get("provenance", {})
    if not isinstance(provenance, dict):
        raise SchemaError("provenance must be a string map")

    return GaitSet(
        entity=str(doc["entity"]),
        channels=channels,
        speed_grid=speeds,
        pos_deg=grids["pos_deg"],
        torque_nmkg=grids["torque_nmkg"],
        power_wkg=grids["power_wkg"],
        cycle_duration_s=duration,
        provenance={str(k): str(v) for k, v in provenance.items()},
    )


def load_gaitset(path: str | os.PathLike) -> GaitSet:
    """Load a ``.gaitset.json`` container and validate it.

    Raises MalformedDocumentError on parse failure (naming the position),
    SchemaError on shape/key problems or invariant violations.
    """
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

    gs = document_to_gaitset(doc)
    violations = validate_gaitset(gs)
    if violations:
        lines = "; ".join(str(v) for v in violations)
        raise SchemaError(f"{path}: invalid gait set: {lines}")
    return gs


def save_gaitset(gs: GaitSet, path: str | os.PathLike) -> None:
    """Write the canonical serialization of a valid GaitSet."""
    violations = validate_gaitset(gs)
    if violations:
        lines = "; ".join(str(v) for v in violations)
        raise SchemaError(f"refusing to write invalid gait set: {lines}")
    data = canonical_document_bytes(gaitset_to_document(gs))
    with open(path, "wb") as fh:
        fh.write(data)


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


def load_joint_map(path: str | os.PathLike) -> JointMap:
    """Read a joint map file: {"entries": [{human, robot, sign, offset_deg}],
    "excluded_human_channels": [...]}."""
    with open(path, "rb") as fh:
        try:
            doc = json.loads(fh.read().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MalformedDocumentError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or "entries" not in doc:
        raise MappingError(f"{path}: joint map must be an object with an 'entries' list")
    entries = []
    for i, e in enumerate(doc["entries"]):
        try:
            entries.append(
                JointMapEntry(
                    human=str(e["human"]),
                    robot=str(e["robot"]),
                    sign=int(e.get("sign", 1)),
                    offset_deg=float(e.get("offset_deg", 0.0)),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MappingError(f"{path}: bad entry at index {i}: {exc}") from exc
    excluded = tuple(str(c) for c in doc.get("excluded_human_channels", ()))
    return JointMap(tuple(entries), excluded)


def joint_map_to_document(jmap: JointMap) -> dict[str, Any]:
    return {
        "entries": [
            {"human": e.human, "robot": e.robot, "sign": e.sign, "offset_deg": e.offset_deg}
            for e in jmap.entries
        ],
        "excluded_human_channels": list(jmap.excluded_human_channels),
    }


# ---------------------------------------------------------------------------
# Viewer bundle
# ---------------------------------------------------------------------------

VIEWER_BUNDLE_FORMAT = "gdaf-viewer-bundle"


def _entity_block(gs: GaitSet) -> dict[str, Any]:
    return {
        "channels": list(gs.channel_names),
        "speeds_mps": list(gs.speed_grid.speeds_mps),
        "n_samples": gs.n_samples,
        "pos_deg": gs.pos_deg.tolist(),
        "torque_nmkg": gs.torque_nmkg.tolist(),
        "power_wkg": gs.power_wkg.tolist(),
        "cycle_duration_s": (
            None if gs.cycle_duration_s is None else gs.cycle_duration_s.tolist()
        ),
    }


def viewer_bundle_document(
    gs_h: GaitSet,
    gs_r: GaitSet,
    joint_map: JointMap | None = None,
    config_echo: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """Self-contained document with both entities' grids for the viewer."""
    return {
        "format": VIEWER_BUNDLE_FORMAT,
        "version": 1,
        "entities": {"human": _entity_block(gs_h), "robot": _entity_block(gs_r)},
        "joint_map": None if joint_map is None else joint_map_to_document(joint_map),
        "config": config_echo,
    }


def write_viewer_bundle(doc: dict[str, Any], path: str | os.PathLike) -> None:
    text = json.dumps(doc, ensure_ascii=False) + "\n"
    with open(path, "wb") as fh:
        fh.write(text.encode("utf-8"))


def export_table(gs: GaitSet, quantity: str, speed: float) -> str:
    """One speed's trajectories as CSV text: gait_pct plus one column per channel.

    Comma separated, '.' decimal point, LF line endings, no BOM.
    """
    grid = gs.quantity_grid(quantity)
    try:
        s_idx = gs.speed_grid.index_of(speed)
    except UnknownSpeedError:
        raise UnknownSpeedError(
            f"speed {speed} m/s not in set; available: "
            f"{list(gs.speed_grid.speeds_mps)}"
        ) from None

    n = gs.n_samples
    lines = ["gait_pct," + ",".join(gs.channel_names)]
    for k in range(n):
        pct = 100.0 * k / (n - 1)
        row = [format_float(pct)]
        row.extend(format_float(grid[c, s_idx, k]) for c in range(len(gs.channels)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
