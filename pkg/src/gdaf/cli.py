"""Command-line front end.

Subcommands: segment, analyze, export-viewer, validate. Flags are
long-form only. A config file can be passed with --config or through the
GDAF_CONFIG environment variable (the explicit flag wins); its echo is
stored in every manifest so a run is reproducible from its outputs.

Exit codes: 0 success, 1 bad input or I/O failure, 2 no recordings found,
3 no detectable strides, 4 no common speeds, 5 joint-map errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .config import RunConfig, resolve_config
from .errors import (
    ConfigError,
    GdafError,
    InsufficientStridesError,
    MappingError,
    NoCommonSpeedsError,
)
from .io import (
    load_gaitset,
    load_joint_map,
    save_gaitset,
    viewer_bundle_document,
    write_viewer_bundle,
)
from .model import validate_gaitset
from .report import build_report, format_table_i, write_bundle
from .segmentation import (
    RAWREC_EXTENSION,
    apply_joint_map,
    load_raw_recording,
    segment_recordings,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_NO_RECORDINGS = 2
EXIT_NO_STRIDES = 3
EXIT_NO_COMMON_SPEEDS = 4
EXIT_MAPPING = 5


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _input_meta(path: Path) -> dict:
    return {"path": str(path), "sha256": _sha256(path)}


def _load_gaitset_checked(path_str: str, role: str):
    path = Path(path_str)
    if not path.exists():
        raise FileNotFoundError(f"{role} gait set {path} does not exist")
    return load_gaitset(path)


def cmd_segment(args: argparse.Namespace, config: RunConfig) -> int:
    in_dir = Path(args.input)
    if not in_dir.is_dir():
        print(f"error: input directory {in_dir} does not exist", file=sys.stderr)
        return EXIT_BAD_INPUT
    paths = sorted(p for p in in_dir.iterdir() if p.name.endswith(RAWREC_EXTENSION))
    if not paths:
        print(f"error: no recordings found in {in_dir}", file=sys.stderr)
        return EXIT_NO_RECORDINGS

    recordings = [load_raw_recording(p) for p in paths]
    event_channel = (
        config.robot_event_channel if args.entity == "robot" else config.heel_velocity_channel
    )
    provenance = {
        "source": "gdaf segment",
        "entity": args.entity,
        "recordings": ",".join(p.name for p in paths),
        "config": json.dumps(config.to_dict(), sort_keys=True),
    }
    gs, summaries = segment_recordings(
        recordings,
        entity=args.entity,
        n_samples=config.n_samples,
        min_stride_s=config.min_stride_s,
        robot_jump_threshold=config.robot_jump_threshold,
        trim_strides=config.steady_state_trim_strides,
        event_channel=event_channel,
        average_mode=config.stride_average,
        provenance=provenance,
    )
    save_gaitset(gs, args.out)
    for s in summaries:
        print(
            f"speed {s.speed_mps:g} m/s: {s.n_strides} stride(s), "
            f"mean cycle {s.mean_duration_s:.4f} s"
        )
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> int:
    gs_h = _load_gaitset_checked(args.human, "human")
    gs_r = _load_gaitset_checked(args.robot, "robot")

    if config.joint_map_path is not None:
        jmap = load_joint_map(config.joint_map_path)
        gs_h = apply_joint_map(gs_h, jmap)

    input_meta = {
        "human": _input_meta(Path(args.human)),
        "robot": _input_meta(Path(args.robot)),
    }
    bundle = build_report(gs_h, gs_r, config, input_meta=input_meta)
    write_bundle(bundle, args.out)
    print(format_table_i(bundle.gdaf_table), end="")
    print(f"wrote report bundle to {args.out}")
    return EXIT_OK


def cmd_export_viewer(args: argparse.Namespace, config: RunConfig) -> int:
    gs_h = _load_gaitset_checked(args.human, "human")
    gs_r = _load_gaitset_checked(args.robot, "robot")
    jmap = None
    if config.joint_map_path is not None:
        jmap = load_joint_map(config.joint_map_path)
    doc = viewer_bundle_document(gs_h, gs_r, jmap, config.to_dict())
    write_viewer_bundle(doc, args.out)
    print(f"wrote viewer bundle {args.out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    gs = _load_gaitset_checked(args.input, "input")
    violations = validate_gaitset(gs)
    if violations:  # load_gaitset already validates; kept for belt and braces
        for v in violations:
            print(str(v))
        return EXIT_BAD_INPUT
    print(
        f"OK: {gs.entity} set, {len(gs.channels)} channel(s), "
        f"{len(gs.speed_grid)} speed(s), {gs.n_samples} samples/cycle"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdaf",
        description="Gait divergence analysis between human and humanoid locomotion.",
    )
    parser.add_argument("--version", action="version", version=f"gdaf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment raw recordings into a gait set")
    p.add_argument("--input", required=True, help="directory of .rawrec.json files")
    p.add_argument("--entity", required=True, choices=["human", "robot"])
    p.add_argument("--out", required=True, help="output .gaitset.json path")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("analyze", help="compare two gait sets and write a report bundle")
    p.add_argument("--human", required=True, help="human .gaitset.json")
    p.add_argument("--robot", required=True, help="robot .gaitset.json")
    p.add_argument("--out", required=True, help="output bundle directory")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("export-viewer", help="bundle both sets for the browser viewer")
    p.add_argument("--human", required=True)
    p.add_argument("--robot", required=True)
    p.add_argument("--out", required=True, help="output .viewer.json path")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_export_viewer)

    p = sub.add_parser("validate", help="check a gait set file")
    p.add_argument("--input", required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args.config)
        return args.func(args, config)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"run 'gdaf {args.command} --help' for usage", file=sys.stderr)
        return EXIT_BAD_INPUT
    except InsufficientStridesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_STRIDES
    except NoCommonSpeedsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_COMMON_SPEEDS
    except MappingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MAPPING
    except (ConfigError, GdafError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
