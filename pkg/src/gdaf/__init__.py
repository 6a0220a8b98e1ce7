"""Gait divergence analysis for human vs. humanoid locomotion.

Pipeline: raw recordings -> cycle-normalized gait sets -> waveform /
symmetry / energetic metrics per joint and speed -> composite per-speed
cost -> report and viewer bundles.
"""

__version__ = "0.1.0"

from .config import RunConfig
from .errors import GdafError
from .io import export_table, load_gaitset, load_joint_map, save_gaitset
from .metrics import (
    GdafIndices,
    MetricTable,
    combined_si,
    combined_waveform,
    extrema,
    gdaf_cost,
    pearson,
    pillar_humanlikeness,
    pillar_symmetry,
    symmetry_index,
    torque_angle_loop,
    waveform_similarity,
    work_decompose,
    work_divergence,
    work_symmetry,
)
from .model import (
    BilateralPair,
    ChannelId,
    GaitSet,
    JointMap,
    JointMapEntry,
    SpeedGrid,
    canonical_channels,
    channel_from_name,
    default_pairs,
    validate_gaitset,
)
from .report import ReportBundle, build_report, write_bundle
from .segmentation import (
    RawRecording,
    StrideEvents,
    apply_joint_map,
    average_strides,
    build_gaitset,
    detect_heel_strikes,
    detect_robot_strikes,
    slice_and_resample,
)

__all__ = [
    "BilateralPair",
    "ChannelId",
    "GaitSet",
    "GdafError",
    "GdafIndices",
    "JointMap",
    "JointMapEntry",
    "MetricTable",
    "RawRecording",
    "ReportBundle",
    "RunConfig",
    "SpeedGrid",
    "StrideEvents",
    "apply_joint_map",
    "average_strides",
    "build_gaitset",
    "build_report",
    "canonical_channels",
    "channel_from_name",
    "combined_si",
    "combined_waveform",
    "default_pairs",
    "detect_heel_strikes",
    "detect_robot_strikes",
    "export_table",
    "extrema",
    "gdaf_cost",
    "load_gaitset",
    "load_joint_map",
    "pearson",
    "pillar_humanlikeness",
    "pillar_symmetry",
    "save_gaitset",
    "slice_and_resample",
    "symmetry_index",
    "torque_angle_loop",
    "validate_gaitset",
    "waveform_similarity",
    "work_decompose",
    "work_divergence",
    "work_symmetry",
    "write_bundle",
]
