import numpy as np
import pytest

from gdaf.model import GaitSet, SpeedGrid, canonical_channels, channel_from_name
from gdaf.segmentation import RawRecording


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def make_gaitset(
    rng,
    entity="human",
    channel_names=("knee_l", "knee_r"),
    speeds=(1.0, 1.5),
    n_samples=11,
    with_durations=True,
    provenance=None,
):
    """Random valid GaitSet; smooth-ish values, never constant per series."""
    channels = tuple(channel_from_name(n) for n in channel_names)
    shape = (len(channels), len(speeds), n_samples)
    pos = rng.normal(scale=20.0, size=shape)
    torque = rng.normal(scale=1.0, size=shape)
    power = rng.normal(scale=1.5, size=shape)
    durations = rng.uniform(0.7, 1.4, size=len(speeds)) if with_durations else None
    return GaitSet(
        entity=entity,
        channels=channels,
        speed_grid=SpeedGrid(speeds),
        pos_deg=pos,
        torque_nmkg=torque,
        power_wkg=power,
        cycle_duration_s=durations,
        provenance=provenance or {},
    )


def make_full_gaitset(rng, entity="human", speeds=(0.8, 1.0, 1.2), n_samples=101):
    """Random valid set over the whole canonical channel vocabulary."""
    names = tuple(c.name for c in canonical_channels())
    return make_gaitset(rng, entity=entity, channel_names=names, speeds=speeds, n_samples=n_samples)


def synthetic_recording(
    speed=1.0,
    rate=200.0,
    n_strides=6,
    stride_samples=200,
    mass=None,
    with_vel=False,
    entity="human",
    seed=0,
):
    """Recording with planted strikes every stride_samples samples."""
    rng = np.random.default_rng(seed)
    n = n_strides * stride_samples + 1
    t = np.arange(n) / rate
    phase = 2 * np.pi * np.arange(n) / stride_samples
    channels = []
    data = []
    for joint in ("knee_l", "knee_r"):
        pos = 30 * np.sin(phase) + rng.normal(scale=0.01, size=n)
        torque = 1.2 * np.cos(phase) + rng.normal(scale=0.01, size=n)
        channels += [f"pos:{joint}", f"torque:{joint}"]
        data += [pos, torque]
        if with_vel:
            vel = np.gradient(np.deg2rad(pos), t)
            channels.append(f"vel:{joint}")
            data.append(vel)
        else:
            channels.append(f"power:{joint}")
            data.append(0.8 * np.sin(phase + 0.5))
    if entity == "human":
        # forward heel velocity: positive, dipping through zero at each strike
        v = 0.5 + np.cos(phase)
        channels.append("event:heel_velocity_r")
        data.append(v)
    else:
        # robot surrogate: abrupt ankle-pitch change at each stride boundary
        ankle = np.array([10.0 if (k // stride_samples) % 2 else 0.0 for k in range(n)])
        channels.append("pos:ankle_r")
        data.append(ankle)
        channels += ["torque:ankle_r", "power:ankle_r"]
        data += [1.0 * np.cos(phase + 0.2), 0.5 * np.sin(phase + 0.4)]
    return RawRecording(
        sample_rate_hz=rate,
        channels=tuple(channels),
        data=np.stack(data),
        speed_label_mps=speed,
        body_mass_kg=mass,
        source=f"synthetic_{speed}",
    )


def recording_document(rec):
    """JSON-serializable .rawrec.json document for a RawRecording."""
    return {
        "sample_rate_hz": rec.sample_rate_hz,
        "channels": list(rec.channels),
        "data": rec.data.tolist(),
        "speed_label_mps": rec.speed_label_mps,
        "body_mass_kg": rec.body_mass_kg,
    }


def make_mirrored_gaitset(rng, entity="human", speeds=(1.0,), n_samples=51):
    """Set whose right-side channels exactly mirror the left side."""
    gs = make_full_gaitset(rng, entity=entity, speeds=speeds, n_samples=n_samples)
    pos = np.array(gs.pos_deg)
    torque = np.array(gs.torque_nmkg)
    power = np.array(gs.power_wkg)
    names = list(gs.channel_names)
    for i, name in enumerate(names):
        if name.endswith("_r"):
            j = names.index(name[:-2] + "_l")
            pos[i] = pos[j]
            torque[i] = torque[j]
            power[i] = power[j]
    return GaitSet(
        entity=gs.entity,
        channels=gs.channels,
        speed_grid=gs.speed_grid,
        pos_deg=pos,
        torque_nmkg=torque,
        power_wkg=power,
        cycle_duration_s=gs.cycle_duration_s,
    )
