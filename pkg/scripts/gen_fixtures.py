#!/usr/bin/env python3
"""Generate the synthetic human-like vs robot-like fixture pair and the
expected analysis results for it.

The generator writes two gait-set documents plus an expected-results JSON
computed here with plain-Python loops (no gdaf import), so the library can
be checked end to end against an independent evaluation of the same
formulas. Values are stored at full precision; the comparison tolerance
lives in the tests.

Run from the repository root:

    python3 scripts/gen_fixtures.py
"""

import json
import math
import os

import numpy as np

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "data")

SPEEDS = [0.5, 0.75, 1.0, 1.25, 1.5]
N = 101
EPS = 1e-8

PELVIS = ["pelvis_tilt", "pelvis_list", "pelvis_rotation"]
PAIR_BASES = ["hip_flexion", "hip_adduction", "hip_rotation", "knee", "ankle", "subtalar"]
CHANNELS = PELVIS + [f"{b}_{s}" for b in PAIR_BASES for s in ("l", "r")]

# per-base (angle amplitude deg, angle offset deg, torque amplitude Nm/kg)
BASE_SHAPE = {
    "pelvis_tilt": (4.0, 8.0, 0.2),
    "pelvis_list": (5.0, 0.0, 0.3),
    "pelvis_rotation": (8.0, 0.0, 0.2),
    "hip_flexion": (30.0, 5.0, 1.0),
    "hip_adduction": (10.0, 0.0, 0.8),
    "hip_rotation": (12.0, 0.0, 0.3),
    "knee": (55.0, 15.0, 0.6),
    "ankle": (18.0, 0.0, 1.4),
    "subtalar": (8.0, 0.0, 0.25),
}


def side_of(name):
    return name[-1] if name.endswith(("_l", "_r")) else "c"


def base_of(name):
    return name[:-2] if name.endswith(("_l", "_r")) else name


def make_entity(entity, rng):
    """Cycle grids for one entity; the robot variant is distorted and more
    asymmetric than the near-mirrored human variant."""
    t = np.arange(N) / (N - 1)
    robot = entity == "robot"
    durations = [1.4 - 0.35 * v for v in SPEEDS]
    if robot:
        durations = [d * 0.92 for d in durations]

    pos = np.zeros((len(CHANNELS), len(SPEEDS), N))
    torque = np.zeros_like(pos)
    power = np.zeros_like(pos)

    for ci, name in enumerate(CHANNELS):
        amp, off, tamp = BASE_SHAPE[base_of(name)]
        side = side_of(name)
        side_phase = 0.5 if side == "r" else 0.0  # contralateral half-cycle shift
        for si, speed in enumerate(SPEEDS):
            speed_gain = 0.7 + 0.45 * speed
            phase1 = 0.12 + 0.05 * si + 0.03 * ci
            phase2 = 0.31 + 0.02 * ci

            a1 = amp * speed_gain
            a2 = 0.25 * a1
            ta = tamp * speed_gain
            asym = 1.0
            extra = 0.0
            if side == "r":
                asym = 1.02 if not robot else 1.12  # bilateral asymmetry
            if robot:
                a1 *= 1.0 + 0.25 * math.sin(2.1 * ci + si)
                phase1 += 0.12
                phase2 -= 0.08
                extra = 0.18 * a1 * np.sin(2 * np.pi * 3 * (t + 0.07 * ci))
                off = off * 0.8 + 2.0
            jitter = rng.normal(scale=0.01 * max(amp, 1.0), size=N)
            base_angle = (
                off
                + asym * a1 * np.sin(2 * np.pi * (t + side_phase + phase1))
                + a2 * np.sin(2 * np.pi * 2 * (t + side_phase) + phase2)
                + extra
                + jitter
            )
            # close the cycle so 0% and 100% agree
            base_angle[-1] = base_angle[0]
            pos[ci, si] = base_angle

            tq = (
                asym
                * ta
                * np.sin(2 * np.pi * (t + side_phase + phase1 + (0.1 if robot else 0.06)))
                + 0.2 * ta * np.cos(2 * np.pi * 2 * (t + side_phase))
                + rng.normal(scale=0.01 * max(tamp, 0.1), size=N)
            )
            tq[-1] = tq[0]
            torque[ci, si] = tq

            omega = np.gradient(np.deg2rad(pos[ci, si]), t * durations[si])
            power[ci, si] = omega * torque[ci, si]

    return pos, torque, power, durations


def entity_document(entity, pos, torque, power, durations):
    def channel_obj(name):
        side = {"l": "left", "r": "right", "c": "central"}[side_of(name)]
        group = base_of(name).split("_")[0]
        return {"name": name, "side": side, "anatomical_group": group}

    return {
        "entity": entity,
        "channels": [channel_obj(n) for n in CHANNELS],
        "speeds_mps": SPEEDS,
        "n_samples": N,
        "pos_deg": pos.tolist(),
        "torque_nmkg": torque.tolist(),
        "power_wkg": power.tolist(),
        "cycle_duration_s": durations,
        "provenance": {"source": "synthetic fixture generator", "seed": "42"},
    }


# ---------------------------------------------------------------------------
# Independent metric evaluation (plain loops; no gdaf import)
# ---------------------------------------------------------------------------


def pearson_ref(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    num = sx = sy = 0.0
    for k in range(n):
        num += (x[k] - mx) * (y[k] - my)
        sx += (x[k] - mx) ** 2
        sy += (y[k] - my) ** 2
    return num / math.sqrt(sx * sy)


def work_ref(p, duration):
    dt = duration / (len(p) - 1)
    wp = wm = 0.0
    for k in range(len(p) - 1):
        wp += 0.5 * (max(p[k], 0.0) + max(p[k + 1], 0.0)) * dt
        wm += 0.5 * (min(p[k], 0.0) + min(p[k + 1], 0.0)) * dt
    return wp, wm


def extrema_ref(series):
    return max(series), min(series)


def expected_results(human, robot):
    """Full expected analysis: heatmaps, SI rows, works, and the index table."""
    pos_h, tq_h, pw_h, dur_h = human
    pos_r, tq_r, pw_r, dur_r = robot
    idx = {n: i for i, n in enumerate(CHANNELS)}

    heatmaps = {"angle": [], "moment": [], "power": []}
    grids = {
        "angle": (pos_h, pos_r),
        "moment": (tq_h, tq_r),
        "power": (pw_h, pw_r),
    }
    for label, (gh, gr) in grids.items():
        for name in CHANNELS:
            row = []
            for si in range(len(SPEEDS)):
                row.append(pearson_ref(list(gh[idx[name], si]), list(gr[idx[name], si])))
            heatmaps[label].append(row)

    si_rows = []
    for base in PAIR_BASES:
        li, ri = idx[f"{base}_l"], idx[f"{base}_r"]
        for entity, pos_e in (("human", pos_h), ("robot", pos_r)):
            for si, speed in enumerate(SPEEDS):
                le_max, le_min = extrema_ref(list(pos_e[li, si]))
                re_max, re_min = extrema_ref(list(pos_e[ri, si]))
                lh_max, lh_min = extrema_ref(list(pos_h[li, si]))
                rh_max, rh_min = extrema_ref(list(pos_h[ri, si]))
                num = 2.0 * (abs(le_max - re_max) + abs(le_min - re_min))
                den = abs(lh_max) + abs(rh_max) + abs(lh_min) + abs(rh_min) + EPS
                si_rows.append([base, entity, speed, num / den])

    works = {}  # (entity, channel, speed_index) -> (w+, w-)
    for entity, pw, dur in (("human", pw_h, dur_h), ("robot", pw_r, dur_r)):
        for name in CHANNELS:
            for si in range(len(SPEEDS)):
                works[(entity, name, si)] = work_ref(list(pw[idx[name], si]), dur[si])

    work_rows = [
        [name, entity, SPEEDS[si], *works[(entity, name, si)]]
        for entity in ("human", "robot")
        for si in range(len(SPEEDS))
        for name in CHANNELS
    ]

    table = []
    for si, speed in enumerate(SPEEDS):
        means = {}
        for label in ("angle", "moment", "power"):
            cells = [heatmaps[label][idx[name]][si] for name in CHANNELS]
            means[label] = sum(cells) / len(cells)
        r_wav = 0.5 * means["angle"] + 0.3 * means["moment"] + 0.2 * means["power"]

        def combined_pair_metric(fn):
            vals = [fn(base) for base in PAIR_BASES]
            return sum(vals) / len(vals)

        def si_of(entity_pos, base):
            li, ri = idx[f"{base}_l"], idx[f"{base}_r"]
            le_max, le_min = extrema_ref(list(entity_pos[li, si]))
            re_max, re_min = extrema_ref(list(entity_pos[ri, si]))
            lh_max, lh_min = extrema_ref(list(pos_h[li, si]))
            rh_max, rh_min = extrema_ref(list(pos_h[ri, si]))
            num = 2.0 * (abs(le_max - re_max) + abs(le_min - re_min))
            den = abs(lh_max) + abs(rh_max) + abs(lh_min) + abs(rh_min) + EPS
            return num / den

        def a_of(entity, base):
            el = works[(entity, f"{base}_l", si)]
            er = works[(entity, f"{base}_r", si)]
            hl = works[("human", f"{base}_l", si)]
            hr = works[("human", f"{base}_r", si)]
            tp = 2.0 * abs(el[0] - er[0]) / (abs(hl[0]) + abs(hr[0]) + EPS)
            tm = 2.0 * abs(el[1] - er[1]) / (abs(hl[1]) + abs(hr[1]) + EPS)
            return 0.5 * (tp + tm)

        si_h = combined_pair_metric(lambda b: si_of(pos_h, b))
        si_r = combined_pair_metric(lambda b: si_of(pos_r, b))
        a_h = combined_pair_metric(lambda b: a_of("human", b))
        a_r = combined_pair_metric(lambda b: a_of("robot", b))

        d_cells = []
        for name in CHANNELS:
            h = works[("human", name, si)]
            r = works[("robot", name, si)]
            d_cells.append(
                0.5
                * (
                    abs(h[0] - r[0]) / (abs(h[0]) + EPS)
                    + abs(h[1] - r[1]) / (abs(h[1]) + EPS)
                )
            )
        d_work = sum(d_cells) / len(d_cells)

        s_robot = 0.5 * si_r + 0.5 * a_r / 10.0
        h_pillar = ((1.0 - r_wav) + d_work / 10.0) / 2.0
        c = 0.5 * s_robot + 0.5 * h_pillar
        table.append(
            {
                "speed_mps": speed,
                "si_robot": si_r,
                "si_human": si_h,
                "a_work_robot": a_r,
                "a_work_human": a_h,
                "s_robot": s_robot,
                "r_wav": r_wav,
                "d_work": d_work,
                "h": h_pillar,
                "c": c,
            }
        )

    return {
        "channels": CHANNELS,
        "speeds_mps": SPEEDS,
        "heatmaps": heatmaps,
        "si_distribution": si_rows,
        "work_curves": work_rows,
        "gdaf_table": table,
    }


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    rng = np.random.default_rng(42)
    human = make_entity("human", rng)
    robot = make_entity("robot", rng)

    for entity, grids in (("human", human), ("robot", robot)):
        doc = entity_document(entity, *grids)
        path = os.path.join(OUT_DIR, f"fixture_{entity}.gaitset.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
            fh.write("\n")
        print(f"wrote {path}")

    expected = expected_results(human, robot)
    path = os.path.join(OUT_DIR, "expected_analysis.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(expected, fh)
        fh.write("\n")
    print(f"wrote {path}")
    for row in expected["gdaf_table"]:
        print(
            f"  speed {row['speed_mps']:4.2f}: C={row['c']:.4f} "
            f"(S={row['s_robot']:.4f}, H={row['h']:.4f})"
        )


if __name__ == "__main__":
    main()
