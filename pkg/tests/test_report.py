import dataclasses
import json
from pathlib import Path

import numpy as np
import pytest

from gdaf.config import RunConfig
from gdaf.errors import ConfigError, MissingChannelError, NoCommonSpeedsError
from gdaf.io import load_gaitset
from gdaf.report import (
    GDAF_TABLE_COLUMNS,
    build_report,
    common_speeds,
    format_table_i,
    read_gdaf_table,
    write_bundle,
)

from conftest import make_full_gaitset, make_mirrored_gaitset

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def fixture_pair():
    return (
        load_gaitset(DATA / "fixture_human.gaitset.json"),
        load_gaitset(DATA / "fixture_robot.gaitset.json"),
    )


@pytest.fixture(scope="module")
def expected():
    return json.loads((DATA / "expected_analysis.json").read_text(encoding="utf-8"))


def tree_bytes(root: Path) -> dict:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


class TestCommonSpeeds:
    def test_rounding_tolerance(self, rng):
        gs_h = make_full_gaitset(rng, speeds=(0.5, 1.0000000001))
        gs_r = make_full_gaitset(rng, entity="robot", speeds=(1.0, 1.5))
        assert common_speeds(gs_h, gs_r) == [1.0000000001]

    def test_disjoint_grids(self, rng):
        gs_h = make_full_gaitset(rng, speeds=(0.5,))
        gs_r = make_full_gaitset(rng, entity="robot", speeds=(1.5,))
        with pytest.raises(NoCommonSpeedsError):
            common_speeds(gs_h, gs_r)


class TestBuildReport:
    def test_self_comparison_collapse(self, rng):
        gs = make_full_gaitset(rng, speeds=(0.9, 1.1), n_samples=41)
        bundle = build_report(gs, gs)
        for table in bundle.heatmaps.values():
            assert table.defined.all()
            assert np.all(table.values == 1.0)
        for row in bundle.gdaf_table:
            assert row.d_work == 0.0
            assert row.h == 0.0
            assert row.c == 0.5 * row.s_robot

    def test_mirrored_identical_entities_zero_cost(self, rng):
        gs = make_mirrored_gaitset(rng)
        robot = dataclasses.replace(gs, entity="robot")
        bundle = build_report(gs, robot)
        for row in bundle.gdaf_table:
            assert row.si_robot == 0.0
            assert row.a_work_robot == 0.0
            assert row.s_robot == 0.0
            assert row.h == 0.0
            assert row.c == 0.0

    def test_fixture_pair_matches_oracle(self, fixture_pair, expected):
        gs_h, gs_r = fixture_pair
        bundle = build_report(gs_h, gs_r)
        for label in ("angle", "moment", "power"):
            got = bundle.heatmaps[label].values
            want = np.array(expected["heatmaps"][label])
            assert np.abs(got - want).max() < 1e-9
        got_si = {(p, e, s): v for p, e, s, v in bundle.si_distribution}
        for p, e, s, v in expected["si_distribution"]:
            assert got_si[(p, e, s)] == pytest.approx(v, abs=1e-9)
        got_work = {(c, e, s): (wp, wm) for c, e, s, wp, wm in bundle.work_curves}
        for c, e, s, wp, wm in expected["work_curves"]:
            assert got_work[(c, e, s)][0] == pytest.approx(wp, abs=1e-9)
            assert got_work[(c, e, s)][1] == pytest.approx(wm, abs=1e-9)
        for row, want in zip(bundle.gdaf_table, expected["gdaf_table"]):
            for key, val in want.items():
                assert getattr(row, key) == pytest.approx(val, abs=1e-9), key

    def test_unresolvable_pair_set(self, rng):
        gs_h = make_full_gaitset(rng)
        gs_r = make_full_gaitset(rng, entity="robot")
        config = RunConfig(pair_set=("knee", "elbow"))
        with pytest.raises(ConfigError):
            build_report(gs_h, gs_r, config)

    def test_no_shared_channels(self, rng):
        from conftest import make_gaitset

        gs_h = make_gaitset(rng, channel_names=("knee_l", "knee_r"))
        gs_r = make_gaitset(rng, entity="robot", channel_names=("ankle_l", "ankle_r"))
        with pytest.raises(MissingChannelError):
            build_report(gs_h, gs_r, RunConfig(pair_set=("knee",)))

    def test_unit_duration_mode_flags_manifest(self, fixture_pair):
        gs_h, gs_r = fixture_pair
        bundle = build_report(gs_h, gs_r, RunConfig(duration_mode="unit"))
        assert bundle.manifest["flags"]["unit_duration_assumption"] is True
        default_bundle = build_report(gs_h, gs_r)
        assert default_bundle.manifest["flags"]["unit_duration_assumption"] is False
        # unit-duration works differ from data-duration works
        assert bundle.work_curves[0][3] != default_bundle.work_curves[0][3]

    def test_loops_cover_configured_joints(self, fixture_pair):
        gs_h, gs_r = fixture_pair
        bundle = build_report(gs_h, gs_r)
        entities = {key[0] for key in bundle.loops}
        joints = {key[1] for key in bundle.loops}
        assert entities == {"human", "robot"}
        assert joints == set(RunConfig().loop_joints)
        n = gs_h.n_samples
        for pts in bundle.loops.values():
            assert pts.shape == (n + 1, 2)

    def test_manifest_echoes_config(self, fixture_pair):
        gs_h, gs_r = fixture_pair
        config = RunConfig(eps=1e-6, pair_set=("knee", "ankle"))
        bundle = build_report(gs_h, gs_r, config)
        assert bundle.manifest["config"]["eps"] == 1e-6
        assert bundle.manifest["config"]["pair_set"] == ["knee", "ankle"]


class TestWriteBundle:
    def test_two_runs_are_byte_identical(self, tmp_path, fixture_pair):
        gs_h, gs_r = fixture_pair
        meta = {"human": {"path": "h"}, "robot": {"path": "r"}}
        dirs = []
        for name in ("run1", "run2"):
            out = tmp_path / name
            bundle = build_report(gs_h, gs_r, input_meta=meta)
            write_bundle(bundle, out)
            dirs.append(out)
        t1, t2 = tree_bytes(dirs[0]), tree_bytes(dirs[1])
        assert list(t1) == list(t2)
        assert t1 == t2

    def test_layout(self, tmp_path, fixture_pair):
        gs_h, gs_r = fixture_pair
        out = tmp_path / "bundle"
        write_bundle(build_report(gs_h, gs_r), out)
        names = set(tree_bytes(out))
        assert {
            "manifest.json",
            "similarity_angle.csv",
            "similarity_moment.csv",
            "similarity_power.csv",
            "si_distribution.csv",
            "work_curves.csv",
            "gdaf_table.csv",
        } <= names
        assert any(n.startswith("loops/") for n in names)
        assert "loops/human_knee_l_0.5.csv" in names

    def test_emitted_table_satisfies_identities_exactly(self, tmp_path, fixture_pair):
        gs_h, gs_r = fixture_pair
        out = tmp_path / "bundle"
        write_bundle(build_report(gs_h, gs_r), out)
        rows = read_gdaf_table(out / "gdaf_table.csv")
        assert len(rows) == 5
        for row in rows:
            assert row.s_robot == 0.5 * row.si_robot + 0.5 * row.a_work_robot / 10.0
            assert row.h == ((1.0 - row.r_wav) + row.d_work / 10.0) / 2.0
            assert row.c == 0.5 * row.s_robot + 0.5 * row.h

    def test_written_values_round_trip_exactly(self, tmp_path, fixture_pair):
        gs_h, gs_r = fixture_pair
        bundle = build_report(gs_h, gs_r)
        out = tmp_path / "bundle"
        write_bundle(bundle, out)
        rows = read_gdaf_table(out / "gdaf_table.csv")
        for written, computed in zip(rows, bundle.gdaf_table):
            for col in GDAF_TABLE_COLUMNS:
                assert getattr(written, col) == getattr(computed, col)

    def test_heatmap_csv_structure(self, tmp_path, fixture_pair):
        gs_h, gs_r = fixture_pair
        out = tmp_path / "bundle"
        write_bundle(build_report(gs_h, gs_r), out)
        lines = (out / "similarity_angle.csv").read_text().splitlines()
        assert lines[0].split(",")[0] == "joint"
        assert len(lines) == 1 + 15  # header + channels
        assert len(lines[1].split(",")) == 1 + 5  # joint + speeds


class TestTableRendering:
    def test_table_i_layout(self, fixture_pair):
        gs_h, gs_r = fixture_pair
        bundle = build_report(gs_h, gs_r)
        text = format_table_i(bundle.gdaf_table)
        lines = text.splitlines()
        assert lines[0].startswith("metric")
        row_names = [ln.split()[0] for ln in lines[1:]]
        assert row_names == ["SI", "A_work", "S", "R_wav", "d_work", "H", "C"]
        assert "(" in lines[1]  # human reference in parentheses
