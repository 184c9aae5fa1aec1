"""Config schema validation: strictness, units, full error lists."""

from __future__ import annotations

import math
import textwrap

import pytest

from loopgrasp.config import load_config
from loopgrasp.errors import ConfigError

CAPSTAN_OK = """
hold_force: "27.2 kgf"
mu: 0.2
wrap_angle: "16 rad"
"""


def write(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return path


class TestSchemaStrictness:
    def test_minimal_capstan_config(self, tmp_path):
        cfg = load_config(write(tmp_path, CAPSTAN_OK), "capstan")
        assert cfg.parsed["hold_force"] == pytest.approx(27.2 * 9.80665)
        assert cfg.parsed["wrap_angle"] == 16.0

    def test_unknown_key_rejected(self, tmp_path):
        path = write(tmp_path, CAPSTAN_OK + "\nfriction_boost: 2\n")
        with pytest.raises(ConfigError, match="friction_boost: unknown key"):
            load_config(path, "capstan")

    def test_unitless_quantity_rejected(self, tmp_path):
        path = write(tmp_path, """
            hold_force: 27.2
            mu: 0.2
            wrap_angle: "16 rad"
        """)
        with pytest.raises(ConfigError, match="explicit units"):
            load_config(path, "capstan")

    def test_all_errors_reported_together(self, tmp_path):
        path = write(tmp_path, """
            hold_force: 27.2
            wrap_angle: "16 parsecs"
            extra: true
        """)
        with pytest.raises(ConfigError) as err:
            load_config(path, "capstan")
        text = "\n".join(err.value.problems)
        assert "hold_force" in text       # unit-less
        assert "wrap_angle" in text       # unknown unit
        assert "extra" in text            # unknown key
        assert "mu" in text               # missing required
        assert len(err.value.problems) >= 4

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.yaml", "capstan")

    def test_non_mapping_root(self, tmp_path):
        with pytest.raises(ConfigError, match="mapping"):
            load_config(write(tmp_path, "- 1\n- 2\n"), "capstan")


class TestClampConfig:
    def test_uniform_defaults_entry_exit_bends(self, tmp_path):
        path = write(tmp_path, """
            mu: 0.49
            clamp_force: "299.4 kgf"
            n_curves: 8
            theta_c: "90 deg"
        """)
        cfg = load_config(path, "clamp")
        from loopgrasp.config import clamp_args_from_config

        kind, spec = clamp_args_from_config(cfg.parsed)
        assert kind == "uniform"
        assert spec.phi_entry == pytest.approx(math.pi / 4)

    def test_uniform_and_nonuniform_exclusive(self, tmp_path):
        path = write(tmp_path, """
            mu: 0.4
            clamp_force: "50 N"
            n_curves: 3
            theta_c: "60 deg"
            curve_angles: ["45 deg"]
        """)
        with pytest.raises(ConfigError, match="mutually exclusive"):
            load_config(path, "clamp")

    def test_either_parameterization_required(self, tmp_path):
        path = write(tmp_path, """
            mu: 0.4
            clamp_force: "50 N"
        """)
        with pytest.raises(ConfigError, match="n_curves"):
            load_config(path, "clamp")


class TestSimulateConfig:
    def test_mode_selects_scene_schema(self, tmp_path):
        path = write(tmp_path, """
            mode: open_loop_hold
            scene:
              pull_force: "30 N"
              tip_angle: "-60 deg"
        """)
        cfg = load_config(path, "simulate")
        assert cfg.parsed["scene"]["pull_force"] == 30.0
        assert cfg.parsed["scene"]["object_distance"] == 1.0  # default

    def test_closed_loop_keys_invalid_in_open_mode(self, tmp_path):
        path = write(tmp_path, """
            mode: open_loop_hold
            scene:
              loop_radius: "0.5 m"
        """)
        with pytest.raises(ConfigError, match="loop_radius: unknown key"):
            load_config(path, "simulate")

    def test_bad_mode(self, tmp_path):
        path = write(tmp_path, "mode: wiggle\n")
        with pytest.raises(ConfigError, match="must be one of"):
            load_config(path, "simulate")

    def test_defaults_fill_in(self, tmp_path):
        cfg = load_config(write(tmp_path, "mode: closed_loop\n"), "simulate")
        assert cfg.parsed["rod"]["n_nodes"] == 200
        assert cfg.parsed["scene"]["object_radius"] == 0.45
        assert cfg.parsed["solver"]["tol"] is None


class TestCapacityConfig:
    def test_shipped_large_scale_config(self):
        cfg = load_config("configs/large_scale.yaml", "capacity")
        assert cfg.parsed["base_winch"]["max_radius"] == pytest.approx(0.0603)
        assert cfg.parsed["membrane"]["strength_per_width"] == pytest.approx(1.31e7)

    def test_membrane_parameterization_checked(self, tmp_path):
        path = write(tmp_path, """
            membrane:
              flattened_width: "100 mm"
              load_layers: 2
            base_fastening: {hold_force: "1 N", mu: 0.2, wrap_angle: "1 rad"}
            base_winch: &w
              stall_torque: "1 N*m"
              gear_ratio: 10
              core_radius: "10 mm"
              max_radius: "20 mm"
              material_thickness: "1 mm"
            tip_clamp: {mu: 0.4, clamp_force: "1 N", n_curves: 2, theta_c: "90 deg"}
            tip_winch: *w
        """)
        with pytest.raises(ConfigError, match="membrane"):
            load_config(path, "capacity")


class TestTopologyConfig:
    def test_inline_vertices(self, tmp_path):
        path = write(tmp_path, """
            path:
              tip_grounded: true
              vertices: [[1, 0], [0, 1], [-1, 0], [0, -1]]
            object:
              kind: disk
              center: [0, 0]
              radius: "0.2 m"
        """)
        cfg = load_config(path, "topology")
        assert cfg.parsed["path"]["vertices"].shape == (4, 2)

    def test_vertices_source_exclusive(self, tmp_path):
        path = write(tmp_path, """
            path:
              tip_grounded: true
              vertices: [[1, 0], [0, 1], [-1, 0]]
              vertices_csv: "also.csv"
            object:
              kind: disk
              center: [0, 0]
              radius: "0.2 m"
        """)
        with pytest.raises(ConfigError, match="exactly one"):
            load_config(path, "topology")

    def test_disk_needs_center_and_radius(self, tmp_path):
        path = write(tmp_path, """
            path:
              tip_grounded: true
              vertices: [[1, 0], [0, 1], [-1, 0]]
            object:
              kind: disk
        """)
        with pytest.raises(ConfigError, match="disk needs center and radius"):
            load_config(path, "topology")
