import numpy as np
import pytest

from ommsim import model
from ommsim.config import parse_config, serialize_config
from ommsim.errors import ConfigError
from ommsim.model import TWO_PI, DetuningConvention
from ommsim.sweep import SweepSpec

MINIMAL_MODES = """\
[modes]
omega_a_over_2pi = 370 THz
omega_b_over_2pi = 10 MHz
omega_A1_over_2pi = 10 GHz
omega_m1_over_2pi = 10 GHz
omega_A2_over_2pi = 10 GHz
omega_m2_over_2pi = 10 GHz
kappa_a = 0.4 omega_b
kappa_b_over_2pi = 100 Hz
kappa_A1 = 0.1 omega_b
kappa_m1 = 0.1 omega_b
kappa_A2 = 0.1 omega_b
kappa_m2 = 0.1 omega_b
"""


class TestUnits:
    def test_over_2pi_key(self):
        cfg = parse_config(MINIMAL_MODES)
        assert cfg.modes["b"].eigenfrequency == pytest.approx(
            TWO_PI * 10e6, rel=1e-15)

    def test_plain_hz_family_is_cyclic(self):
        text = MINIMAL_MODES.replace(
            "omega_b_over_2pi = 10 MHz", "omega_b = 10 MHz")
        cfg = parse_config(text)
        assert cfg.modes["b"].eigenfrequency == pytest.approx(
            TWO_PI * 10e6, rel=1e-15)

    def test_rad_s_is_verbatim(self):
        text = MINIMAL_MODES + "[couplings]\ng_A1b = 0.25 rad/s\n"
        cfg = parse_config(text)
        assert cfg.couplings.g_A1b == 0.25

    def test_relative_unit_resolution(self):
        cfg = parse_config(MINIMAL_MODES)
        assert cfg.modes["a"].decay == pytest.approx(
            0.4 * cfg.modes["b"].eigenfrequency, rel=1e-15)

    def test_chained_references(self):
        text = MINIMAL_MODES + "[couplings]\ng_ab = 1.2 kappa_b\n"
        cfg = parse_config(text)
        assert cfg.couplings.g_ab == pytest.approx(
            1.2 * TWO_PI * 100.0, rel=1e-15)

    def test_bias_field_unit_for_magnon(self):
        text = MINIMAL_MODES.replace(
            "omega_m1_over_2pi = 10 GHz", "omega_m1 = 0.357142857142857 T")
        cfg = parse_config(text)
        assert cfg.modes["m1"].eigenfrequency == pytest.approx(
            TWO_PI * 10e9, rel=1e-12)

    def test_bias_field_rejected_elsewhere(self):
        text = MINIMAL_MODES.replace(
            "omega_b_over_2pi = 10 MHz", "omega_b = 1 T")
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_temperature_units(self):
        text = MINIMAL_MODES + "[environment]\ntemperature = 10 mK\n"
        assert parse_config(text).temperature == pytest.approx(0.010)

    def test_default_markers(self):
        text = MINIMAL_MODES.replace(
            "omega_a_over_2pi = 370 THz", "omega_a = default")
        text += "[environment]\ntemperature = default\n"
        cfg = parse_config(text)
        assert cfg.modes["a"].eigenfrequency == TWO_PI * 370e12
        assert cfg.temperature == 0.010


class TestErrors:
    def test_unknown_key_reports_line(self):
        text = MINIMAL_MODES + "[drives]\nrabi_q = 1 Hz\n"
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert err.value.line == 15
        assert "rabi_q" in str(err.value)

    def test_missing_unit(self):
        text = MINIMAL_MODES + "[drives]\nrabi_a = 1.43e12\n"
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert "unit" in str(err.value)

    def test_unknown_section(self):
        with pytest.raises(ConfigError):
            parse_config("[magnets]\nfoo = 1 Hz\n")

    def test_duplicate_key_across_spellings(self):
        text = MINIMAL_MODES + "omega_b = 10 MHz\n"
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_circular_reference(self):
        text = MINIMAL_MODES.replace(
            "kappa_a = 0.4 omega_b", "kappa_a = 0.4 kappa_A1"
        ).replace("kappa_A1 = 0.1 omega_b", "kappa_A1 = 2 kappa_a")
        with pytest.raises(ConfigError) as err:
            parse_config(text)
        assert "circular" in str(err.value)

    def test_missing_modes(self):
        with pytest.raises(ConfigError):
            parse_config("[modes]\nomega_a_over_2pi = 370 THz\n")

    def test_bad_convention(self):
        text = MINIMAL_MODES + "[drives]\ndetuning_convention = sideways\n"
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_malformed_line(self):
        with pytest.raises(ConfigError) as err:
            parse_config("[modes]\nomega_a 370 THz\n")
        assert err.value.line == 2


class TestSemantics:
    def test_empty_drives_is_undriven(self):
        cfg = parse_config(MINIMAL_MODES + "[drives]\n")
        assert cfg.optical_drive.rabi == 0.0
        assert cfg.mw_drive_1.rabi == 0.0
        assert cfg.mw_drive_2.rabi == 0.0

    def test_missing_drives_section_is_undriven(self):
        cfg = parse_config(MINIMAL_MODES)
        assert cfg.optical_drive.rabi == 0.0
        assert cfg.detuning_convention is DetuningConvention.EFFECTIVE

    def test_negative_relative_value(self):
        text = MINIMAL_MODES + "[drives]\ndetuning_m1 = -0.5 omega_b\n"
        cfg = parse_config(text)
        assert cfg.mw_drive_1.magnon_detuning == pytest.approx(
            -0.5 * TWO_PI * 10e6)

    def test_sweep_section_produces_spec(self):
        text = MINIMAL_MODES + (
            "[sweep]\npairs = m1:m2, a:b\n"
            "axis1 = drives.detuning_a\n"
            "axis1_start = 0 Hz\naxis1_stop = 2 omega_b\naxis1_count = 11\n"
        )
        spec = parse_config(text)
        assert isinstance(spec, SweepSpec)
        assert spec.pairs == (("m1", "m2"), ("a", "b"))
        assert spec.axes[0].count == 11
        assert spec.axes[0].stop == pytest.approx(2 * TWO_PI * 10e6)

    def test_linked_axis_targets(self):
        text = MINIMAL_MODES + (
            "[sweep]\npairs = m1:m2\n"
            "axis1 = drives.detuning_m1, drives.detuning_m2\n"
            "axis1_start = -1 omega_b\naxis1_stop = 1 omega_b\n"
            "axis1_count = 5\n"
        )
        spec = parse_config(text)
        assert spec.axes[0].targets == (
            "drives.detuning_m1", "drives.detuning_m2")

    def test_axis_fields_require_axis(self):
        text = MINIMAL_MODES + (
            "[sweep]\npairs = m1:m2\n"
            "axis1 = drives.detuning_a\n"
            "axis1_start = 0 Hz\naxis1_stop = 1 omega_b\naxis1_count = 5\n"
            "axis2_count = 7\n"
        )
        with pytest.raises(ConfigError):
            parse_config(text)


class TestRoundTrip:
    def test_config_round_trip(self):
        text = MINIMAL_MODES + (
            "[drives]\ndetuning_convention = effective\n"
            "rabi_a = 1.43e12 rad/s\ndetuning_a = 1 omega_b\n"
            "[couplings]\ng_ab = 1.2 kappa_b\ng_1_over_2pi = 1.7 MHz\n"
            "[environment]\ntemperature = 10 mK\n"
        )
        cfg = parse_config(text)
        again = parse_config(serialize_config(cfg))
        assert again == cfg

    def test_sweep_round_trip(self):
        text = MINIMAL_MODES + (
            "[sweep]\npairs = m1:m2\n"
            "axis1 = temperature\n"
            "axis1_start = 0 mK\naxis1_stop = 160 mK\naxis1_count = 17\n"
        )
        spec = parse_config(text)
        again = parse_config(serialize_config(spec))
        assert again == spec

    def test_all_presets_round_trip(self):
        from ommsim.reproduce import PRESETS, SWEEP_PRESETS, preset_text
        for name in SWEEP_PRESETS + ("default",):
            obj = parse_config(preset_text(name))
            again = parse_config(serialize_config(obj))
            assert again == obj, name
