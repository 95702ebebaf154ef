"""Tests for scenario presets, config loading and round-trip serialization."""

import math

import pytest

from crancost.config import (
    default_scenario,
    load_scenario,
    save_scenario,
    scenario_hash,
    scenario_to_config,
)
from crancost.costs import Architecture
from crancost.errors import ConfigError


class TestDefaultScenario:
    def test_preset_geometry(self):
        scen = default_scenario()
        assert scen.lambda_0 == 170.0
        assert scen.lambda_2 == pytest.approx(5.0)
        assert scen.sigma**2 == pytest.approx(0.5)
        assert scen.p_mw == 0.5
        assert scen.lambda_3 == 3.0

    def test_preset_costs(self):
        scen = default_scenario(architecture=Architecture.DRAN)
        assert scen.equipment.c_macro == 50000.0
        assert scen.equipment.c_micro == 20000.0
        assert scen.equipment.c_mw == 50000.0
        assert scen.equipment.c_of == 5000.0
        assert scen.links.user_bs.a == 5000.0
        assert scen.links.user_bs.beta == 4.0
        assert scen.links.bs_backhaul_of.b == 100000.0

    def test_offset_selects_intensity_and_processing(self):
        by_offset = {g: default_scenario(gamma_offset_db=g) for g in (0.0, 0.4, 0.9)}
        assert by_offset[0.0].lambda_1 == pytest.approx(50.03, abs=0.5)
        assert by_offset[0.4].lambda_1 == pytest.approx(51.2, abs=0.5)
        assert by_offset[0.9].lambda_1 == pytest.approx(52.8, abs=0.5)
        # processing cost falls as the offset grows (cheaper decoding)
        bases = [by_offset[g].links.processing_base for g in (0.0, 0.4, 0.9)]
        assert bases[0] > bases[1] > bases[2]
        assert bases[0] == pytest.approx(653.54, abs=1.0)

    def test_dran_runs_at_zero_offset_with_higher_processing(self):
        dran = default_scenario(architecture=Architecture.DRAN, gamma_offset_db=0.9)
        assert dran.gamma_offset_db == 0.0
        cloud = default_scenario(architecture=Architecture.CLOUD_RAN)
        assert dran.links.processing_base > cloud.links.processing_base


class TestLoadScenario:
    def test_empty_config_gives_the_preset(self):
        scen = load_scenario(text="")
        assert scen == default_scenario()

    def test_out_of_range_probability_names_the_key(self):
        with pytest.raises(ConfigError, match="'p'"):
            load_scenario(text="[geometry]\np = 1.5\n")

    def test_non_numeric_value_names_the_key(self):
        with pytest.raises(ConfigError, match="lambda3"):
            load_scenario(text="[geometry]\nlambda3 = plenty\n")

    def test_architecture_selection(self):
        scen = load_scenario(text="[architecture]\nmode = dran\n")
        assert scen.architecture is Architecture.DRAN
        assert scen.c_dc_effective == 0.0

    def test_unknown_architecture_rejected(self):
        with pytest.raises(ConfigError, match="mode"):
            load_scenario(text="[architecture]\nmode = hybrid\n")

    def test_unsupported_offset_rejected(self):
        with pytest.raises(ConfigError, match="gamma_offset_db"):
            load_scenario(text="[architecture]\ngamma_offset_db = 0.7\n")

    def test_geometry_overrides_apply(self):
        scen = load_scenario(
            text="[geometry]\nlambda3 = 1.5\nsigma2 = 1.0\np = 0.25\nlambda1c = 12.0\n"
        )
        assert scen.lambda_3 == 1.5
        assert scen.sigma == pytest.approx(1.0)
        assert scen.p_mw == 0.25
        assert scen.lambda_1c == 12.0

    def test_lambda0_override_redimensions_stations(self):
        scen = load_scenario(text="[geometry]\nlambda0 = 300\n")
        assert scen.lambda_1 == pytest.approx(88.2, abs=1.0)
        # processing base stays finite and per-user
        assert 0 < scen.links.processing_base < 2000

    def test_cost_overrides_apply(self):
        scen = load_scenario(text="[costs]\nc_macro = 60000\nb12_of = 90000\na23_processing = 500\n")
        assert scen.equipment.c_macro == 60000.0
        assert scen.links.bs_backhaul_of.b == 90000.0
        assert scen.links.processing_base == 500.0

    def test_alpha_range_checked(self):
        with pytest.raises(ConfigError, match="alpha"):
            load_scenario(text="[costs]\nalpha = 1.4\n")

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="preset"):
            load_scenario(text="", preset="fielded-2019")

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_scenario("/nonexistent/scenario.ini")

    def test_simulation_flags(self):
        scen = load_scenario(text="[simulation]\nuser_bs_distance = palm\nc2_convention = normalized\n")
        assert scen.user_bs_distance == "palm"
        assert scen.c2_convention == "normalized"


class TestRadioSection:
    def test_named_preset(self):
        from crancost.config import load_radio_params

        radio = load_radio_params(text="[radio]\npreset = paper-lte-10mhz\n")
        assert radio.ptx_dbm == 46.0
        assert radio.noise_dbm == -146.22

    def test_unknown_preset_rejected(self):
        from crancost.config import load_radio_params

        with pytest.raises(ConfigError, match="preset"):
            load_radio_params(text="[radio]\npreset = paper-lte-40mhz\n")

    def test_overrides_change_dimensioning(self):
        # in the asymptotic regime the link budget cancels, so leaving it
        # takes a drastically weak budget; there lambda_1 must shift
        scen_default = load_scenario(text="")
        scen_weak = load_scenario(text="[radio]\nptx_dbm = 0\nnoise_dbm = 40\n")
        assert scen_weak.lambda_1c != pytest.approx(scen_default.lambda_1c, rel=1e-6)


class TestComplexitySection:
    def test_defaults(self):
        from crancost.config import load_complexity_settings

        settings = load_complexity_settings(text="")
        assert settings.decoder.zeta == 6.0
        assert settings.eps_comp == 0.1
        assert settings.sampler_name == "nearest_bs"

    def test_sampler_spec_from_config(self):
        from crancost.config import load_complexity_settings

        settings = load_complexity_settings(
            text="[complexity]\nsampler = lognormal\nsampler_median_db = 15\nsampler_sigma_db = 4\n"
                 "eps_comp = 0.05\nzeta = 8\n"
        )
        assert settings.decoder.zeta == 8.0
        assert settings.eps_comp == 0.05
        sampler = settings.make_sampler()
        assert sampler.median_db == 15.0
        assert sampler.sigma_db == 4.0


class TestSweepSection:
    def test_absent_returns_none(self):
        from crancost.config import load_sweep_section

        assert load_sweep_section(text="") is None

    def test_parsed_fields(self):
        from crancost.config import load_sweep_section

        axis, values, archs = load_sweep_section(
            text="[sweep]\naxis = lambda3\nvalues = 1 2 3\narchitectures = dran,cloud_ran@0db\n"
        )
        assert axis == "lambda3"
        assert values == (1.0, 2.0, 3.0)
        assert archs == ("dran", "cloud_ran@0db")

    def test_incomplete_section_rejected(self):
        from crancost.config import load_sweep_section

        with pytest.raises(ConfigError):
            load_sweep_section(text="[sweep]\naxis = lambda3\n")


class TestRoundTrip:
    def test_load_emit_load_reproduces_the_scenario(self, tmp_path):
        scen = default_scenario(architecture=Architecture.CLOUD_RAN, gamma_offset_db=0.4)
        path = tmp_path / "scenario.ini"
        save_scenario(scen, path)
        again = load_scenario(path)
        assert again == scen

    def test_roundtrip_preserves_overrides(self, tmp_path):
        scen = load_scenario(text="[geometry]\nlambda3 = 2.25\np = 0.125\n[costs]\nc_of = 4321\n")
        path = tmp_path / "scenario.ini"
        save_scenario(scen, path)
        assert load_scenario(path) == scen

    def test_hash_stability(self):
        a = scenario_hash(default_scenario())
        b = scenario_hash(default_scenario())
        c = scenario_hash(default_scenario(gamma_offset_db=0.4))
        assert a == b
        assert a != c

    def test_config_text_is_sectioned(self):
        text = scenario_to_config(default_scenario())
        for section in ("[architecture]", "[geometry]", "[costs]", "[simulation]"):
            assert section in text
