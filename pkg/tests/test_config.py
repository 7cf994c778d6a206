import math
from dataclasses import fields, replace

import pytest

from wsnqos.config import (
    _SCALAR_KEYS,
    ConfigError,
    ScenarioConfig,
    dumps_config,
    load_config,
    parse_config,
)


class TestDefaults:
    def test_empty_text_yields_reference_defaults(self):
        cfg = parse_config("")
        assert cfg == ScenarioConfig()
        assert cfg.grid_width == 1000.0 and cfg.grid_height == 1000.0
        assert cfg.e_elec_nj == 50.0
        assert cfg.eps_fs_pj == 10.0
        assert cfg.eps_amp_pj == 0.0013
        assert cfg.packet_bits == 100
        assert cfg.initial_energy == 2.0
        assert (cfg.alpha, cfg.beta, cfg.gamma) == (0.6, 0.3, 0.1)

    def test_sink_defaults_to_grid_center(self):
        cfg = parse_config("grid.width = 400\ngrid.height = 200\n")
        assert (cfg.sink_x, cfg.sink_y) == (200.0, 100.0)

    def test_radio_range_defaults_to_crossover_distance(self):
        cfg = ScenarioConfig()
        assert cfg.radio_range == pytest.approx(math.sqrt(10.0 / 0.0013))

    def test_comments_and_blank_lines_ignored(self):
        cfg = parse_config("\n# a comment\nseed = 9  # trailing\n\n")
        assert cfg.seed == 9


class TestParsing:
    def test_negative_alpha_rejected(self):
        with pytest.raises(ConfigError) as err:
            parse_config("alpha = -1\n")
        assert "alpha" in str(err.value)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as err:
            parse_config("alhpa = 0.5\n")
        assert "alhpa" in str(err.value)

    def test_malformed_line_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("just words\n")

    def test_non_numeric_value_names_the_key(self):
        with pytest.raises(ConfigError) as err:
            parse_config("duration = fast\n")
        assert "duration" in str(err.value)

    def test_positions(self):
        cfg = parse_config("node_count = 3\nposition.1 = 10, 20\nposition.2 = 30,40\n")
        assert cfg.positions == {1: (10.0, 20.0), 2: (30.0, 40.0)}

    def test_position_for_sink_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("position.0 = 1,2\n")

    def test_position_out_of_grid_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("node_count = 2\nposition.1 = 2000,50\n")

    def test_position_id_out_of_range(self):
        with pytest.raises(ConfigError):
            parse_config("node_count = 3\nposition.7 = 10,10\n")

    def test_link_loss_overrides(self):
        cfg = parse_config("node_count = 3\nloss = 0.1\nloss.1.2 = 0.5\n")
        assert cfg.loss_for(1, 2) == 0.5
        assert cfg.loss_for(2, 1) == 0.1

    def test_loss_out_of_range(self):
        with pytest.raises(ConfigError):
            parse_config("loss = 1.5\n")
        with pytest.raises(ConfigError):
            parse_config("node_count = 3\nloss.1.2 = -0.1\n")

    def test_sources(self):
        assert parse_config("sources = all\n").sources is None
        cfg = parse_config("node_count = 5\nsources = 2, 4\n")
        assert cfg.sources == (2, 4)
        assert cfg.source_ids() == [2, 4]
        with pytest.raises(ConfigError):
            parse_config("node_count = 3\nsources = 9\n")

    def test_booleans(self):
        assert parse_config("predictive_drop = FALSE\n").predictive_drop is False
        with pytest.raises(ConfigError):
            parse_config("predictive_drop = yes\n")

    def test_node_count_minimum(self):
        with pytest.raises(ConfigError):
            parse_config("node_count = 1\n")


class TestRoundTrip:
    def test_default_config_round_trips(self):
        cfg = ScenarioConfig()
        assert parse_config(dumps_config(cfg)) == cfg

    def test_customized_config_round_trips(self):
        cfg = ScenarioConfig(
            node_count=5,
            positions={1: (10.0, 20.0), 3: (333.25, 7.5)},
            link_loss={(1, 2): 0.25, (4, 0): 0.125},
            sources=(1, 3),
            loss=0.05,
            predictive_drop=False,
            seed=123456789,
            duration=42.5,
        )
        text = dumps_config(cfg)
        assert parse_config(text) == cfg
        # serializing again is a fixed point
        assert dumps_config(parse_config(text)) == text

    def test_key_table_covers_every_scalar_field(self):
        mapped = {attr for attr, _ in _SCALAR_KEYS.values()}
        declared = {f.name for f in fields(ScenarioConfig)} - {"positions", "link_loss"}
        assert mapped == declared


class TestLoadConfig:
    def test_load_from_file(self, tmp_path):
        path = tmp_path / "scenario.txt"
        path.write_text("seed = 42\nduration = 7\n")
        cfg = load_config(str(path))
        assert cfg.seed == 42 and cfg.duration == 7.0
        assert load_config(str(path)) == cfg

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_config(str(tmp_path / "nope.txt"))


class TestHelpers:
    def test_radio_params_in_si_units(self):
        radio = ScenarioConfig().radio_params()
        assert radio.e_elec == pytest.approx(50e-9)
        assert radio.eps_fs == pytest.approx(10e-12)
        assert radio.eps_amp == pytest.approx(0.0013e-12)

    def test_replace_revalidates(self):
        cfg = ScenarioConfig()
        with pytest.raises(ConfigError):
            replace(cfg, alpha=-2.0)
