import pytest

from gridwar.configio import (
    ConfigError,
    dump_world_config,
    parse_ea_config,
    parse_world_config,
)
from gridwar.world import WorldConfig


class TestWorldConfigFile:
    def test_parse_all_fields(self):
        text = """
        # world settings
        visual_range_phi = 6.5
        max_health = 120
        max_energy = 900
        semi_impassable_energy_cost = 2
        combat_damage = 3
        max_turns = 1500
        combat_damage_stat = energy
        flag_visibility = unit
        nav.stall_threshold = 4
        nav.pheromone_weight = 0.2
        nav.guard_radius = 5
        """
        cfg = parse_world_config(text)
        assert cfg.visual_range_phi == 6.5
        assert cfg.max_health == 120
        assert cfg.combat_damage_stat == "energy"
        assert cfg.flag_visibility == "unit"
        assert cfg.nav.stall_threshold == 4
        assert cfg.nav.pheromone_weight == 0.2
        assert cfg.nav.guard_radius == 5

    def test_defaults_on_empty(self):
        assert parse_world_config("") == WorldConfig()

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_world_config("gravity = 9.8")

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            parse_world_config("max_turns = soon")

    def test_bad_syntax(self):
        with pytest.raises(ConfigError):
            parse_world_config("max_turns: 100")

    def test_dump_parses_back(self):
        cfg = WorldConfig(visual_range_phi=4.0, max_turns=777)
        assert parse_world_config(dump_world_config(cfg)) == cfg


class TestEAConfigFile:
    def test_parse(self):
        cfg = parse_ea_config("popsize = 10\np_x = 0.5\np_m = 0.02\nmax_generations = 7\n")
        assert (cfg.popsize, cfg.p_x, cfg.p_m, cfg.max_generations) == (10, 0.5, 0.02, 7)

    def test_seed_override(self):
        cfg = parse_ea_config("popsize = 4\nseed = 1\n", seed=99)
        assert cfg.seed == 99

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigError):
            parse_ea_config("popsize = 1")
