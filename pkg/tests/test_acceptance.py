"""End-to-end acceptance checks.

Each test prints one PASS line (run with `pytest -s` to see them live)
and asserts its stated wall-clock budget.  The heavyweight pipeline
checks run at reduced scale where the behavior, not the duration, is
the contract; scripts/run_full_experiment.py runs the overnight-scale
version of the experiment table.
"""

import hashlib
import io
import itertools
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import MAPS, bfs_path_length, load_fixture_map, open_map
from gridwar import artifacts
from gridwar.engine import (
    ReplayWriter,
    game_outcome,
    matrix_controller,
    matrix_order_driver,
    run_game,
    step_turn,
)
from gridwar.evolution import EAConfig, SimStats, evolve, fitness
from gridwar.mapgen import random_map
from gridwar.modeling import ExtendedAnswerMatrix, extract_policy
from gridwar.personas import PersonaDriver, matrix_persona, persona_policy
from gridwar.pmea import PMEA, RBP, PmeaConfig, run_experiment, run_pmea
from gridwar.strategy import (
    STATE_COUNT,
    Action,
    AnswerMatrix,
    HealthLevel,
    UnitPerception,
    decode_state,
    random_matrix,
    rbp_default,
    state_index,
)
from gridwar.world import Army, WorldConfig, load_map, spawn_game

REPO = Path(__file__).resolve().parent.parent

# the adaptation smoke setup: informative combat (battles resolve in a
# few rounds) and a model accumulated across games
SMOKE_WORLD = WorldConfig(visual_range_phi=5.0, max_turns=350, combat_damage=25)
SMOKE_EA = EAConfig(popsize=12, p_x=0.7, p_m=0.05, max_generations=20)

NOOP = AnswerMatrix(tuple(Action.NO_OPERATION for _ in range(24)))


def report(line: str) -> None:
    print(f"\nACCEPTANCE {line}", flush=True)


class TestCriterion1Encoding:
    def test_state_encoding_bijection(self):
        started = time.perf_counter()
        seen = set()
        for h, a, u, o in itertools.product((0, 1, 2), (0, 1), (0, 1), (0, 1)):
            p = UnitPerception(HealthLevel(h), bool(a), bool(u), bool(o))
            idx = state_index(p)
            # mixed-radix with the boolean digits varying fastest
            assert idx == ((h * 2 + a) * 2 + u) * 2 + o
            assert decode_state(idx) == p
            seen.add(idx)
        assert seen == set(range(STATE_COUNT))
        elapsed = time.perf_counter() - started
        assert elapsed < 1.0
        report(f"1 PASS: encoding bijective over 24 states ({elapsed:.3f}s)")


class TestCriterion2Determinism:
    def test_replay_hashes_stable(self):
        started = time.perf_counter()
        for i in range(10):
            text = random_map(1000 + i, 14, 14, vp_units=4, hp_units=4)
            data = load_map(text)
            cfg = WorldConfig(visual_range_phi=4.0, max_turns=400)
            hashes = []
            for _ in range(2):
                buf = io.StringIO()
                run_game(data, cfg, seed=31 * i + 7,
                         vp_controller=matrix_controller(rbp_default()),
                         hp_driver=matrix_order_driver(rbp_default()),
                         replay=ReplayWriter(buf))
                hashes.append(hashlib.sha256(buf.getvalue().encode()).hexdigest())
            assert hashes[0] == hashes[1], f"map {i} diverged"
        elapsed = time.perf_counter() - started
        assert elapsed < 30.0
        report(f"2 PASS: 10 map/seed pairs, identical replay hashes ({elapsed:.1f}s)")


class TestCriterion3CombatFairness:
    def test_single_pair_fairness(self):
        started = time.perf_counter()
        data = load_map(open_map(10, 10, {(4, 4): "a", (5, 4): "b"}))
        cfg = WorldConfig(max_health=20001, max_turns=10 ** 6)
        state = spawn_game(data, cfg, seed=90210)
        a = next(u for u in state.units if u.pos == (4, 4))
        b = next(u for u in state.units if u.pos == (5, 4))
        controller = matrix_controller(NOOP)
        rounds = 10000
        for _ in range(rounds):
            step_turn(state, [((b.id,), Action.NO_OPERATION)], controller)
        a_losses = cfg.max_health - a.health
        b_losses = cfg.max_health - b.health
        assert a_losses + b_losses == rounds
        assert abs(a_losses / rounds - 0.5) <= 0.02
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0
        report(f"3 PASS: combat fairness {a_losses / rounds:.4f} over 10k rounds "
               f"({elapsed:.1f}s)")


class TestCriterion4Fitness:
    def test_fitness_unit_vectors(self):
        started = time.perf_counter()
        assert fitness(SimStats(10, 2, 4000, 1)) == 20.0
        for x, c, d in ((0, 17, 1), (5, 4000, 2), (12, 1, 1)):
            assert fitness(SimStats(x, x, c, d)) == 0.0
        assert fitness(SimStats(2, 10, 1000, 2)) == -40.0
        elapsed = time.perf_counter() - started
        assert elapsed < 1.0
        report(f"4 PASS: fitness formula exact ({elapsed:.3f}s)")


class TestCriterion5EaBudget:
    def test_canonical_parameters_budget_and_elitism(self):
        started = time.perf_counter()
        data = load_fixture_map("duel20x20.map")
        cfg = WorldConfig(visual_range_phi=5.0, max_turns=1500)
        ea = EAConfig(popsize=50, p_x=0.7, p_m=0.01, max_generations=125, seed=2601)
        result = evolve(rbp_default(), rbp_default(), ea, data, cfg)
        assert result.evaluations == 50 + 2 * 125 == 300
        best = [rec.best_fitness for rec in result.history]
        assert len(best) == 125
        assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
        elapsed = time.perf_counter() - started
        assert elapsed < 600.0
        report(f"5 PASS: exactly 300 evaluations, best fitness non-decreasing "
               f"({elapsed:.0f}s)")


class TestCriterion6ModelRecovery:
    def test_fixed_persona_recovered_exactly(self):
        started = time.perf_counter()
        P = random_matrix(random.Random(61))
        data = load_fixture_map("duel20x20.map")
        cfg = WorldConfig(visual_range_phi=5.0, max_turns=600, combat_damage=20)
        recorder = ExtendedAnswerMatrix()
        driver = PersonaDriver(matrix_persona("fixed", P), 1,
                               random.Random(4), recorder)
        run_game(data, cfg, 1006, matrix_controller(rbp_default()), driver)
        extracted = extract_policy(recorder, rbp_default())
        visited = [i for i in range(STATE_COUNT) if sum(recorder.counts[i]) > 0]
        assert len(visited) >= 4, "expected a reasonable spread of visited states"
        for i in visited:
            assert extracted.cells[i] == P.cells[i]
        elapsed = time.perf_counter() - started
        assert elapsed < 60.0
        report(f"6 PASS: policy recovered exactly on {len(visited)} visited "
               f"states ({elapsed:.1f}s)")


class TestCriterion7PmeaEndToEnd:
    def _cli(self, tmp_path, out_name, rounds, seed=2024):
        out_dir = tmp_path / out_name
        ea = tmp_path / "ea.cfg"
        ea.write_text("popsize = 6\np_x = 0.7\np_m = 0.05\nmax_generations = 4\n")
        world = tmp_path / "world.cfg"
        world.write_text("max_turns = 400\n")
        proc = subprocess.run(
            [sys.executable, "-m", "gridwar", "pmea",
             "--rounds", str(rounds), "--persona", "drifter(2)",
             "--map", str(MAPS / "duel20x20.map"),
             "--config", str(world), "--ea-config", str(ea),
             "--seed", str(seed), "--output-dir", str(out_dir)],
            capture_output=True, text=True, timeout=1500, cwd=str(REPO))
        assert proc.returncode == 0, proc.stderr
        return out_dir, json.loads(proc.stdout)

    def test_five_rounds_persist_and_resume(self, tmp_path):
        started = time.perf_counter()
        full_dir, full = self._cli(tmp_path, "full", rounds=5)
        assert len(list(full_dir.glob("round_*/model.json"))) == 5
        assert len(list(full_dir.glob("round_*/replay.jsonl"))) == 5
        genomes = list(full_dir.glob("round_*/vp.json"))
        assert len(genomes) == 5
        assert (full_dir / "vp_initial.json").exists()  # 6 genomes total
        for replay in full_dir.glob("round_*/replay.jsonl"):
            artifacts.load_replay(replay)  # valid JSONL all the way down

        # interrupted run: stop after round 2, then restart to 5
        resumed_dir, _ = self._cli(tmp_path, "resumed", rounds=2)
        resumed_dir, resumed = self._cli(tmp_path, "resumed", rounds=5)
        assert resumed["final_vp"] == full["final_vp"]
        elapsed = time.perf_counter() - started
        assert elapsed < 1800.0
        report(f"7 PASS: pmea 5 rounds persisted 5 models + 6 genomes + 5 "
               f"replays, resumable ({elapsed:.0f}s)")


class TestCriterion8ExperimentPipeline:
    def test_full_size_maps_produce_report(self, tmp_path):
        started = time.perf_counter()
        maps = [(name, load_fixture_map(f"{name}.map"))
                for name in ("arena50x50", "field54x46", "corridor50x28")]
        world = WorldConfig(visual_range_phi=5.0, max_turns=1200)
        ea = EAConfig(popsize=6, p_x=0.7, p_m=0.05, max_generations=3)
        rows, records = run_experiment(maps, [RBP, PMEA], 1, "rbp-mirror", 88,
                                       world, ea, output_dir=tmp_path)
        report_path = tmp_path / "report.csv"
        artifacts.save_report(report_path, rows)
        header = report_path.read_text().splitlines()[0].split(",")
        assert header == ["map", "algorithm", "games", "vp_win", "hp_win",
                          "draws", "avg_hp_death", "avg_vp_death", "avg_mov",
                          "avg_time_s"]
        assert len(rows) == 6  # 3 maps x 2 algorithms
        for row in rows:
            assert row["vp_win"] + row["hp_win"] + row["draws"] == row["games"]
        elapsed = time.perf_counter() - started
        report(f"8a PASS: full-size map trio report produced ({elapsed:.0f}s)")

    def test_reduced_trio_and_adaptation_smoke(self, tmp_path):
        started = time.perf_counter()
        maps = [(name, load_fixture_map(f"{name}.map"))
                for name in ("trio25x25_a", "trio25x25_b", "trio25x25_c")]
        world = WorldConfig(visual_range_phi=5.0, max_turns=800)
        ea = EAConfig(popsize=8, p_x=0.7, p_m=0.05, max_generations=6)
        rows, records = run_experiment(maps, [RBP, PMEA], 4, "drifter(5)", 33,
                                       world, ea, output_dir=tmp_path)
        assert len(rows) == 6
        for row in rows:
            assert row["vp_win"] + row["hp_win"] + row["draws"] == 4

        smoke_map = load_fixture_map("smoke16x16.map")
        passes = 0
        for master_seed in range(20):
            cfg = PmeaConfig(
                map_data=smoke_map, world=SMOKE_WORLD, ea=SMOKE_EA,
                opponent="drifter(5)", rounds=20, seed=master_seed,
                model_mode="cumulative")
            result = run_pmea(cfg)
            wins = [1 if r.outcome.winner == "vp" else 0 for r in result.rounds]
            if sum(wins[10:]) >= sum(wins[:10]):
                passes += 1
        assert passes >= 14, f"adaptation held in only {passes}/20 seeds"
        elapsed = time.perf_counter() - started
        assert elapsed < 3600.0
        report(f"8b PASS: reduced trio report + adaptation smoke {passes}/20 "
               f"({elapsed:.0f}s)")


class TestCriterion9Navigation:
    def test_fixture_reachability_within_bound(self):
        started = time.perf_counter()
        for name, factor in (("fix_concave9x9.map", 4),
                             ("fix_convex11x11.map", 10),
                             ("fix_twobridge13x12.map", 10)):
            data = load_fixture_map(name)
            w, h = data.terrain.width, data.terrain.height
            bound = factor * (w + h)
            cfg = WorldConfig(visual_range_phi=float(w + h), max_turns=bound)
            state = spawn_game(data, cfg, 3)
            hp_units = [u for u in state.units if u.army is Army.HP]
            target = data.flags[Army.VP]
            assert bfs_path_length(data, hp_units[0].pos, target) is not None
            controller = matrix_controller(NOOP)
            ids = tuple(u.id for u in hp_units)
            while game_outcome(state) is None:
                step_turn(state, [(ids, Action.MOVE_FORWARD_OBJECTIVE)], controller)
            out = game_outcome(state)
            assert out.reason == "flag-captured", name
            assert out.turns <= bound, name

        # pheromone dominance across the two bridges
        data = load_fixture_map("fix_twobridge13x12.map")
        cfg = WorldConfig(visual_range_phi=30.0, max_turns=10 ** 6)
        state = spawn_game(data, cfg, 11)
        controller = matrix_controller(NOOP)
        ids = tuple(u.id for u in state.units if u.army is Army.HP)
        starts = {u.id: u.pos for u in state.units if u.army is Army.HP}
        w = state.terrain.width
        for _ in range(200):
            step_turn(state, [(ids, Action.MOVE_FORWARD_OBJECTIVE)], controller)
            state.capture = None
            for u in state.units:
                if u.army is Army.HP and u.pos == state.flags[Army.VP]:
                    state.occupancy[u.y * w + u.x] = -1
                    u.x, u.y = starts[u.id]
                    state.occupancy[u.y * w + u.x] = u.id
                    state.nav_contexts.pop(u.id, None)
        short_gap = state.pheromone[Army.HP].value(state.terrain.idx(6, 5))
        long_gap = state.pheromone[Army.HP].value(state.terrain.idx(6, 10))
        assert short_gap > long_gap
        elapsed = time.perf_counter() - started
        assert elapsed < 60.0
        report(f"9 PASS: all navigation fixtures reached within bound; short "
               f"bridge pheromone {short_gap:.2f} > long {long_gap:.2f} "
               f"({elapsed:.1f}s)")
