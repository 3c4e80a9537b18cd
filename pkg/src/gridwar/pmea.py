"""The adapt-between-games loop and the experiment harness.

One round = play an on-line game against the current machine controller
while modeling the opponent's orders, then evolve the controller against
the extracted model.  Rounds persist their artifacts (model, genome,
replay, outcome) so an interrupted run resumes where it stopped and ends
with the same final genome as an uninterrupted one.
"""

from __future__ import annotations

import dataclasses
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import artifacts, modeling
from .engine import Outcome, ReplayWriter, matrix_controller, run_game
from .evolution import EAConfig, evolve
from .modeling import ExtendedAnswerMatrix, extract_policy
from .personas import Persona, PersonaDriver, persona_policy
from .seeds import derive_seed
from .strategy import AnswerMatrix, rbp_default
from .world import MapData, WorldConfig

PER_GAME = "per-game"
CUMULATIVE = "cumulative"


@dataclass
class PmeaConfig:
    map_data: MapData
    world: WorldConfig
    ea: EAConfig
    opponent: str  # persona name
    rounds: int = 20
    model_mode: str = PER_GAME
    seed: int = 0
    output_dir: Path | None = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.model_mode not in (PER_GAME, CUMULATIVE):
            raise ValueError(f"unknown model mode {self.model_mode!r}")


@dataclass
class RoundRecord:
    round: int
    outcome: Outcome
    time_s: float
    game_seed: int

    def to_json(self) -> dict:
        rec = {"round": self.round, "time_s": self.time_s, "game_seed": self.game_seed}
        rec.update(self.outcome.to_json())
        return rec


@dataclass
class PmeaResult:
    final_vp: AnswerMatrix
    rounds: list[RoundRecord] = field(default_factory=list)


def play_online_game(
    vp_genome: AnswerMatrix,
    persona: Persona,
    game_index: int,
    map_data: MapData,
    world: WorldConfig,
    game_seed: int,
    persona_seed: int,
    recorder: ExtendedAnswerMatrix | None = None,
    replay_path: Path | None = None,
) -> tuple[Outcome, float]:
    """One scored game of the machine controller against a persona."""
    driver = PersonaDriver(persona, game_index, random.Random(persona_seed), recorder)
    started = time.perf_counter()
    if replay_path is not None:
        with open(replay_path, "w", encoding="utf-8") as fh:
            outcome, _ = run_game(map_data, world, game_seed,
                                  matrix_controller(vp_genome), driver,
                                  replay=ReplayWriter(fh))
    else:
        outcome, _ = run_game(map_data, world, game_seed,
                              matrix_controller(vp_genome), driver)
    return outcome, time.perf_counter() - started


def _round_dir(output_dir: Path, i: int) -> Path:
    return output_dir / f"round_{i:03d}"


def _round_complete(output_dir: Path, i: int) -> bool:
    d = _round_dir(output_dir, i)
    # outcome.json is written last and marks the round as committed
    return all((d / name).exists() for name in
               ("model.json", "vp.json", "replay.jsonl", "outcome.json"))


def run_pmea(cfg: PmeaConfig, on_round=None) -> PmeaResult:
    """Run the full loop; resumes from persisted rounds when output_dir
    already holds completed ones."""
    persona = persona_policy(cfg.opponent)
    vp = rbp_default()
    result = PmeaResult(final_vp=vp)
    out = cfg.output_dir
    accumulated: ExtendedAnswerMatrix | None = None

    start_round = 1
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        initial = out / "vp_initial.json"
        if initial.exists():
            artifacts.load_genome(initial)  # fail fast on corruption
        else:
            artifacts.save_genome(initial, vp)
        while start_round <= cfg.rounds and _round_complete(out, start_round):
            d = _round_dir(out, start_round)
            vp = artifacts.load_genome(d / "vp.json")
            rec_json = artifacts.load_jsonl(d / "outcome.json")[0]
            result.rounds.append(RoundRecord(
                round=start_round,
                outcome=Outcome(
                    winner=rec_json["winner"], reason=rec_json["reason"],
                    deaths_hp=rec_json["deaths_hp"], deaths_vp=rec_json["deaths_vp"],
                    movements=rec_json["movements"], turns=rec_json["turns"]),
                time_s=rec_json["time_s"], game_seed=rec_json["game_seed"]))
            if cfg.model_mode == CUMULATIVE:
                round_model = artifacts.load_model(d / "model.json")
                accumulated = (round_model if accumulated is None
                               else modeling.merge(accumulated, round_model))
            start_round += 1

    for i in range(start_round, cfg.rounds + 1):
        game_seed = derive_seed(cfg.seed, "round", i, "game")
        persona_seed = derive_seed(cfg.seed, "round", i, "persona")
        recorder = ExtendedAnswerMatrix()
        round_dir = None
        replay_path = None
        if out is not None:
            round_dir = _round_dir(out, i)
            round_dir.mkdir(parents=True, exist_ok=True)
            replay_path = round_dir / "replay.jsonl"
        outcome, elapsed = play_online_game(
            vp, persona, i, cfg.map_data, cfg.world,
            game_seed, persona_seed, recorder, replay_path)
        if cfg.model_mode == CUMULATIVE:
            accumulated = (recorder if accumulated is None
                           else modeling.merge(accumulated, recorder))
            model_for_ea = accumulated
        else:
            model_for_ea = recorder
        player_model = extract_policy(model_for_ea, rbp_default())
        ea = dataclasses.replace(
            cfg.ea, seed=derive_seed(cfg.seed, cfg.ea.seed, "round", i, "ea"))
        vp = evolve(player_model, vp, ea, cfg.map_data, cfg.world).best
        record = RoundRecord(i, outcome, elapsed, game_seed)
        result.rounds.append(record)
        if round_dir is not None:
            artifacts.save_model(round_dir / "model.json", recorder)
            artifacts.save_genome(round_dir / "vp.json", vp)
            artifacts.save_jsonl(round_dir / "outcome.json", [record.to_json()])
        if on_round is not None:
            on_round(record)

    result.final_vp = vp
    return result


RBP = "rbp"
PMEA = "pmea"


def run_experiment(
    maps: list[tuple[str, MapData]],
    algorithms: list[str],
    games_per_cell: int,
    opponent: str,
    seed: int,
    world: WorldConfig,
    ea: EAConfig,
    output_dir: Path | None = None,
) -> tuple[list[dict], list[dict]]:
    """Play every (map, algorithm) cell and tabulate the results.

    Returns (report rows, raw per-game records).  The rows are always
    recomputed from the raw records, so the two never disagree.
    """
    if games_per_cell < 1:
        raise ValueError("games_per_cell must be >= 1")
    records: list[dict] = []
    for map_name, map_data in maps:
        for algo in algorithms:
            if algo == RBP:
                persona = persona_policy(opponent)
                genome = rbp_default()
                for g in range(1, games_per_cell + 1):
                    outcome, elapsed = play_online_game(
                        genome, persona, g, map_data, world,
                        derive_seed(seed, map_name, RBP, g, "game"),
                        derive_seed(seed, map_name, RBP, g, "persona"))
                    records.append(_record(map_name, RBP, g, outcome, elapsed,
                                           derive_seed(seed, map_name, RBP, g, "game")))
            elif algo == PMEA:
                out = output_dir / f"pmea_{map_name}" if output_dir else None
                cfg = PmeaConfig(
                    map_data=map_data, world=world, ea=ea, opponent=opponent,
                    rounds=games_per_cell, seed=derive_seed(seed, map_name, PMEA),
                    output_dir=out)
                result = run_pmea(cfg)
                for rec in result.rounds:
                    records.append(_record(map_name, PMEA, rec.round, rec.outcome,
                                           rec.time_s, rec.game_seed))
            else:
                raise ValueError(f"unknown algorithm {algo!r}")
    return stats_from_records(records), records


def _record(map_name: str, algo: str, game: int, outcome: Outcome,
             elapsed: float, game_seed: int) -> dict:
    rec = {"map": map_name, "algorithm": algo, "game": game,
           "time_s": elapsed, "seed": game_seed}
    rec.update(outcome.to_json())
    return rec


def stats_from_records(records: list[dict]) -> list[dict]:
    """Aggregate raw per-game records into per-(map, algorithm) rows."""
    cells: dict[tuple[str, str], list[dict]] = {}
    for rec in records:
        cells.setdefault((rec["map"], rec["algorithm"]), []).append(rec)
    rows = []
    for (map_name, algo), recs in cells.items():
        n = len(recs)
        rows.append({
            "map": map_name,
            "algorithm": algo,
            "games": n,
            "vp_win": sum(1 for r in recs if r["winner"] == "vp"),
            "hp_win": sum(1 for r in recs if r["winner"] == "hp"),
            "draws": sum(1 for r in recs if r["winner"] == "draw"),
            "avg_hp_death": sum(r["deaths_hp"] for r in recs) / n,
            "avg_vp_death": sum(r["deaths_vp"] for r in recs) / n,
            "avg_mov": sum(r["movements"] for r in recs) / n,
            "avg_time_s": sum(r["time_s"] for r in recs) / n,
        })
    return rows
