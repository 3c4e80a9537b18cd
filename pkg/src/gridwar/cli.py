"""Command line entry points.

Subcommands: simulate, evolve, pmea, experiment, stats, serve.
Exit codes: 0 success, 1 usage error, 2 artifact/file error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import artifacts
from .configio import ConfigError, load_ea_config, load_world_config
from .engine import ReplayWriter, matrix_controller, run_game
from .evolution import EAConfig, evolve
from .personas import PersonaDriver, persona_policy
from .pmea import PMEA, RBP, PmeaConfig, run_experiment, run_pmea, stats_from_records
from .seeds import derive_seed
from .strategy import rbp_default
from .world import MapError, SpawnError, load_map

USAGE_ERROR = 1
ARTIFACT_ERROR = 2


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_map_file(path: str):
    try:
        return load_map(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise artifacts.ArtifactError(f"{path}: {exc}") from exc


def _world_config(args):
    if getattr(args, "config", None):
        return load_world_config(args.config)
    from .world import WorldConfig

    return WorldConfig()


def _ea_config(args, seed=None):
    if getattr(args, "ea_config", None):
        return load_ea_config(args.ea_config, seed=seed)
    return EAConfig(seed=seed or 0)


def cmd_simulate(args) -> int:
    map_data = _load_map_file(args.map)
    config = _world_config(args)
    vp = artifacts.load_genome(args.vp_genome) if args.vp_genome else rbp_default()
    replay = None
    fh = None
    if args.replay_out:
        fh = open(args.replay_out, "w", encoding="utf-8")
        replay = ReplayWriter(fh)
    try:
        if args.persona:
            import random

            persona = persona_policy(args.persona)
            driver = PersonaDriver(persona, 1, random.Random(derive_seed(args.seed, "persona")))
        elif args.hp_genome:
            from .engine import matrix_order_driver

            driver = matrix_order_driver(artifacts.load_genome(args.hp_genome))
        else:
            driver = None
        outcome, _ = run_game(map_data, config, args.seed, matrix_controller(vp),
                              driver, replay=replay)
    finally:
        if fh is not None:
            fh.close()
    print(json.dumps(outcome.to_json(), indent=2, sort_keys=True))
    return 0


def cmd_evolve(args) -> int:
    map_data = _load_map_file(args.map)
    config = _world_config(args)
    model = artifacts.load_genome(args.model)
    seed_genome = artifacts.load_genome(args.seed_genome) if args.seed_genome else rbp_default()
    ea = _ea_config(args, seed=args.seed)
    log_fh = open(args.log, "w", encoding="utf-8") if args.log else None

    def on_generation(rec):
        if log_fh is not None:
            log_fh.write(json.dumps(rec.to_json(), sort_keys=True,
                                    separators=(",", ":")) + "\n")

    try:
        result = evolve(model, seed_genome, ea, map_data, config,
                        on_generation=on_generation)
    finally:
        if log_fh is not None:
            log_fh.close()
    artifacts.save_genome(args.out, result.best)
    print(json.dumps({"evaluations": result.evaluations,
                      "best_fitness": result.history[-1].best_fitness if result.history else None,
                      "out": str(args.out)}, sort_keys=True))
    return 0


def cmd_pmea(args) -> int:
    map_data = _load_map_file(args.map)
    config = _world_config(args)
    ea = _ea_config(args, seed=args.seed)
    if args.live:
        return _serve(args, live=True, map_data=map_data, config=config, ea=ea)
    if not args.persona:
        raise UsageError("pmea needs --persona NAME (or --live)")
    cfg = PmeaConfig(
        map_data=map_data, world=config, ea=ea, opponent=args.persona,
        rounds=args.rounds, model_mode="cumulative" if args.cumulative else "per-game",
        seed=args.seed, output_dir=Path(args.output_dir) if args.output_dir else None)
    result = run_pmea(cfg, on_round=lambda rec: print(
        f"round {rec.round}: {rec.outcome.winner} by {rec.outcome.reason} "
        f"({rec.outcome.turns} turns)", file=sys.stderr))
    print(json.dumps({"rounds": len(result.rounds),
                      "final_vp": result.final_vp.as_ints()}, sort_keys=True))
    return 0


def cmd_experiment(args) -> int:
    config = _world_config(args)
    ea = _ea_config(args, seed=args.seed)
    maps = []
    for path in args.maps.split(","):
        path = path.strip()
        maps.append((Path(path).stem, _load_map_file(path)))
    algorithms = [a.strip() for a in args.algorithms.split(",")]
    for algo in algorithms:
        if algo not in (RBP, PMEA):
            raise UsageError(f"unknown algorithm {algo!r}")
    out_dir = Path(args.output_dir) if args.output_dir else None
    rows, records = run_experiment(maps, algorithms, args.games, args.persona,
                                   args.seed, config, ea, output_dir=out_dir)
    artifacts.save_report(args.report_out, rows)
    if args.raw_out:
        artifacts.save_jsonl(args.raw_out, records)
    print(artifacts.report_to_csv(rows))
    return 0


def cmd_stats(args) -> int:
    records = []
    for path in args.raw:
        records.extend(artifacts.load_jsonl(path))
    rows = stats_from_records(records)
    if args.report_out:
        artifacts.save_report(args.report_out, rows)
    print(artifacts.report_to_csv(rows))
    return 0


def _serve(args, live=False, map_data=None, config=None, ea=None) -> int:
    import uvicorn

    from .service import PmeaLiveRunner, SessionManager, build_app

    runner = None
    if live:
        cfg = PmeaConfig(
            map_data=map_data, world=config, ea=ea, opponent="live",
            rounds=args.rounds, seed=args.seed,
            output_dir=Path(args.output_dir) if args.output_dir else None)
        runner = PmeaLiveRunner(cfg)
    maps_dir = Path(args.maps_dir) if getattr(args, "maps_dir", None) else None
    app = build_app(SessionManager(), maps_dir=maps_dir, pmea_runner=runner)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_serve(args) -> int:
    return _serve(args)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="gridwar")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one headless game")
    p.add_argument("--map", required=True)
    p.add_argument("--vp-genome")
    p.add_argument("--hp-genome")
    p.add_argument("--persona")
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replay-out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evolve", help="optimize a controller against a model")
    p.add_argument("--model", required=True, help="player model genome (answer matrix JSON)")
    p.add_argument("--seed-genome")
    p.add_argument("--ea-config")
    p.add_argument("--map", required=True)
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--log")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("pmea", help="model-then-evolve loop over several games")
    p.add_argument("--rounds", type=int, default=20)
    p.add_argument("--persona")
    p.add_argument("--live", action="store_true")
    p.add_argument("--cumulative", action="store_true")
    p.add_argument("--map", required=True)
    p.add_argument("--config")
    p.add_argument("--ea-config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8754)
    p.set_defaults(func=cmd_pmea)

    p = sub.add_parser("experiment", help="map x algorithm result table")
    p.add_argument("--maps", required=True, help="comma-separated map paths")
    p.add_argument("--algorithms", default="rbp,pmea")
    p.add_argument("--games", type=int, default=20)
    p.add_argument("--persona", required=True)
    p.add_argument("--config")
    p.add_argument("--ea-config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report-out", required=True)
    p.add_argument("--raw-out")
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("stats", help="recompute a report from raw records")
    p.add_argument("raw", nargs="+")
    p.add_argument("--report-out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="start the live session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8754)
    p.add_argument("--maps-dir")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (artifacts.ArtifactError, ConfigError, MapError, SpawnError) as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return ARTIFACT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
