#!/usr/bin/env python3
"""Overnight-scale experiment: both algorithms on the three big arenas.

Plays 20 games per (map, algorithm) cell against a shifting persona and
writes the CSV report plus raw per-game records.  Expect this to run for
a few hours; the reduced variant in tests/test_acceptance.py covers the
same pipeline at desk scale.
"""

import argparse
import time
from pathlib import Path

from gridwar import artifacts
from gridwar.evolution import EAConfig
from gridwar.pmea import PMEA, RBP, run_experiment
from gridwar.world import WorldConfig, load_map

REPO = Path(__file__).resolve().parent.parent


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--games", type=int, default=20)
    parser.add_argument("--persona", default="drifter(5)")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", default="experiment_full")
    args = parser.parse_args()

    maps = []
    for name in ("arena50x50", "field54x46", "corridor50x28"):
        maps.append((name, load_map((REPO / "maps" / f"{name}.map").read_text())))
    world = WorldConfig(visual_range_phi=5.0, max_turns=3000)
    ea = EAConfig(popsize=50, p_x=0.7, p_m=0.01, max_generations=125)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    rows, records = run_experiment(maps, [RBP, PMEA], args.games, args.persona,
                                   args.seed, world, ea, output_dir=out_dir)
    artifacts.save_report(out_dir / "report.csv", rows)
    artifacts.save_jsonl(out_dir / "raw.jsonl", records)
    print(artifacts.report_to_csv(rows))
    print(f"finished in {(time.perf_counter() - started) / 3600:.2f} h; "
          f"artifacts in {out_dir}/")


if __name__ == "__main__":
    main()
