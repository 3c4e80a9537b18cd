#!/usr/bin/env python3
"""Regenerate every shipped map under maps/.

Hand-written fixtures are embedded below; the larger arenas come from
the seeded generator.  Outputs are frozen: reruns must be byte-identical
(tests compare against the committed files).
"""

from pathlib import Path

from gridwar.mapgen import random_map
from gridwar.world import Army, load_map

MAPS_DIR = Path(__file__).resolve().parent.parent / "maps"

FIXTURES = {
    # one unit escapes a U-shaped pocket (open west, target east)
    "fix_concave9x9.map": """\
.........
.a.....f.
..#####..
......#..
....b.#.F
......#..
..#####..
.........
.........
""",
    # one unit rounds a solid block
    "fix_convex11x11.map": """\
...........
.a.......f.
...........
...#####...
...#####...
b..#####..F
...#####...
...#####...
...........
...........
...........
""",
    # ten units stream between chambers; the near gap is the short bridge
    "fix_twobridge13x12.map": """\
#############
#a...f#.....#
#bb...#.....#
#bb...#.....#
#bb...#.....#
#bb.........#
#bb...#.....#
#.....#.....#
#.....#.....#
#.....#...F.#
#...........#
#############
""",
    # machine unit starts two steps from the player's flag
    "fix_capture5x5.map": """\
f....
.....
..a..
....b
....F
""",
    # point-symmetric duel for self-play fairness checks
    "sym11x11.map": """\
F.a........
a.a........
...........
...##......
...........
...........
...........
......##...
...........
........b.b
........b.f
""",
}


def main() -> None:
    MAPS_DIR.mkdir(exist_ok=True)
    for name, text in FIXTURES.items():
        (MAPS_DIR / name).write_text(text, encoding="utf-8")

    generated = {
        # small arenas for fast optimization runs
        "duel20x20.map": random_map(2001, 20, 20, vp_units=5, hp_units=5),
        "smoke16x16.map": random_map(1601, 16, 16, vp_units=4, hp_units=4,
                                     obstacle_blobs=2, semi_blobs=1),
        # reduced three-arena set
        "trio25x25_a.map": random_map(2501, 25, 25, vp_units=12, hp_units=8),
        "trio25x25_b.map": random_map(2502, 25, 25, vp_units=11, hp_units=11),
        "trio25x25_c.map": random_map(2503, 25, 25, vp_units=12, hp_units=13),
        # full-size arenas with the canonical army sizes
        "arena50x50.map": random_map(5001, 50, 50, vp_units=48, hp_units=32),
        "field54x46.map": random_map(5446, 54, 46, vp_units=43, hp_units=43),
        "corridor50x28.map": random_map(5028, 50, 28, vp_units=48, hp_units=53),
    }
    for name, text in generated.items():
        (MAPS_DIR / name).write_text(text, encoding="utf-8")

    for name in sorted(list(FIXTURES) + list(generated)):
        data = load_map((MAPS_DIR / name).read_text(encoding="utf-8"))
        print(f"{name}: {data.terrain.width}x{data.terrain.height}, "
              f"vp={len(data.spawns[Army.VP])} hp={len(data.spawns[Army.HP])}")


if __name__ == "__main__":
    main()
