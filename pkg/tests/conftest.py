import math
from collections import deque
from pathlib import Path

import pytest

from gridwar.world import Army, MapData, WorldConfig, load_map

REPO = Path(__file__).resolve().parent.parent
MAPS = REPO / "maps"


@pytest.fixture(scope="session")
def maps_dir() -> Path:
    return MAPS


def load_fixture_map(name: str) -> MapData:
    return load_map((MAPS / name).read_text(encoding="utf-8"))


def bfs_path_length(map_data: MapData, start, goal) -> int | None:
    """Independent reachability oracle: shortest 8-connected path length
    over non-impassable cells, or None when unreachable."""
    terrain = map_data.terrain
    if start == goal:
        return 0
    seen = {start: 0}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nxt = (x + dx, y + dy)
                if nxt in seen:
                    continue
                if terrain.in_bounds(*nxt) and terrain.passable(*nxt):
                    seen[nxt] = seen[(x, y)] + 1
                    if nxt == goal:
                        return seen[nxt]
                    queue.append(nxt)
    return None


def euclid(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def open_map(width: int, height: int, extra: dict | None = None) -> str:
    """All-passable map document with flags/spawns parked in corners,
    overridden per cell by `extra` {(x, y): glyph}."""
    cells = {(0, 0): "F", (width - 1, height - 1): "f",
             (1, 0): "a", (width - 2, height - 1): "b"}
    if extra:
        cells.update(extra)
    rows = []
    for y in range(height):
        rows.append("".join(cells.get((x, y), ".") for x in range(width)))
    return "\n".join(rows) + "\n"


def default_config(**kwargs) -> WorldConfig:
    return WorldConfig(**kwargs)


ARMIES = (Army.VP, Army.HP)
