"""Seeded random map generation.

Grows obstacle blobs and semi-impassable patches, places flags in
opposite corners with spawn clusters around them, and keeps resampling
until every spawn can reach the rival flag (8-connected through
non-impassable cells).  The same seed always yields the same document.
"""

from __future__ import annotations

import random
from collections import deque

from .world import IMPASSABLE, Army, MapData, load_map


def bfs_reachable(map_data: MapData, start: tuple[int, int]) -> set[tuple[int, int]]:
    """All cells reachable from start by 8-connected moves that end on a
    non-impassable cell (the same legality the engine uses)."""
    terrain = map_data.terrain
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = x + dx, y + dy
                if (nx, ny) not in seen and terrain.in_bounds(nx, ny) and terrain.passable(nx, ny):
                    seen.add((nx, ny))
                    queue.append((nx, ny))
    return seen


def _blob(grid, w, h, rng, kind, max_size) -> None:
    x, y = rng.randrange(w), rng.randrange(h)
    size = rng.randint(3, max_size)
    for _ in range(size):
        if 0 <= x < w and 0 <= y < h:
            grid[y][x] = kind
        x += rng.choice((-1, 0, 1))
        y += rng.choice((-1, 0, 1))


def random_map(
    seed: int,
    width: int,
    height: int,
    vp_units: int,
    hp_units: int,
    obstacle_blobs: int | None = None,
    semi_blobs: int | None = None,
) -> str:
    """Build a map document; raises after too many failed attempts."""
    if obstacle_blobs is None:
        obstacle_blobs = max(2, (width * height) // 120)
    if semi_blobs is None:
        semi_blobs = max(1, obstacle_blobs // 3)
    rng = random.Random(seed)
    for _ in range(200):
        text = _attempt(rng, width, height, vp_units, hp_units, obstacle_blobs, semi_blobs)
        if text is None:
            continue
        data = load_map(text)
        ok = True
        for army in (Army.VP, Army.HP):
            rival_flag = data.flags[army.rival]
            for spawn in data.spawns[army]:
                if rival_flag not in bfs_reachable(data, spawn):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return text
    raise RuntimeError(f"could not generate a connected {width}x{height} map from seed {seed}")


def _attempt(rng, width, height, vp_units, hp_units, obstacle_blobs, semi_blobs):
    grid = [["." for _ in range(width)] for _ in range(height)]
    for _ in range(obstacle_blobs):
        _blob(grid, width, height, rng, "#", max(4, (width + height) // 3))
    for _ in range(semi_blobs):
        _blob(grid, width, height, rng, "~", max(3, (width + height) // 5))

    def clear_zone(cx, cy, r):
        for y in range(max(0, cy - r), min(height, cy + r + 1)):
            for x in range(max(0, cx - r), min(width, cx + r + 1)):
                grid[y][x] = "."

    fy_v = rng.randrange(height // 4)
    fx_v = rng.randrange(width // 4)
    fy_h = height - 1 - rng.randrange(height // 4)
    fx_h = width - 1 - rng.randrange(width // 4)
    zone = max(2, min(width, height) // 8)
    clear_zone(fx_v, fy_v, zone + 1)
    clear_zone(fx_h, fy_h, zone + 1)
    grid[fy_v][fx_v] = "F"
    grid[fy_h][fx_h] = "f"

    def place_spawns(cx, cy, glyph, count) -> bool:
        placed = 0
        radius = 1
        while placed < count and radius < max(width, height):
            ring = [
                (x, y)
                for y in range(max(0, cy - radius), min(height, cy + radius + 1))
                for x in range(max(0, cx - radius), min(width, cx + radius + 1))
                if grid[y][x] == "."
            ]
            rng.shuffle(ring)
            for x, y in ring:
                if placed >= count:
                    break
                grid[y][x] = glyph
                placed += 1
            radius += 1
        return placed >= count

    if not place_spawns(fx_v, fy_v, "a", vp_units):
        return None
    if not place_spawns(fx_h, fy_h, "b", hp_units):
        return None
    return "\n".join("".join(row) for row in grid) + "\n"
