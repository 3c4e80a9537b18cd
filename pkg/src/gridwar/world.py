"""World model: terrain, units, fog of war, and game state construction.

Coordinates are (x, y) with x growing rightward and y growing downward;
cell (0, 0) is the top-left character of the map document.  The grid is
non-toroidal: nothing wraps.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from enum import IntEnum

from .strategy import Action, HealthLevel, UnitPerception

Cell = tuple[int, int]

PASSABLE = 0
IMPASSABLE = 1
SEMI_IMPASSABLE = 2

_GLYPH_TERRAIN = {
    ".": PASSABLE,
    "#": IMPASSABLE,
    "~": SEMI_IMPASSABLE,
    # flags and spawn markers sit on passable ground
    "f": PASSABLE,
    "F": PASSABLE,
    "a": PASSABLE,
    "b": PASSABLE,
}

TERRAIN_GLYPHS = {PASSABLE: ".", IMPASSABLE: "#", SEMI_IMPASSABLE: "~"}

# 8-connected neighborhood in clockwise order starting east (y grows down)
NEIGHBORS8 = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


class Army(IntEnum):
    VP = 0  # machine-controlled army, spawns on 'a', defends flag 'F'
    HP = 1  # player-controlled army, spawns on 'b', defends flag 'f'

    @property
    def rival(self) -> "Army":
        return Army.HP if self is Army.VP else Army.VP

    def tag(self) -> str:
        return "vp" if self is Army.VP else "hp"


class MapError(ValueError):
    """Map document rejected; carries a stable code plus row/col when known."""

    def __init__(self, code: str, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.code = code
        self.row = row
        self.col = col


class SpawnError(ValueError):
    pass


@dataclass(frozen=True)
class Terrain:
    width: int
    height: int
    cells: bytes  # row-major, values PASSABLE / IMPASSABLE / SEMI_IMPASSABLE

    def __post_init__(self):
        if self.width < 3 or self.height < 3:
            raise MapError("too-small", f"grid must be at least 3x3, got {self.width}x{self.height}")
        if len(self.cells) != self.width * self.height:
            raise MapError("bad-shape", "cell buffer does not match width*height")

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def kind(self, x: int, y: int) -> int:
        return self.cells[y * self.width + x]

    def passable(self, x: int, y: int) -> bool:
        return self.cells[y * self.width + x] != IMPASSABLE

    def idx(self, x: int, y: int) -> int:
        return y * self.width + x

    def rows(self) -> list[str]:
        out = []
        for y in range(self.height):
            row = self.cells[y * self.width : (y + 1) * self.width]
            out.append("".join(TERRAIN_GLYPHS[c] for c in row))
        return out


@dataclass(frozen=True)
class MapData:
    """A parsed map: terrain plus flag and spawn metadata."""

    terrain: Terrain
    flags: dict[Army, Cell]  # each army's own flag
    spawns: dict[Army, list[Cell]]


def load_map(text: str) -> MapData:
    """Parse a UTF-8 map document.

    Glyphs: '.' passable, '#' impassable, '~' semi-impassable,
    'f' HP flag, 'F' VP flag, 'a' VP spawn, 'b' HP spawn.
    Every row must have the same length; exactly one flag per army.
    """
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MapError("empty", "map document is empty")
    width = len(lines[0])
    cells = bytearray()
    flags: dict[Army, Cell] = {}
    spawns: dict[Army, list[Cell]] = {Army.VP: [], Army.HP: []}
    for y, line in enumerate(lines):
        if len(line) != width:
            raise MapError("non-rectangular", f"row {y} has length {len(line)}, expected {width}", row=y)
        for x, glyph in enumerate(line):
            if glyph not in _GLYPH_TERRAIN:
                raise MapError("unknown-glyph", f"unknown glyph {glyph!r} at row {y}, col {x}", row=y, col=x)
            cells.append(_GLYPH_TERRAIN[glyph])
            if glyph == "f":
                if Army.HP in flags:
                    raise MapError("duplicate-flag", f"duplicate HP flag at row {y}, col {x}", row=y, col=x)
                flags[Army.HP] = (x, y)
            elif glyph == "F":
                if Army.VP in flags:
                    raise MapError("duplicate-flag", f"duplicate VP flag at row {y}, col {x}", row=y, col=x)
                flags[Army.VP] = (x, y)
            elif glyph == "a":
                spawns[Army.VP].append((x, y))
            elif glyph == "b":
                spawns[Army.HP].append((x, y))
    for army in (Army.VP, Army.HP):
        if army not in flags:
            raise MapError("missing-flag", f"no flag for army {army.name}")
    return MapData(Terrain(width, len(lines), bytes(cells)), flags, spawns)


def dump_map(data: MapData) -> str:
    """Inverse of load_map, modulo glyph choice on decorated cells."""
    grid = [list(row) for row in data.terrain.rows()]
    fx, fy = data.flags[Army.HP]
    grid[fy][fx] = "f"
    fx, fy = data.flags[Army.VP]
    grid[fy][fx] = "F"
    for x, y in data.spawns[Army.VP]:
        grid[y][x] = "a"
    for x, y in data.spawns[Army.HP]:
        grid[y][x] = "b"
    return "\n".join("".join(row) for row in grid) + "\n"


@dataclass(frozen=True)
class NavConfig:
    stall_threshold: int = 3
    pheromone_weight: float = 0.1
    pheromone_deposit: float = 1.0
    pheromone_evaporation: float = 0.01
    pheromone_cap: float = 100.0
    sighting_window: int = 50
    guard_radius: int = 3


@dataclass(frozen=True)
class WorldConfig:
    visual_range_phi: float = 5.0
    max_health: int = 100
    max_energy: int = 1000
    semi_impassable_energy_cost: int = 1
    combat_damage: int = 1
    max_turns: int = 10000
    combat_damage_stat: str = "health"  # "health" | "energy"
    flag_visibility: str = "army"  # "army" | "unit"
    nav: NavConfig = field(default_factory=NavConfig)

    def __post_init__(self):
        for name in ("visual_range_phi", "max_health", "max_energy",
                     "semi_impassable_energy_cost", "combat_damage", "max_turns"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.combat_damage_stat not in ("health", "energy"):
            raise ValueError("combat_damage_stat must be 'health' or 'energy'")
        if self.flag_visibility not in ("army", "unit"):
            raise ValueError("flag_visibility must be 'army' or 'unit'")


@dataclass(slots=True)
class Unit:
    id: int
    army: Army
    x: int
    y: int
    health: int
    energy: int
    current_order: Action
    alive: bool = True

    @property
    def pos(self) -> Cell:
        return (self.x, self.y)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "army": self.army.tag(),
            "pos": [self.x, self.y],
            "health": self.health,
            "energy": self.energy,
            "order": int(self.current_order),
            "alive": self.alive,
        }


class ArmyKnowledge:
    """Everything one army has ever sensed: explored cells, rival flag,
    recent enemy sightings.  Explored cells never un-explore."""

    def __init__(self, terrain: Terrain):
        self._terrain = terrain
        self.explored = bytearray(terrain.width * terrain.height)
        self.unexplored = set(range(terrain.width * terrain.height))
        self.enemy_flag_known: Cell | None = None
        self.sightings: list[tuple[int, int]] = []  # (turn, cell index)

    @property
    def explored_count(self) -> int:
        return len(self.explored) - len(self.unexplored)

    def mark_explored(self, idx: int) -> None:
        if not self.explored[idx]:
            self.explored[idx] = 1
            self.unexplored.discard(idx)

    def is_explored(self, x: int, y: int) -> bool:
        return bool(self.explored[y * self._terrain.width + x])

    def add_sighting(self, turn: int, idx: int) -> None:
        self.sightings.append((turn, idx))

    def prune_sightings(self, oldest_turn: int) -> None:
        if len(self.sightings) > 4096:
            self.sightings = [s for s in self.sightings if s[0] >= oldest_turn]


class PheromoneField:
    """Per-army pheromone values with lazy multiplicative decay.

    Values live in a sparse dict of (value, stamp) pairs; the observable
    value after k decay steps is value * (1-evaporation)**k, computed on
    read so quiet turns cost nothing.
    """

    def __init__(self, nav: NavConfig):
        self.factor = 1.0 - nav.pheromone_evaporation
        self.cap = nav.pheromone_cap
        self.deposit_amount = nav.pheromone_deposit
        self.steps = 0  # completed decay steps
        self._cells: dict[int, tuple[float, int]] = {}

    def value(self, idx: int) -> float:
        entry = self._cells.get(idx)
        if entry is None:
            return 0.0
        v, stamp = entry
        if stamp == self.steps:
            return v
        return v * self.factor ** (self.steps - stamp)

    def deposit(self, idx: int, amount: float | None = None) -> None:
        amt = self.deposit_amount if amount is None else amount
        v = min(self.cap, self.value(idx) + amt)
        self._cells[idx] = (v, self.steps)

    def decay_step(self) -> None:
        self.steps += 1

    def grid(self, width: int, height: int) -> list[list[float]]:
        return [[self.value(y * width + x) for x in range(width)] for y in range(height)]


# cached visual-range offset tables, keyed by rounded phi
_VR_CACHE: dict[float, tuple[tuple[int, int], ...]] = {}


def vr_offsets(phi: float) -> tuple[tuple[int, int], ...]:
    """All (dx, dy) with dx*dx + dy*dy <= phi*phi, sorted by distance
    then (dy, dx) so scans resolve ties in row-major order."""
    key = round(phi, 9)
    cached = _VR_CACHE.get(key)
    if cached is not None:
        return cached
    r = int(math.floor(phi))
    limit = phi * phi + 1e-9
    offs = [
        (dx, dy)
        for dy in range(-r, r + 1)
        for dx in range(-r, r + 1)
        if dx * dx + dy * dy <= limit
    ]
    offs.sort(key=lambda o: (o[0] * o[0] + o[1] * o[1], o[1], o[0]))
    result = tuple(offs)
    _VR_CACHE[key] = result
    return result


# offsets covering a whole w x h board from any position, sorted by
# distance then (dy, dx); used for nearest-cell scans
_SCAN_CACHE: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}


def scan_offsets(width: int, height: int) -> tuple[tuple[int, int], ...]:
    key = (width, height)
    cached = _SCAN_CACHE.get(key)
    if cached is not None:
        return cached
    offs = [
        (dx, dy)
        for dy in range(-(height - 1), height)
        for dx in range(-(width - 1), width)
    ]
    offs.sort(key=lambda o: (o[0] * o[0] + o[1] * o[1], o[1], o[0]))
    result = tuple(offs)
    _SCAN_CACHE[key] = result
    return result


def visual_range(pos: Cell, phi: float, terrain: Terrain) -> set[Cell]:
    """In-bounds cells within Euclidean distance phi of pos (pos included).

    Obstacles never block vision; the range is a plain disc.
    """
    px, py = pos
    out = set()
    for dx, dy in vr_offsets(phi):
        x, y = px + dx, py + dy
        if 0 <= x < terrain.width and 0 <= y < terrain.height:
            out.add((x, y))
    return out


@dataclass
class CaptureInfo:
    winner: str  # "vp" | "hp" | "draw"
    turn: int
    unit_ids: list[int]


class GameState:
    """Full mutable state of one game.

    Confined to a single logical thread; distinct states are independent
    (separate RNG streams) and may be simulated in parallel.
    """

    def __init__(self, map_data: MapData, config: WorldConfig, seed: int):
        self.map_data = map_data
        self.terrain = map_data.terrain
        self.config = config
        self.seed = seed
        self.rng = random.Random(seed)
        self.turn = 0
        self.units: list[Unit] = []
        self.flags = dict(map_data.flags)
        self.knowledge = {army: ArmyKnowledge(self.terrain) for army in (Army.VP, Army.HP)}
        self.pheromone = {army: PheromoneField(config.nav) for army in (Army.VP, Army.HP)}
        self.occupancy = [-1] * (self.terrain.width * self.terrain.height)
        self.movements = 0
        self.movements_by_army = {Army.VP: 0, Army.HP: 0}
        self.deaths = {Army.VP: 0, Army.HP: 0}
        self.capture: CaptureInfo | None = None
        self.initial_counts = {Army.VP: 0, Army.HP: 0}
        # per-unit navigation state, filled in lazily by the navigator
        self.nav_contexts: dict[int, object] = {}

    # -- unit helpers -------------------------------------------------

    def living_units(self, army: Army | None = None):
        if army is None:
            return [u for u in self.units if u.alive]
        return [u for u in self.units if u.alive and u.army is army]

    def unit_at(self, x: int, y: int) -> Unit | None:
        uid = self.occupancy[y * self.terrain.width + x]
        return self.units[uid] if uid >= 0 else None

    def occupied(self, x: int, y: int) -> bool:
        return self.occupancy[y * self.terrain.width + x] >= 0

    # -- fog of war ----------------------------------------------------

    def sense_from(self, unit: Unit) -> None:
        """Fold one unit's current visual range into its army's knowledge."""
        know = self.knowledge[unit.army]
        terrain = self.terrain
        w, h = terrain.width, terrain.height
        for dx, dy in vr_offsets(self.config.visual_range_phi):
            x, y = unit.x + dx, unit.y + dy
            if 0 <= x < w and 0 <= y < h:
                know.mark_explored(y * w + x)
        if know.enemy_flag_known is None:
            fx, fy = self.flags[unit.army.rival]
            ddx, ddy = fx - unit.x, fy - unit.y
            phi2 = self.config.visual_range_phi ** 2
            if ddx * ddx + ddy * ddy <= phi2 + 1e-9:
                know.enemy_flag_known = (fx, fy)

    def record_sightings(self) -> None:
        """Log every enemy unit currently inside some own unit's range."""
        phi2 = self.config.visual_range_phi ** 2 + 1e-9
        w = self.terrain.width
        for army in (Army.VP, Army.HP):
            know = self.knowledge[army]
            own = self.living_units(army)
            for enemy in self.living_units(army.rival):
                for u in own:
                    dx, dy = enemy.x - u.x, enemy.y - u.y
                    if dx * dx + dy * dy <= phi2:
                        know.add_sighting(self.turn, enemy.y * w + enemy.x)
                        break
            know.prune_sightings(self.turn - self.config.nav.sighting_window)

    def enemy_visible_to(self, army: Army, enemy: Unit) -> bool:
        phi2 = self.config.visual_range_phi ** 2 + 1e-9
        for u in self.living_units(army):
            dx, dy = enemy.x - u.x, enemy.y - u.y
            if dx * dx + dy * dy <= phi2:
                return True
        return False

    # -- serialization -------------------------------------------------

    def snapshot(self) -> dict:
        w, h = self.terrain.width, self.terrain.height
        return {
            "turn": self.turn,
            "units": [u.to_json() for u in self.units],
            "flags": {a.tag(): list(self.flags[a]) for a in (Army.VP, Army.HP)},
            "explored": {
                a.tag(): self.knowledge[a].explored.hex() for a in (Army.VP, Army.HP)
            },
            "enemy_flag_known": {
                a.tag(): (list(k) if (k := self.knowledge[a].enemy_flag_known) else None)
                for a in (Army.VP, Army.HP)
            },
            "pheromone": {
                a.tag(): {str(i): self.pheromone[a].value(i)
                          for i in sorted(self.pheromone[a]._cells)}
                for a in (Army.VP, Army.HP)
            },
            "movements": self.movements,
            "deaths": {a.tag(): self.deaths[a] for a in (Army.VP, Army.HP)},
            "capture": (
                {"winner": self.capture.winner, "turn": self.capture.turn,
                 "units": self.capture.unit_ids}
                if self.capture
                else None
            ),
        }

    def digest(self) -> str:
        blob = json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def spawn_game(map_data: MapData, config: WorldConfig, seed: int) -> GameState:
    """Place both armies on their spawn cells at full health and energy.

    Unit ids are assigned in row-major spawn order, VP army first; every
    unit starts with an Explore order.  The same inputs always produce a
    bit-identical state.
    """
    vp_spawns = sorted(map_data.spawns[Army.VP], key=lambda c: (c[1], c[0]))
    hp_spawns = sorted(map_data.spawns[Army.HP], key=lambda c: (c[1], c[0]))
    if not vp_spawns or not hp_spawns:
        raise SpawnError("both armies need at least one spawn cell")
    seen: set[Cell] = set()
    for cell in vp_spawns + hp_spawns:
        if cell in seen:
            raise SpawnError(f"overlapping spawn cell {cell}")
        seen.add(cell)
    state = GameState(map_data, config, seed)
    for army, cells in ((Army.VP, vp_spawns), (Army.HP, hp_spawns)):
        for cell in cells:
            uid = len(state.units)
            unit = Unit(uid, army, cell[0], cell[1], config.max_health,
                        config.max_energy, Action.EXPLORE)
            state.units.append(unit)
            state.occupancy[state.terrain.idx(*cell)] = uid
        state.initial_counts[army] = len(cells)
    for unit in state.units:
        state.sense_from(unit)
    state.record_sightings()
    return state


def health_level(health: int, max_health: int) -> HealthLevel:
    low_ceiling = -(-max_health // 3)  # ceil(max/3)
    high_floor = -(-2 * max_health // 3)  # ceil(2*max/3)
    if health < low_ceiling:
        return HealthLevel.LOW
    if health < high_floor:
        return HealthLevel.MEDIUM
    return HealthLevel.HIGH


def perceive(state: GameState, unit: Unit) -> UnitPerception:
    """Compute a living unit's perception of its situation."""
    if not unit.alive:
        raise ValueError(f"perceive called on dead unit {unit.id}")
    cfg = state.config
    phi2 = cfg.visual_range_phi ** 2 + 1e-9
    mates = rivals = 0
    for other in state.units:
        if not other.alive or other.id == unit.id:
            continue
        dx, dy = other.x - unit.x, other.y - unit.y
        if dx * dx + dy * dy <= phi2:
            if other.army is unit.army:
                mates += 1
            else:
                rivals += 1
    under_attack = False
    terrain = state.terrain
    for dx, dy in NEIGHBORS8:
        x, y = unit.x + dx, unit.y + dy
        if terrain.in_bounds(x, y):
            other = state.unit_at(x, y)
            if other is not None and other.alive and other.army is not unit.army:
                under_attack = True
                break
    if cfg.flag_visibility == "army":
        flag_seen = state.knowledge[unit.army].enemy_flag_known is not None
    else:
        fx, fy = state.flags[unit.army.rival]
        dx, dy = fx - unit.x, fy - unit.y
        flag_seen = dx * dx + dy * dy <= phi2
    return UnitPerception(
        health=health_level(unit.health, cfg.max_health),
        advantage=mates > rivals,
        under_attack=under_attack,
        objective_visible=flag_seen,
    )
