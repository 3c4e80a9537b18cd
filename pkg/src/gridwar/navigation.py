"""Reactive navigation under fog: order -> target cell -> one legal step.

Pathfinding is deliberately local (most of the map is unknown to the
moving army), layered in three tiers:

  1. greedy: any neighbor that strictly reduces Euclidean distance to the
     target, biased by the army's pheromone trail;
  2. angle sweep: if nothing improves, try bearings rotated 45 then 90
     degrees off the desired heading (gets around shallow concave lips);
  3. wall follow: after stalling for a few turns, hug the obstacle
     contour with a fixed hand until a greedy step exists from a point
     strictly closer to the target than where the follow began.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .strategy import Action
from .world import (
    NEIGHBORS8,
    Army,
    Cell,
    GameState,
    Unit,
    scan_offsets,
)

# sentinels returned by action_target when there is no concrete cell
RANDOM_WALK = object()
STAY = object()

LEFT = "left"
RIGHT = "right"


@dataclass
class WallFollow:
    hand: str
    entry_cell: Cell
    entry_dist: float
    target_at_entry: Cell
    heading: int  # direction index into NEIGHBORS8
    steps: int = 0


@dataclass
class NavContext:
    mode: WallFollow | None = None
    stall_counter: int = 0
    best_target: Cell | None = None
    best_dist: float = 0.0  # closest approach to best_target so far
    explore_target: int | None = None  # cached cell index, cleared once explored


@dataclass(frozen=True)
class MoveDecision:
    step: Cell | None  # None means stay put
    reason: str  # greedy | pheromone | angle-sweep | wall-follow | random | blocked


def nav_context(state: GameState, unit: Unit) -> NavContext:
    ctx = state.nav_contexts.get(unit.id)
    if ctx is None:
        ctx = NavContext()
        state.nav_contexts[unit.id] = ctx
    return ctx


def _dist(a: Cell, b: Cell) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def legal_steps(state: GameState, pos: Cell) -> list[Cell]:
    """Neighbor cells a unit may enter right now, in fixed direction order."""
    terrain = state.terrain
    out = []
    for dx, dy in NEIGHBORS8:
        x, y = pos[0] + dx, pos[1] + dy
        if terrain.in_bounds(x, y) and terrain.passable(x, y) and not state.occupied(x, y):
            out.append((x, y))
    return out


def bearing_index(src: Cell, dst: Cell) -> int:
    """Quantize the direction src -> dst to the nearest of 8 headings."""
    angle = math.atan2(dst[1] - src[1], dst[0] - src[0])
    return round(angle / (math.pi / 4)) % 8


def _legal(state: GameState, x: int, y: int) -> bool:
    t = state.terrain
    return t.in_bounds(x, y) and t.passable(x, y) and not state.occupied(x, y)


def _follow_candidates(heading: int, hand: str):
    """Direction preference for contour following with the wall on one side."""
    if hand == LEFT:
        rots = (-2, -1, 0, 1, 2, 3, 4)
    else:
        rots = (2, 1, 0, -1, -2, -3, -4)
    return [(heading + r) % 8 for r in rots]


def _follow_step(state: GameState, pos: Cell, heading: int, hand: str) -> tuple[Cell, int] | None:
    for d in _follow_candidates(heading, hand):
        dx, dy = NEIGHBORS8[d]
        x, y = pos[0] + dx, pos[1] + dy
        if _legal(state, x, y):
            return (x, y), d
    return None


def _entry_heading(bearing: int, hand: str) -> int:
    # rotate away from the chosen hand so the obstacle ahead lands on it
    return (bearing + 2) % 8 if hand == LEFT else (bearing - 2) % 8


def plan_step(ctx: NavContext, state: GameState, unit: Unit, target: Cell) -> MoveDecision:
    """Pick one legal step toward target, or stay.

    Mutates ctx.  The stall counter resets only when a step sets a new
    closest-ever approach to the current target; plain back-and-forth
    around a pocket therefore still counts as stalling, which is what
    eventually hands control to the contour follower.  The returned step
    is legal at decision time: in bounds, not impassable, unoccupied.
    """
    pos = (unit.x, unit.y)
    if pos == target:
        return MoveDecision(None, "greedy")
    d0 = _dist(pos, target)
    if ctx.best_target != target:
        ctx.best_target = target
        ctx.best_dist = d0
        ctx.stall_counter = 0
    decision = _decide(ctx, state, unit, target, pos, d0)
    if decision.step is None:
        ctx.stall_counter += 1
    else:
        nd = _dist(decision.step, target)
        if nd < ctx.best_dist - 1e-12:
            ctx.best_dist = nd
            ctx.stall_counter = 0
        else:
            ctx.stall_counter += 1
    return decision


def _decide(ctx: NavContext, state: GameState, unit: Unit, target: Cell,
            pos: Cell, d0: float) -> MoveDecision:
    legal = legal_steps(state, pos)
    if not legal:
        return MoveDecision(None, "blocked")

    improving = [c for c in legal if _dist(c, target) < d0 - 1e-12]

    if ctx.mode is not None:
        mode = ctx.mode
        if mode.target_at_entry != target:
            ctx.mode = None
        elif improving and d0 < mode.entry_dist - 1e-9:
            ctx.mode = None
        elif mode.steps > 0 and pos == mode.entry_cell:
            # came full circle around the contour: give the sweep tiers
            # another try rather than orbiting forever
            ctx.mode = None
        else:
            found = _follow_step(state, pos, mode.heading, mode.hand)
            if found is None:
                return MoveDecision(None, "blocked")
            cell, heading = found
            mode.heading = heading
            mode.steps += 1
            return MoveDecision(cell, "wall-follow")

    if improving:
        pher = state.pheromone[unit.army]
        w = state.config.nav.pheromone_weight
        width = state.terrain.width

        def score(c: Cell) -> float:
            return (d0 - _dist(c, target)) + w * pher.value(c[1] * width + c[0])

        best = max(improving, key=score)
        pure = max(improving, key=lambda c: d0 - _dist(c, target))
        reason = "pheromone" if best != pure else "greedy"
        return MoveDecision(best, reason)

    if ctx.stall_counter >= state.config.nav.stall_threshold:
        bearing = bearing_index(pos, target)
        hand = _choose_hand(state, pos, bearing, target)
        heading = _entry_heading(bearing, hand)
        ctx.mode = WallFollow(hand, pos, d0, target, heading)
        found = _follow_step(state, pos, heading, hand)
        if found is None:
            return MoveDecision(None, "blocked")
        cell, new_heading = found
        ctx.mode.heading = new_heading
        ctx.mode.steps = 1
        return MoveDecision(cell, "wall-follow")

    bearing = bearing_index(pos, target)
    for rot in (1, -1, 2, -2):
        dx, dy = NEIGHBORS8[(bearing + rot) % 8]
        x, y = pos[0] + dx, pos[1] + dy
        if _legal(state, x, y):
            return MoveDecision((x, y), "angle-sweep")
    return MoveDecision(None, "blocked")


def _choose_hand(state: GameState, pos: Cell, bearing: int, target: Cell) -> str:
    """Pick the follow hand whose first contour step lands closer to target."""
    left = _follow_step(state, pos, _entry_heading(bearing, LEFT), LEFT)
    right = _follow_step(state, pos, _entry_heading(bearing, RIGHT), RIGHT)
    if left is None:
        return RIGHT if right is not None else LEFT
    if right is None:
        return LEFT
    dl = _dist(left[0], target)
    dr = _dist(right[0], target)
    return RIGHT if dr < dl - 1e-12 else LEFT


def action_target(state: GameState, unit: Unit):
    """Resolve a unit's current order to a concrete movement target.

    Returns a cell, RANDOM_WALK, or STAY.
    """
    order = unit.current_order
    know = state.knowledge[unit.army]
    cfg = state.config

    if order == Action.NO_OPERATION:
        return STAY

    if order == Action.MOVE_FORWARD_OBJECTIVE:
        return know.enemy_flag_known if know.enemy_flag_known is not None else RANDOM_WALK

    if order == Action.MOVE_FORWARD_ENEMY:
        phi2 = cfg.visual_range_phi ** 2 + 1e-9
        best = None
        for other in state.units:
            if not other.alive or other.army is unit.army:
                continue
            dx, dy = other.x - unit.x, other.y - unit.y
            d2 = dx * dx + dy * dy
            if d2 <= phi2 and (best is None or (d2, other.id) < best[:2]):
                best = (d2, other.id, (other.x, other.y))
        if best is not None:
            return best[2]
        # fall back on the army's recent sighting density
        horizon = state.turn - cfg.nav.sighting_window
        counts: dict[int, int] = {}
        for t, idx in know.sightings:
            if t >= horizon:
                counts[idx] = counts.get(idx, 0) + 1
        if counts:
            best_idx = min(counts, key=lambda i: (-counts[i], i))
            return (best_idx % state.terrain.width, best_idx // state.terrain.width)
        return RANDOM_WALK

    if order == Action.GROUP_RUN_AWAY:
        phi2 = cfg.visual_range_phi ** 2 + 1e-9
        xs, ys, n = 0, 0, 0
        for other in state.units:
            if not other.alive or other.id == unit.id or other.army is not unit.army:
                continue
            dx, dy = other.x - unit.x, other.y - unit.y
            if dx * dx + dy * dy <= phi2:
                xs += other.x
                ys += other.y
                n += 1
        if n == 0:
            return state.flags[unit.army]
        cx = int(math.floor(xs / n + 0.5))
        cy = int(math.floor(ys / n + 0.5))
        return _nearest_passable(state, (cx, cy))

    if order == Action.EXPLORE:
        ctx = nav_context(state, unit)
        if ctx.explore_target is not None and know.explored[ctx.explore_target]:
            ctx.explore_target = None
        if ctx.explore_target is None:
            ctx.explore_target = _nearest_unexplored(state, unit)
            if ctx.explore_target is None:
                return STAY
        idx = ctx.explore_target
        return (idx % state.terrain.width, idx // state.terrain.width)

    if order == Action.PROTECT_FLAG:
        flag = state.flags[unit.army]
        g = cfg.nav.guard_radius
        # Chebyshev distance: the patrol ring is a square, so its corners
        # must still count as "near the flag"
        if max(abs(unit.x - flag[0]), abs(unit.y - flag[1])) > g:
            return flag
        return _ring_waypoint(state, (unit.x, unit.y), flag, g)

    raise ValueError(f"unknown order {order!r}")


def _nearest_passable(state: GameState, cell: Cell) -> Cell:
    if state.terrain.passable(*cell):
        return cell
    for dx, dy in scan_offsets(state.terrain.width, state.terrain.height):
        x, y = cell[0] + dx, cell[1] + dy
        if state.terrain.in_bounds(x, y) and state.terrain.passable(x, y):
            return (x, y)
    return cell


def _nearest_unexplored(state: GameState, unit: Unit) -> int | None:
    """Nearest unexplored cell index by Euclidean distance, row-major ties."""
    know = state.knowledge[unit.army]
    if not know.unexplored:
        return None
    w = state.terrain.width
    if len(know.unexplored) <= 512:
        ux, uy = unit.x, unit.y
        return min(
            know.unexplored,
            key=lambda i: ((i % w - ux) ** 2 + (i // w - uy) ** 2, i),
        )
    explored = know.explored
    h = state.terrain.height
    for dx, dy in scan_offsets(w, h):
        x, y = unit.x + dx, unit.y + dy
        if 0 <= x < w and 0 <= y < h and not explored[y * w + x]:
            return y * w + x
    return None


def _ring_waypoint(state: GameState, pos: Cell, flag: Cell, radius: int) -> Cell:
    """Next clockwise corner of the square patrol ring around the flag."""
    fx, fy = flag
    w, h = state.terrain.width, state.terrain.height
    corners = []
    for cx, cy in ((fx - radius, fy - radius), (fx + radius, fy - radius),
                   (fx + radius, fy + radius), (fx - radius, fy + radius)):
        cx = min(max(cx, 0), w - 1)
        cy = min(max(cy, 0), h - 1)
        corners.append(_nearest_passable(state, (cx, cy)))
    for i, corner in enumerate(corners):
        if corner == pos:
            return corners[(i + 1) % 4]
    return min(corners, key=lambda c: (_dist(pos, c), corners.index(c)))


def pheromone_update(state: GameState, traversals: list[tuple[Army, int, bool]]) -> None:
    """Deposit on cells vacated by units that gained ground, then decay.

    traversals: (army, vacated cell index, made-progress flag) per move,
    collected by the engine during the movement phase.  Every grid then
    decays by one multiplicative step, progress or not.
    """
    for army, idx, progress in traversals:
        if progress:
            state.pheromone[army].deposit(idx)
    for army in (Army.VP, Army.HP):
        state.pheromone[army].decay_step()
