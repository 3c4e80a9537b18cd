"""Turn execution and game resolution.

Each turn runs a fixed phase sequence:

  1. apply queued player (HP) group orders, rejecting dead/foreign ids;
  2. every living VP unit asks its controller for an order, given its
     fresh perception;
  3. units move, one step each, in ascending id order; entering a
     semi-impassable cell costs energy;
  4. combat: every unordered pair of living enemies on 8-adjacent cells
     fights one round, resolved in ascending (min id, max id) order; both
     draw from the game RNG, the lower draw takes the damage, exact ties
     are redrawn;
  5. units at zero health or energy are removed;
  6. fog update: the cells each army now sees become explored, rival
     flags and enemy positions are recorded;
  7. a living unit standing on the rival flag ends the game (if both
     armies manage it the same turn, the game is a draw);
  8. the turn counter advances.

The whole step is deterministic given the state and the order stream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import navigation
from .strategy import Action, AnswerMatrix, UnitPerception, matrix_action
from .world import (
    SEMI_IMPASSABLE,
    Army,
    CaptureInfo,
    GameState,
    MapData,
    Unit,
    WorldConfig,
    perceive,
    spawn_game,
)

Controller = Callable[[GameState, Unit, UnitPerception], Action]
OrderList = list[tuple[Iterable[int], Action]]


@dataclass
class TurnReport:
    turn: int
    events: list[dict] = field(default_factory=list)
    moves: int = 0
    combat_rounds: int = 0
    deaths: dict = field(default_factory=lambda: {Army.VP: 0, Army.HP: 0})
    capture: bool = False

    def to_json(self) -> dict:
        return {"turn": self.turn, "events": self.events}


@dataclass(frozen=True)
class Outcome:
    winner: str  # "vp" | "hp" | "draw"
    reason: str  # "flag-captured" | "damage-tiebreak" | "draw"
    deaths_hp: int
    deaths_vp: int
    movements: int
    turns: int

    def to_json(self) -> dict:
        return {
            "winner": self.winner,
            "reason": self.reason,
            "deaths_hp": self.deaths_hp,
            "deaths_vp": self.deaths_vp,
            "movements": self.movements,
            "turns": self.turns,
        }


def game_outcome(state: GameState) -> Outcome | None:
    """Outcome if the game is decided, else None.

    Flag capture decides immediately; otherwise, once the turn budget is
    spent, the army that inflicted more deaths wins, equal deaths draw.
    """
    if state.capture is not None:
        return Outcome(
            winner=state.capture.winner,
            reason="flag-captured",
            deaths_hp=state.deaths[Army.HP],
            deaths_vp=state.deaths[Army.VP],
            movements=state.movements,
            turns=state.turn,
        )
    if state.turn >= state.config.max_turns:
        dh, dv = state.deaths[Army.HP], state.deaths[Army.VP]
        if dh > dv:
            winner, reason = "vp", "damage-tiebreak"
        elif dv > dh:
            winner, reason = "hp", "damage-tiebreak"
        else:
            winner, reason = "draw", "draw"
        return Outcome(winner, reason, dh, dv, state.movements, state.turn)
    return None


def step_turn(state: GameState, hp_orders: OrderList, vp_controller: Controller) -> TurnReport:
    if game_outcome(state) is not None:
        raise RuntimeError("step_turn called on a decided game")
    report = TurnReport(turn=state.turn + 1)
    events = report.events

    # phase 1: player group orders
    for unit_ids, action in hp_orders:
        for uid in sorted(unit_ids):
            unit = state.units[uid] if 0 <= uid < len(state.units) else None
            if unit is None or not unit.alive:
                events.append({"kind": "order_rejected", "unit_id": uid,
                               "action": int(action), "reason": "dead"})
            elif unit.army is not Army.HP:
                events.append({"kind": "order_rejected", "unit_id": uid,
                               "action": int(action), "reason": "foreign"})
            else:
                unit.current_order = Action(action)
                events.append({"kind": "order", "unit_id": uid, "action": int(action)})

    # phase 2: controller orders for the VP army
    for unit in state.units:
        if unit.alive and unit.army is Army.VP:
            unit.current_order = vp_controller(state, unit, perceive(state, unit))

    # phase 3: movement, ascending id
    traversals: list[tuple[Army, int, bool]] = []
    width = state.terrain.width
    for unit in state.units:
        if not unit.alive:
            continue
        target = navigation.action_target(state, unit)
        if target is navigation.STAY:
            continue
        if target is navigation.RANDOM_WALK:
            options = navigation.legal_steps(state, (unit.x, unit.y))
            if not options:
                continue
            step = options[state.rng.randrange(len(options))]
            progress = False
        else:
            ctx = navigation.nav_context(state, unit)
            decision = navigation.plan_step(ctx, state, unit, target)
            if decision.step is None:
                continue
            step = decision.step
            tx, ty = target
            progress = ((step[0] - tx) ** 2 + (step[1] - ty) ** 2
                        < (unit.x - tx) ** 2 + (unit.y - ty) ** 2)
        from_idx = unit.y * width + unit.x
        state.occupancy[from_idx] = -1
        state.occupancy[step[1] * width + step[0]] = unit.id
        events.append({"kind": "move", "unit_id": unit.id,
                       "from": [unit.x, unit.y], "to": [step[0], step[1]]})
        unit.x, unit.y = step
        if state.terrain.kind(unit.x, unit.y) == SEMI_IMPASSABLE:
            unit.energy -= state.config.semi_impassable_energy_cost
        state.movements += 1
        state.movements_by_army[unit.army] += 1
        report.moves += 1
        traversals.append((unit.army, from_idx, progress))

    navigation.pheromone_update(state, traversals)

    # phase 4: combat between adjacent enemies
    def fighting(u: Unit) -> bool:
        return u.alive and u.health > 0 and u.energy > 0

    pairs: list[tuple[int, int]] = []
    terrain = state.terrain
    for unit in state.units:
        if not fighting(unit):
            continue
        for dx, dy in navigation.NEIGHBORS8:
            x, y = unit.x + dx, unit.y + dy
            if terrain.in_bounds(x, y):
                other = state.unit_at(x, y)
                if (other is not None and other.id > unit.id
                        and other.army is not unit.army and fighting(other)):
                    pairs.append((unit.id, other.id))
    pairs.sort()
    damage = state.config.combat_damage
    stat = state.config.combat_damage_stat
    for a_id, b_id in pairs:
        ua, ub = state.units[a_id], state.units[b_id]
        while True:
            ra = state.rng.random()
            rb = state.rng.random()
            if ra != rb:
                break
        loser = ua if ra < rb else ub
        if stat == "health":
            loser.health -= damage
        else:
            loser.energy -= damage
        report.combat_rounds += 1
        events.append({"kind": "combat", "unit_a": a_id, "unit_b": b_id,
                       "loser": loser.id, "damage": damage})

    # phase 5: deaths
    for unit in state.units:
        if unit.alive and (unit.health <= 0 or unit.energy <= 0):
            unit.alive = False
            state.occupancy[unit.y * width + unit.x] = -1
            state.deaths[unit.army] += 1
            report.deaths[unit.army] += 1
            events.append({"kind": "death", "unit_id": unit.id, "at": [unit.x, unit.y]})

    # phase 6: fog of war
    for unit in state.units:
        if unit.alive:
            state.sense_from(unit)
    state.record_sightings()

    # phase 7: flag capture
    capturing: list[Unit] = []
    for unit in state.units:
        if unit.alive and (unit.x, unit.y) == state.flags[unit.army.rival]:
            capturing.append(unit)
    if capturing:
        armies = {u.army for u in capturing}
        winner = "draw" if len(armies) == 2 else capturing[0].army.tag()
        state.capture = CaptureInfo(winner, state.turn + 1, [u.id for u in capturing])
        report.capture = True
        for unit in capturing:
            events.append({"kind": "capture", "unit_id": unit.id,
                           "at": [unit.x, unit.y], "army": unit.army.tag()})

    # phase 8
    state.turn += 1
    return report


def matrix_controller(matrix: AnswerMatrix) -> Controller:
    def controller(state: GameState, unit: Unit, perception: UnitPerception) -> Action:
        return matrix_action(matrix, perception)

    return controller


def matrix_order_driver(matrix: AnswerMatrix):
    """Per-turn HP order source that re-issues a matrix lookup for every
    living unit, used for headless model-vs-candidate games."""

    def driver(state: GameState) -> OrderList:
        return [
            ((unit.id,), matrix_action(matrix, perceive(state, unit)))
            for unit in state.units
            if unit.alive and unit.army is Army.HP
        ]

    return driver


class ReplayWriter:
    """Streams turn reports as JSON lines with stable key order."""

    def __init__(self, fh):
        self._fh = fh

    def write(self, report: TurnReport) -> None:
        self._fh.write(json.dumps(report.to_json(), sort_keys=True,
                                  separators=(",", ":")) + "\n")


def run_game(
    map_data: MapData,
    config: WorldConfig,
    seed: int,
    vp_controller: Controller,
    hp_driver: Callable[[GameState], OrderList] | None = None,
    replay: ReplayWriter | None = None,
    on_turn: Callable[[GameState, TurnReport], None] | None = None,
) -> tuple[Outcome, GameState]:
    """Simulate one full game to its outcome."""
    state = spawn_game(map_data, config, seed)
    while True:
        outcome = game_outcome(state)
        if outcome is not None:
            return outcome, state
        orders = hp_driver(state) if hp_driver is not None else []
        report = step_turn(state, orders, vp_controller)
        if replay is not None:
            replay.write(report)
        if on_turn is not None:
            on_turn(state, report)
