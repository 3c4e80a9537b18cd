"""Scripted stand-ins for the human player.

A persona issues group orders for the HP army the way a player would:
it re-decides for a unit whenever that unit's perceived state changes,
and each issued order is recorded into the behavior model at issue time.
Units keep executing their last order in between, so long-lived orders
are not over-counted.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable

from . import modeling
from .strategy import (
    Action,
    AnswerMatrix,
    HealthLevel,
    UnitPerception,
    matrix_action,
    rbp_default,
    state_index,
)
from .world import Army, GameState, perceive

PersonaPolicy = Callable[[UnitPerception, random.Random], Action]


@dataclass(frozen=True)
class Persona:
    name: str
    policy_for_game: Callable[[int], PersonaPolicy]  # 1-based game index


def _matrix_policy(matrix: AnswerMatrix) -> PersonaPolicy:
    def policy(perception: UnitPerception, rng: random.Random) -> Action:
        return matrix_action(matrix, perception)

    return policy


def _aggressor(perception: UnitPerception, rng: random.Random) -> Action:
    if perception.health == HealthLevel.LOW:
        return Action.GROUP_RUN_AWAY
    return Action.MOVE_FORWARD_ENEMY


def _turtle(perception: UnitPerception, rng: random.Random) -> Action:
    if perception.objective_visible:
        return Action.MOVE_FORWARD_OBJECTIVE
    return Action.PROTECT_FLAG


def _noisy(base: PersonaPolicy, rho: float) -> PersonaPolicy:
    def policy(perception: UnitPerception, rng: random.Random) -> Action:
        if rho > 0.0 and rng.random() < rho:
            return Action(rng.randint(1, 6))
        return base(perception, rng)

    return policy


def matrix_persona(name: str, matrix: AnswerMatrix) -> Persona:
    return Persona(name, lambda game: _matrix_policy(matrix))


def persona_policy(name: str) -> Persona:
    """Look up a built-in persona by name.

    Built-ins: rbp-mirror, aggressor, turtle, random(rho), drifter(g).
    """
    if name == "rbp-mirror":
        return matrix_persona(name, rbp_default())
    if name == "aggressor":
        return Persona(name, lambda game: _aggressor)
    if name == "turtle":
        return Persona(name, lambda game: _turtle)
    m = re.fullmatch(r"random\(([0-9.]+)\)", name)
    if m:
        rho = float(m.group(1))
        if not 0.0 <= rho <= 1.0:
            raise ValueError(f"persona noise must be in [0, 1]: {name}")
        base = _matrix_policy(rbp_default())
        return Persona(name, lambda game: _noisy(base, rho))
    m = re.fullmatch(r"drifter\((\d+)\)", name)
    if m:
        period = int(m.group(1))
        if period < 1:
            raise ValueError(f"drifter period must be >= 1: {name}")

        def for_game(game: int) -> PersonaPolicy:
            block = (game - 1) // period
            return _aggressor if block % 2 == 0 else _turtle

        return Persona(name, for_game)
    raise ValueError(f"unknown persona: {name}")


class PersonaDriver:
    """Feeds persona orders into the engine one turn at a time.

    Issues (and optionally records) an order for a unit whenever the
    unit's state index differs from the one it was last ordered under.
    """

    def __init__(
        self,
        persona: Persona,
        game_index: int,
        rng: random.Random,
        recorder: modeling.ExtendedAnswerMatrix | None = None,
    ):
        self.policy = persona.policy_for_game(game_index)
        self.rng = rng
        self.recorder = recorder
        self._last_state: dict[int, int] = {}

    def __call__(self, state: GameState) -> list[tuple[tuple[int, ...], Action]]:
        orders = []
        for unit in state.units:
            if not unit.alive or unit.army is not Army.HP:
                continue
            perception = perceive(state, unit)
            idx = state_index(perception)
            if self._last_state.get(unit.id) != idx:
                action = self.policy(perception, self.rng)
                self._last_state[unit.id] = idx
                if self.recorder is not None:
                    modeling.record(self.recorder, perception, action)
                orders.append(((unit.id,), action))
        return orders
