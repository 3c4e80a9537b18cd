"""Unit controllers as 24-entry action tables.

A controller maps a unit's perceived situation to one of six actions.
The situation is a mixed-radix number: health band (3 values) then three
boolean perceptions, giving 3*2*2*2 = 24 states and 6**24 possible
controllers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

STATE_COUNT = 24
ACTION_COUNT = 6


class Action(IntEnum):
    MOVE_FORWARD_ENEMY = 1
    GROUP_RUN_AWAY = 2
    MOVE_FORWARD_OBJECTIVE = 3
    NO_OPERATION = 4
    EXPLORE = 5
    PROTECT_FLAG = 6


class HealthLevel(IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2


class UnitPerception(NamedTuple):
    """What a single unit knows about its own situation.

    advantage: more living mates than rivals inside the visual range
    (the perceiving unit itself is not counted as a mate).
    under_attack: a living rival stands on one of the 8 neighbor cells.
    objective_visible: the army knows where the rival flag is.
    """

    health: HealthLevel
    advantage: bool
    under_attack: bool
    objective_visible: bool


def state_index(perception: UnitPerception) -> int:
    """Mixed-radix index of a perception, 0..23.

    Digit order is fixed (health, advantage, under_attack,
    objective_visible) with objective_visible varying fastest; this
    ordering is part of the on-disk controller format and must not
    change.
    """
    return (
        8 * int(perception.health)
        + 4 * int(perception.advantage)
        + 2 * int(perception.under_attack)
        + int(perception.objective_visible)
    )


def decode_state(index: int) -> UnitPerception:
    """Inverse of :func:`state_index`."""
    if not 0 <= index < STATE_COUNT:
        raise ValueError(f"state index out of range: {index}")
    return UnitPerception(
        health=HealthLevel(index // 8),
        advantage=bool((index // 4) % 2),
        under_attack=bool((index // 2) % 2),
        objective_visible=bool(index % 2),
    )


class MatrixError(ValueError):
    """Raised for malformed raw action tables."""

    def __init__(self, message: str, position: int | None = None, value=None):
        super().__init__(message)
        self.position = position
        self.value = value


@dataclass(frozen=True)
class AnswerMatrix:
    """An immutable 24-entry table: state index -> action."""

    cells: tuple[Action, ...]

    def __post_init__(self):
        if len(self.cells) != STATE_COUNT:
            raise MatrixError(f"expected {STATE_COUNT} cells, got {len(self.cells)}")

    def __getitem__(self, index: int) -> Action:
        return self.cells[index]

    def as_ints(self) -> list[int]:
        return [int(a) for a in self.cells]


def validate_matrix(raw) -> AnswerMatrix:
    """Build an AnswerMatrix from 24 raw integers, or raise MatrixError."""
    raw = list(raw)
    if len(raw) != STATE_COUNT:
        raise MatrixError(f"expected {STATE_COUNT} entries, got {len(raw)}")
    cells = []
    for pos, value in enumerate(raw):
        if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= ACTION_COUNT:
            raise MatrixError(f"bad action {value!r} at position {pos}", position=pos, value=value)
        cells.append(Action(value))
    return AnswerMatrix(tuple(cells))


def matrix_action(matrix: AnswerMatrix, perception: UnitPerception) -> Action:
    return matrix.cells[state_index(perception)]


def random_matrix(rng: random.Random) -> AnswerMatrix:
    return AnswerMatrix(tuple(Action(rng.randint(1, ACTION_COUNT)) for _ in range(STATE_COUNT)))


# Default expert policy.  Rules are applied top-down, first match wins:
#   1. objective known and not under attack        -> move on the flag
#   2. under attack with low health                -> regroup / run away
#   3. under attack with numbers on our side       -> engage
#   4. under attack, outnumbered                   -> regroup / run away
#   5. not under attack but numbers on our side    -> engage
#   6. otherwise                                   -> explore
# The table is frozen; tests/golden/rbp_matrix.json guards it.
def rbp_default() -> AnswerMatrix:
    cells = []
    for i in range(STATE_COUNT):
        p = decode_state(i)
        if p.objective_visible and not p.under_attack:
            a = Action.MOVE_FORWARD_OBJECTIVE
        elif p.under_attack and p.health == HealthLevel.LOW:
            a = Action.GROUP_RUN_AWAY
        elif p.under_attack and p.advantage:
            a = Action.MOVE_FORWARD_ENEMY
        elif p.under_attack and not p.advantage:
            a = Action.GROUP_RUN_AWAY
        elif p.advantage:
            a = Action.MOVE_FORWARD_ENEMY
        else:
            a = Action.EXPLORE
        cells.append(a)
    return AnswerMatrix(tuple(cells))
