"""Observed-behavior model of the opposing player.

Counts which action the player ordered in each of the 24 unit states;
normalized rows give per-state action probabilities, and the argmax per
row collapses the model into a deterministic controller.
"""

from __future__ import annotations

from .strategy import (
    ACTION_COUNT,
    STATE_COUNT,
    Action,
    AnswerMatrix,
    UnitPerception,
    state_index,
)


class ExtendedAnswerMatrix:
    """24x6 observation counts: counts[state][action-1]."""

    def __init__(self, counts: list[list[int]] | None = None):
        if counts is None:
            self.counts = [[0] * ACTION_COUNT for _ in range(STATE_COUNT)]
        else:
            if len(counts) != STATE_COUNT or any(len(r) != ACTION_COUNT for r in counts):
                raise ValueError(f"counts must be {STATE_COUNT}x{ACTION_COUNT}")
            if any(c < 0 for row in counts for c in row):
                raise ValueError("counts must be non-negative")
            self.counts = [list(r) for r in counts]

    @property
    def total_observations(self) -> int:
        return sum(sum(row) for row in self.counts)

    def copy(self) -> "ExtendedAnswerMatrix":
        return ExtendedAnswerMatrix(self.counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtendedAnswerMatrix) and self.counts == other.counts


def record(model: ExtendedAnswerMatrix, perception: UnitPerception, action: Action) -> None:
    """Count one ordered action under the ordering unit's own perception.

    A group order over n units produces n record calls, one per unit.
    """
    model.counts[state_index(perception)][int(action) - 1] += 1


def probabilities(model: ExtendedAnswerMatrix, index: int) -> list[float] | None:
    """Action distribution for one state, or None while unobserved."""
    if not 0 <= index < STATE_COUNT:
        raise ValueError(f"state index out of range: {index}")
    row = model.counts[index]
    total = sum(row)
    if total == 0:
        return None
    return [c / total for c in row]


def extract_policy(model: ExtendedAnswerMatrix, fallback: AnswerMatrix) -> AnswerMatrix:
    """Argmax per observed row, ties to the lowest action number;
    unobserved rows copy the fallback."""
    cells = []
    for i in range(STATE_COUNT):
        row = model.counts[i]
        if sum(row) == 0:
            cells.append(fallback.cells[i])
        else:
            best = max(range(ACTION_COUNT), key=lambda a: (row[a], -a))
            cells.append(Action(best + 1))
    return AnswerMatrix(tuple(cells))


def merge(a: ExtendedAnswerMatrix, b: ExtendedAnswerMatrix) -> ExtendedAnswerMatrix:
    """Element-wise sum; commutative and associative."""
    return ExtendedAnswerMatrix(
        [[a.counts[i][j] + b.counts[i][j] for j in range(ACTION_COUNT)]
         for i in range(STATE_COUNT)]
    )
