#!/usr/bin/env python3
"""Render docs/rbp_policy.md: the full default expert policy table."""

from pathlib import Path

from gridwar.strategy import Action, decode_state, rbp_default

ACTION_NAMES = {
    Action.MOVE_FORWARD_ENEMY: "MoveForwardEnemy (1)",
    Action.GROUP_RUN_AWAY: "GroupRunAway (2)",
    Action.MOVE_FORWARD_OBJECTIVE: "MoveForwardObjective (3)",
    Action.NO_OPERATION: "NoOperation (4)",
    Action.EXPLORE: "Explore (5)",
    Action.PROTECT_FLAG: "ProtectFlag (6)",
}

HEALTH = {0: "Low", 1: "Medium", 2: "High"}


def main() -> None:
    matrix = rbp_default()
    lines = [
        "# Default expert policy",
        "",
        "The shipped rule-based controller, frozen as a 24-entry action",
        "table. Rules, applied top-down (first match wins):",
        "",
        "1. objective known and not under attack -> MoveForwardObjective",
        "2. under attack with low health -> GroupRunAway",
        "3. under attack with advantage -> MoveForwardEnemy",
        "4. under attack without advantage -> GroupRunAway",
        "5. advantage without being attacked -> MoveForwardEnemy",
        "6. otherwise -> Explore",
        "",
        "| state | health | advantage | under attack | objective known | action |",
        "|------:|--------|-----------|--------------|-----------------|--------|",
    ]
    for i in range(24):
        p = decode_state(i)
        lines.append(
            f"| {i} | {HEALTH[int(p.health)]} | {'yes' if p.advantage else 'no'} "
            f"| {'yes' if p.under_attack else 'no'} "
            f"| {'yes' if p.objective_visible else 'no'} "
            f"| {ACTION_NAMES[matrix.cells[i]]} |"
        )
    lines.append("")
    out = Path(__file__).resolve().parent.parent / "docs" / "rbp_policy.md"
    out.parent.mkdir(exist_ok=True)
    out.write_text("\n".join(lines), encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
