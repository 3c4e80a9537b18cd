"""Grid-world war RTS engine with on-line opponent modeling and an
evolutionary controller that adapts between games."""

__version__ = "0.1.0"

from .strategy import (
    Action,
    AnswerMatrix,
    HealthLevel,
    UnitPerception,
    decode_state,
    matrix_action,
    rbp_default,
    state_index,
    validate_matrix,
)
from .world import (
    Army,
    GameState,
    MapData,
    Terrain,
    WorldConfig,
    load_map,
    perceive,
    spawn_game,
    visual_range,
)
from .engine import Outcome, game_outcome, matrix_controller, run_game, step_turn
from .modeling import ExtendedAnswerMatrix, extract_policy, merge, probabilities, record
from .evolution import EAConfig, SimStats, evolve, fitness, mutate, play_game_off, recombine, select_roulette
from .personas import Persona, persona_policy
from .pmea import PmeaConfig, run_experiment, run_pmea
