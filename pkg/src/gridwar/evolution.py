"""Between-games evolution of the machine army's controller.

A steady-state-flavored generational loop: rank, pick two parents by
roulette wheel, recombine with probability p_x, mutate, evaluate both
children by simulating a full headless game against the opponent model,
then truncate the (popsize + 2) pool back to popsize.  The incumbent
controller is seeded into the initial population, so the best fitness
never decreases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .engine import matrix_controller, matrix_order_driver, run_game
from .seeds import derive_seed
from .strategy import ACTION_COUNT, STATE_COUNT, Action, AnswerMatrix, random_matrix
from .world import MapData, WorldConfig


@dataclass(frozen=True)
class EAConfig:
    popsize: int = 50
    p_x: float = 0.7
    p_m: float = 0.01
    max_generations: int = 125
    evaluations_per_individual: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.popsize < 2:
            raise ValueError("popsize must be at least 2")
        for name in ("p_x", "p_m"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass(frozen=True)
class SimStats:
    """Telemetry of one offline game, the four fitness inputs."""

    a_deaths_model_army: int
    b_deaths_vp_army: int
    c_movements: int
    d_victory_degree: int  # 1 when the evolved side wins, 2 otherwise

    def __post_init__(self):
        if self.d_victory_degree not in (1, 2):
            raise ValueError("victory degree must be 1 or 2")
        if self.c_movements < 1:
            raise ValueError("movement count must be at least 1")


def fitness(stats: SimStats) -> float:
    """10000 * (A - B) / (C * D): rewards trading up, discounted on loss."""
    return (
        10000.0
        * (stats.a_deaths_model_army - stats.b_deaths_vp_army)
        / (stats.c_movements * stats.d_victory_degree)
    )


@dataclass
class EvaluatedIndividual:
    genome: AnswerMatrix
    fitness: float = 0.0
    eval_seed: int = 0


def play_game_off(
    model: AnswerMatrix,
    candidate: AnswerMatrix,
    map_data: MapData,
    config: WorldConfig,
    seed: int,
) -> SimStats:
    """One headless game: the model plays the HP side, the candidate the
    VP side, both as per-unit table lookups every turn."""
    outcome, _ = run_game(
        map_data,
        config,
        seed,
        vp_controller=matrix_controller(candidate),
        hp_driver=matrix_order_driver(model),
    )
    return SimStats(
        a_deaths_model_army=outcome.deaths_hp,
        b_deaths_vp_army=outcome.deaths_vp,
        c_movements=max(1, outcome.movements),
        d_victory_degree=1 if outcome.winner == "vp" else 2,
    )


def select_roulette(population: list[EvaluatedIndividual], rng: random.Random) -> EvaluatedIndividual:
    """Fitness-proportional pick after shifting scores to be positive.

    Weights are (f - f_min) + eps with eps = 0.001 * (f_max - f_min + 1),
    so negative fitness is fine and an all-equal population is uniform.
    """
    if not population:
        raise ValueError("empty population")
    fits = [ind.fitness for ind in population]
    f_min, f_max = min(fits), max(fits)
    eps = 0.001 * (f_max - f_min + 1.0)
    weights = [(f - f_min) + eps for f in fits]
    pick = rng.random() * sum(weights)
    acc = 0.0
    for ind, w in zip(population, weights):
        acc += w
        if pick < acc:
            return ind
    return population[-1]


def recombine(p1: AnswerMatrix, p2: AnswerMatrix, rng: random.Random) -> tuple[AnswerMatrix, AnswerMatrix]:
    """One-point crossover with a cut uniform in 1..23."""
    cut = rng.randint(1, STATE_COUNT - 1)
    c1 = AnswerMatrix(p1.cells[:cut] + p2.cells[cut:])
    c2 = AnswerMatrix(p2.cells[:cut] + p1.cells[cut:])
    return c1, c2


def mutate(genome: AnswerMatrix, p_m: float, rng: random.Random) -> AnswerMatrix:
    """Per gene, with probability p_m, replace the action with a uniform
    draw over the other five (never itself)."""
    cells = list(genome.cells)
    for i in range(STATE_COUNT):
        if rng.random() < p_m:
            others = [a for a in range(1, ACTION_COUNT + 1) if a != int(cells[i])]
            cells[i] = Action(others[rng.randrange(len(others))])
    return AnswerMatrix(tuple(cells))


@dataclass
class GenerationRecord:
    gen: int
    best_fitness: float
    mean_fitness: float
    best_genome: list[int]

    def to_json(self) -> dict:
        return {
            "gen": self.gen,
            "best_fitness": self.best_fitness,
            "mean_fitness": self.mean_fitness,
            "best_genome": self.best_genome,
        }


@dataclass
class EvolveResult:
    best: AnswerMatrix
    history: list[GenerationRecord] = field(default_factory=list)
    evaluations: int = 0


def evolve(
    player_model: AnswerMatrix,
    vp: AnswerMatrix,
    cfg: EAConfig,
    map_data: MapData,
    world_config: WorldConfig,
    on_generation=None,
) -> EvolveResult:
    """Full optimization run; returns the best genome found.

    Evaluation seeds derive from (cfg.seed, generation, slot), so reruns
    with the same inputs reproduce the same result exactly.  Interrupting
    the loop returns the best individual found so far.
    """
    rng = random.Random(derive_seed(cfg.seed, "ea"))
    evals = 0
    cache: dict[tuple, float] = {}

    def evaluate(genome: AnswerMatrix, eval_seed: int, reps: int = 1) -> float:
        # the stated evaluation budget is popsize + 2*generations*reps,
        # so repeat counts apply to children only
        nonlocal evals
        total = 0.0
        for r in range(reps):
            game_seed = eval_seed if reps == 1 else derive_seed(eval_seed, r)
            key = (genome.cells, game_seed)
            if key not in cache:
                cache[key] = fitness(play_game_off(player_model, genome, map_data,
                                                   world_config, game_seed))
            evals += 1
            total += cache[key]
        return total / reps

    population = [
        EvaluatedIndividual(random_matrix(rng)) for _ in range(cfg.popsize - 1)
    ]
    population.append(EvaluatedIndividual(vp))
    result = EvolveResult(best=vp)
    try:
        for i, ind in enumerate(population):
            ind.eval_seed = derive_seed(cfg.seed, "init", i)
            ind.fitness = evaluate(ind.genome, ind.eval_seed)
        for gen in range(cfg.max_generations):
            population.sort(key=lambda ind: ind.fitness, reverse=True)
            parent_1 = select_roulette(population, rng)
            parent_2 = select_roulette(population, rng)
            if rng.random() < cfg.p_x:
                child_1, child_2 = recombine(parent_1.genome, parent_2.genome, rng)
            else:
                child_1, child_2 = parent_1.genome, parent_2.genome
            child_1 = mutate(child_1, cfg.p_m, rng)
            child_2 = mutate(child_2, cfg.p_m, rng)
            children = []
            for slot, genome in enumerate((child_1, child_2)):
                seed = derive_seed(cfg.seed, "gen", gen, slot)
                score = evaluate(genome, seed, cfg.evaluations_per_individual)
                children.append(EvaluatedIndividual(genome, score, seed))
            # (popsize + 2) truncation; stable sort keeps incumbents on ties
            pool = population + children
            pool.sort(key=lambda ind: ind.fitness, reverse=True)
            population = pool[: cfg.popsize]
            fits = [ind.fitness for ind in population]
            rec = GenerationRecord(
                gen=gen + 1,
                best_fitness=max(fits),
                mean_fitness=sum(fits) / len(fits),
                best_genome=max(population, key=lambda i: i.fitness).genome.as_ints(),
            )
            result.history.append(rec)
            if on_generation is not None:
                on_generation(rec)
    except KeyboardInterrupt:
        pass
    best_fit = max(ind.fitness for ind in population)
    contenders = [ind for ind in population if ind.fitness == best_fit]
    result.best = contenders[rng.randrange(len(contenders))].genome
    result.evaluations = evals
    return result
