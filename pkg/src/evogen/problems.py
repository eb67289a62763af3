"""The three benchmark problems and generator-level evaluation.

Each problem declares its entity list (entity 0 is always the passable
"empty" tile that the connect order works on), its map size, the random
initialization distribution, and its objectives. A generator is scored by
sampling levels, scaling each raw metric into [0, 1], and averaging over the
samples.

Fitness scaling
---------------
``scale_fitness`` maps a raw value x onto [0, 1] so that the score grows as x
approaches the acceptable band [range_min, range_max] and is exactly 1 inside
it:

* x below the band scores ``x / range_min`` (so 0 scores 0),
* x above a finite band decays linearly, ``1 - (x - range_max) / (max_value -
  range_max)``, reaching 0 at the largest representable value,
* both tails clamp into [0, 1].

An alternative with the tails inverted (distance from the band scored
increasingly, not decreasingly) exists behind ``inverted_tails=True`` for
comparison only; it is not monotone toward the band and no evaluator uses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import sokoban
from .genome import decode
from .grid import Level, count_entity, count_regions, longest_shortest_path, shortest_path_length
from .script import GeneratorScript, run_script
from .seeding import sample_rng


@dataclass(frozen=True)
class ObjectiveSpec:
    """Scaling parameters of one objective (see scale_fitness)."""

    name: str
    range_min: float
    range_max: float
    max_value: float


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    entities: tuple[str, ...]
    glyphs: tuple[str, ...]
    width: int
    height: int
    init_distribution: tuple[float, ...]
    objectives: tuple[ObjectiveSpec, ...]

    @property
    def objective_names(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.objectives)


def scale_fitness(x: float, spec: ObjectiveSpec, inverted_tails: bool = False) -> float:
    """Scale a raw metric into [0, 1]; 1 exactly on [range_min, range_max]."""
    if spec.range_min <= x <= spec.range_max:
        return 1.0
    if x < spec.range_min:
        if inverted_tails:
            value = (spec.range_min - x) / spec.range_min if spec.range_min > 0 else 0.0
        else:
            value = x / spec.range_min if spec.range_min > 0 else 0.0
    else:
        span = spec.max_value - spec.range_max
        if not math.isfinite(span) or span <= 0:
            return 0.0
        if inverted_tails:
            value = (x - spec.range_max) / span
        else:
            value = 1.0 - (x - spec.range_max) / span
    return min(1.0, max(0.0, value))


# ---------------------------------------------------------------------------
# Problem definitions
# ---------------------------------------------------------------------------

def binary_problem() -> ProblemSpec:
    return ProblemSpec(
        name="binary",
        entities=("empty", "solid"),
        glyphs=(".", "#"),
        width=14,
        height=14,
        init_distribution=(0.5, 0.5),
        objectives=(
            ObjectiveSpec("regions", 1, 1, 10),
            ObjectiveSpec("path_improvement", 20, math.inf, math.inf),
        ),
    )


def zelda_problem() -> ProblemSpec:
    return ProblemSpec(
        name="zelda",
        entities=("empty", "solid", "player", "key", "door", "enemy"),
        glyphs=(".", "#", "@", "+", "D", "e"),
        width=11,
        height=7,
        init_distribution=(0.50, 0.25, 0.05, 0.05, 0.05, 0.10),
        objectives=(
            ObjectiveSpec("players", 1, 1, 10),
            ObjectiveSpec("keys", 1, 1, 10),
            ObjectiveSpec("doors", 1, 1, 10),
            ObjectiveSpec("enemies", 2, 4, 10),
            ObjectiveSpec("solution_length", 20, math.inf, math.inf),
        ),
    )


def sokoban_problem() -> ProblemSpec:
    return ProblemSpec(
        name="sokoban",
        entities=("empty", "solid", "player", "crate", "target"),
        glyphs=(".", "#", "@", "$", "x"),
        width=5,
        height=5,
        init_distribution=(0.45, 0.40, 0.05, 0.05, 0.05),
        objectives=(
            ObjectiveSpec("players", 1, 1, 10),
            ObjectiveSpec("crates", 2, 4, 10),
            ObjectiveSpec("abs_difference", 0, 0, 10),
            ObjectiveSpec("solution_length", 20, math.inf, math.inf),
        ),
    )


PROBLEM_FACTORIES = {
    "binary": binary_problem,
    "zelda": zelda_problem,
    "sokoban": sokoban_problem,
}


def get_problem(name: str) -> ProblemSpec:
    try:
        return PROBLEM_FACTORIES[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r} (choose from {sorted(PROBLEM_FACTORIES)})") from None


def init_map(problem: ProblemSpec, rng: np.random.Generator) -> Level:
    """Fill a fresh map with i.i.d. tiles from the problem's distribution."""
    draws = rng.choice(
        len(problem.entities),
        size=problem.width * problem.height,
        p=problem.init_distribution,
    )
    return Level(problem.width, problem.height, [int(d) for d in draws])


# ---------------------------------------------------------------------------
# Raw metrics
# ---------------------------------------------------------------------------

class BinaryMetrics(NamedTuple):
    regions: int
    path_improvement: int


class ZeldaMetrics(NamedTuple):
    players: int
    keys: int
    doors: int
    enemies: int
    solution_length: int


class SokobanMetrics(NamedTuple):
    players: int
    crates: int
    abs_difference: int
    solution_length: int


def binary_metrics(initial: Level, final: Level) -> BinaryMetrics:
    """Region count of the final map and the longest-shortest-path increase
    relative to the freshly initialized map (may be negative)."""
    regions = count_regions(final, 0)
    improvement = longest_shortest_path(final, 0) - longest_shortest_path(initial, 0)
    return BinaryMetrics(regions, improvement)


def _leg(level: Level, src, dst, blocked: frozenset[int]) -> int | None:
    return shortest_path_length(level, lambda e: e not in blocked, src, dst)


def zelda_metrics(level: Level, enemies_block: bool = False) -> ZeldaMetrics:
    """Entity counts plus the player->key->door path length.

    The solution length is defined only when there is exactly one player, key,
    and door and both legs are reachable; otherwise it is 0. Only solid tiles
    block movement by default; ``enemies_block=True`` makes enemy tiles block
    too, for comparison.
    """
    players = count_entity(level, 2)
    keys = count_entity(level, 3)
    doors = count_entity(level, 4)
    enemies = count_entity(level, 5)
    solution = 0
    if players == keys == doors == 1:
        blocked = frozenset((1, 5)) if enemies_block else frozenset((1,))
        w = level.width
        player = next(i for i, c in enumerate(level.cells) if c == 2)
        key = next(i for i, c in enumerate(level.cells) if c == 3)
        door = next(i for i, c in enumerate(level.cells) if c == 4)
        to_key = _leg(level, (player % w, player // w), (key % w, key // w), blocked)
        if to_key is not None:
            to_door = _leg(level, (key % w, key // w), (door % w, door // w), blocked)
            if to_door is not None:
                solution = to_key + to_door
    return ZeldaMetrics(players, keys, doors, enemies, solution)


def sokoban_metrics(
    level: Level,
    step_cap: int = sokoban.DEFAULT_STEP_CAP,
    node_cap: int = sokoban.DEFAULT_NODE_CAP,
) -> SokobanMetrics:
    """Counts, crate/target imbalance, and the minimum solution length.

    The solution length is the solver's minimum step count when the level has
    exactly one player and a positive, balanced number of crates; unsolvable
    or cap-exceeded levels (and levels failing those preconditions) score 0.
    """
    players = count_entity(level, 2)
    crates = count_entity(level, 3)
    targets = count_entity(level, 4)
    solution = 0
    if players == 1 and crates >= 1 and crates == targets:
        steps = sokoban.sokoban_solve(level, step_cap, node_cap)
        solution = steps if steps is not None else 0
    return SokobanMetrics(players, crates, abs(crates - targets), solution)


def raw_metrics(
    problem: ProblemSpec, initial: Level, final: Level
) -> BinaryMetrics | ZeldaMetrics | SokobanMetrics:
    if problem.name == "binary":
        return binary_metrics(initial, final)
    if problem.name == "zelda":
        return zelda_metrics(final)
    if problem.name == "sokoban":
        return sokoban_metrics(final)
    raise ValueError(f"no metric set for problem {problem.name!r}")


def fitness_vector(problem: ProblemSpec, initial: Level, final: Level) -> np.ndarray:
    """One sampled level's scaled objective vector, ordered per the problem."""
    metrics = raw_metrics(problem, initial, final)
    return np.array(
        [scale_fitness(getattr(metrics, o.name), o) for o in problem.objectives],
        dtype=np.float64,
    )


# ---------------------------------------------------------------------------
# Generator evaluation
# ---------------------------------------------------------------------------

def evaluate_script(
    script: GeneratorScript, problem: ProblemSpec, samples: int, seed_base: int | None = None
) -> np.ndarray:
    """Mean scaled objective vector over ``samples`` levels from the script.

    Sample i runs on the stream seeded from (seed_base, i); seed_base defaults
    to the script's own seed, which makes evaluation a pure function of the
    script.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    base = script.seed if seed_base is None else seed_base
    total = np.zeros(len(problem.objectives), dtype=np.float64)
    for i in range(samples):
        rng = sample_rng(base, i)
        level = init_map(problem, rng)
        initial = level.copy()
        run_script(script, level, rng)
        total += fitness_vector(problem, initial, level)
    return total / samples


def evaluate_generator(chromosome: np.ndarray, problem: ProblemSpec, samples: int) -> np.ndarray:
    """Decode and evaluate a chromosome (see evaluate_script)."""
    script = decode(chromosome, len(problem.entities))
    return evaluate_script(script, problem, samples)
