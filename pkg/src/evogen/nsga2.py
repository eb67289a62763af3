"""NSGA-II: fast non-dominated sorting, crowding distance, crowded binary
tournament, and the elitist generational loop.

All objectives are maximized. Runs are fully deterministic given the master
seed: selection and variation draw from one master stream in a fixed order,
while fitness evaluation derives its randomness from each chromosome's own
seed gene.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .genome import crossover, mutate, random_chromosome
from .problems import ProblemSpec, evaluate_generator, get_problem


@dataclass
class Individual:
    chromosome: np.ndarray
    fitness: np.ndarray
    rank: int = -1
    crowding: float = 0.0


@dataclass(frozen=True)
class EvolutionConfig:
    problem: str = "binary"
    population_size: int = 500
    generations: int = 2000
    crossover_rate: float = 0.7
    mutation_rate: float = 0.3
    tournament_size: int = 2
    samples_per_eval: int = 50
    master_seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.tournament_size != 2:
            raise ValueError("tournament_size is fixed at 2")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    num_fronts: int
    front0_size: int
    best: tuple[float, ...]
    mean: tuple[float, ...]


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff a is at least as good everywhere and strictly better somewhere."""
    if len(a) != len(b):
        raise ValueError("fitness vectors must have equal length")
    return bool(np.all(a >= b) and np.any(a > b))


def fast_nondominated_sort(population: list[Individual]) -> list[list[int]]:
    """Partition the population into Pareto fronts (index lists, best first).

    Front 0 is the non-dominated set; front k is non-dominated once fronts
    below k are removed. Ranks are written back onto the individuals.
    """
    fitness = np.stack([ind.fitness for ind in population])
    ge = (fitness[:, None, :] >= fitness[None, :, :]).all(axis=-1)
    gt = (fitness[:, None, :] > fitness[None, :, :]).any(axis=-1)
    dominated_by = (ge & gt).sum(axis=0).astype(np.int64)  # how many dominate each
    dom = ge & gt

    fronts: list[list[int]] = []
    current = np.flatnonzero(dominated_by == 0)
    while current.size:
        fronts.append([int(i) for i in current])
        dominated_by[current] = -1
        dominated_by -= dom[current].sum(axis=0)
        current = np.flatnonzero(dominated_by == 0)

    for rank, front in enumerate(fronts):
        for i in front:
            population[i].rank = rank
    return fronts


def crowding_distance(front: list[Individual]) -> np.ndarray:
    """NSGA-II crowding distances for one front (written back as well).

    Per objective the boundary individuals get +inf and interior ones
    accumulate the normalized gap between their sorted neighbors; objectives
    with zero spread are skipped. Fronts of one or two individuals are all
    boundary.
    """
    k = len(front)
    if k <= 2:
        distances = np.full(k, np.inf)
    else:
        fitness = np.stack([ind.fitness for ind in front])
        distances = np.zeros(k)
        for m in range(fitness.shape[1]):
            order = np.argsort(fitness[:, m], kind="stable")
            lo = fitness[order[0], m]
            hi = fitness[order[-1], m]
            if hi <= lo:
                continue
            distances[order[0]] = distances[order[-1]] = np.inf
            distances[order[1:-1]] += (fitness[order[2:], m] - fitness[order[:-2], m]) / (hi - lo)
    for ind, d in zip(front, distances):
        ind.crowding = float(d)
    return distances


def tournament_select(population: list[Individual], rng: np.random.Generator) -> Individual:
    """Crowded binary tournament: lower rank wins, then larger crowding, then
    a fair coin. Contestants are drawn with replacement."""
    i, j = rng.integers(len(population), size=2)
    a, b = population[int(i)], population[int(j)]
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    if a.crowding != b.crowding:
        return a if a.crowding > b.crowding else b
    return a if rng.random() < 0.5 else b


def _assign_ranks_and_crowding(population: list[Individual]) -> list[list[int]]:
    fronts = fast_nondominated_sort(population)
    for front in fronts:
        crowding_distance([population[i] for i in front])
    return fronts


def _evaluate_all(
    chromosomes: list[np.ndarray], problem: ProblemSpec, samples: int
) -> list[Individual]:
    return [
        Individual(chromosome, evaluate_generator(chromosome, problem, samples))
        for chromosome in chromosomes
    ]


def evolve(
    config: EvolutionConfig, problem: ProblemSpec | None = None
) -> tuple[list[Individual], list[GenerationStats], list[Individual]]:
    """Run the generational loop; returns (population, stats, front-0 archive).

    Each generation breeds population_size offspring from crowded binary
    tournaments (unit-swap crossover with probability crossover_rate, else
    cloning; then one-site mutation per child with probability mutation_rate),
    evaluates them, and keeps the best population_size of parents + offspring,
    filling front by front and truncating the split front by descending
    crowding distance (ties by merged-population index).
    """
    if problem is None:
        problem = get_problem(config.problem)
    n = config.population_size
    rng = np.random.Generator(np.random.PCG64(config.master_seed))

    chromosomes = [random_chromosome(rng) for _ in range(n)]
    population = _evaluate_all(chromosomes, problem, config.samples_per_eval)
    fronts = _assign_ranks_and_crowding(population)

    stats: list[GenerationStats] = []
    for generation in range(1, config.generations + 1):
        offspring_chromosomes: list[np.ndarray] = []
        while len(offspring_chromosomes) < n:
            parent_a = tournament_select(population, rng)
            parent_b = tournament_select(population, rng)
            if rng.random() < config.crossover_rate:
                child_a, child_b = crossover(parent_a.chromosome, parent_b.chromosome, rng)
            else:
                child_a, child_b = parent_a.chromosome.copy(), parent_b.chromosome.copy()
            if rng.random() < config.mutation_rate:
                child_a = mutate(child_a, rng)
            if rng.random() < config.mutation_rate:
                child_b = mutate(child_b, rng)
            offspring_chromosomes.append(child_a)
            offspring_chromosomes.append(child_b)
        del offspring_chromosomes[n:]

        offspring = _evaluate_all(offspring_chromosomes, problem, config.samples_per_eval)
        merged = population + offspring
        merged_fronts = _assign_ranks_and_crowding(merged)

        survivors: list[Individual] = []
        for front in merged_fronts:
            if len(survivors) + len(front) <= n:
                survivors.extend(merged[i] for i in front)
            else:
                need = n - len(survivors)
                ordered = sorted(front, key=lambda i: (-merged[i].crowding, i))
                survivors.extend(merged[i] for i in ordered[:need])
                break
        population = survivors
        fronts = _assign_ranks_and_crowding(population)

        fitness = np.stack([ind.fitness for ind in population])
        stats.append(
            GenerationStats(
                generation=generation,
                num_fronts=len(fronts),
                front0_size=len(fronts[0]),
                best=tuple(float(v) for v in fitness.max(axis=0)),
                mean=tuple(float(v) for v in fitness.mean(axis=0)),
            )
        )

    archive = [population[i] for i in fronts[0]]
    return population, stats, archive


def stats_to_csv(stats: list[GenerationStats], objective_names: tuple[str, ...]) -> str:
    """Render per-generation statistics as the stats CSV."""
    header = ["generation", "num_fronts", "front0_size"]
    header += [f"best_{name}" for name in objective_names]
    header += [f"mean_{name}" for name in objective_names]
    lines = [",".join(header)]
    for row in stats:
        fields = [str(row.generation), str(row.num_fronts), str(row.front0_size)]
        fields += [repr(v) for v in row.best]
        fields += [repr(v) for v in row.mean]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"
