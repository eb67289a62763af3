"""evogen: evolving constructive tile-level generators with NSGA-II.

The package interprets a small rule-based map-generation language, decodes
integer chromosomes into generator scripts through a fixed grammar, scores
generators by sampling levels against multi-objective fitness functions for
three benchmark problems (binary maze, dungeon, pushing puzzle), and searches
the generator space with NSGA-II.
"""

from .grid import (
    CATALOG,
    Level,
    Neighborhood,
    connected_regions,
    count_entity,
    count_regions,
    level_from_text,
    level_to_text,
    longest_shortest_path,
    neighborhood_positions,
    shortest_path_length,
)
from .script import (
    Condition,
    Executer,
    Explorer,
    GeneratorScript,
    NeighborhoodCheck,
    Noise,
    OrderKind,
    Rule,
    ScriptParseError,
    apply_executers,
    evaluate_condition,
    parse_script,
    run_explorer,
    run_script,
    serialize_script,
    validate_script,
    visit_sequence,
)
from .genome import (
    CHROMOSOME_LENGTH,
    GENE_VALUES,
    chromosome_from_text,
    chromosome_to_text,
    crossover,
    decode,
    mutate,
    random_chromosome,
    validate_chromosome,
)
from .seeding import sample_rng, sample_seed, splitmix64
from .problems import (
    BinaryMetrics,
    ObjectiveSpec,
    ProblemSpec,
    SokobanMetrics,
    ZeldaMetrics,
    binary_metrics,
    binary_problem,
    evaluate_generator,
    evaluate_script,
    fitness_vector,
    get_problem,
    init_map,
    scale_fitness,
    sokoban_metrics,
    sokoban_problem,
    zelda_metrics,
    zelda_problem,
)
from .sokoban import sokoban_solve
from .nsga2 import (
    EvolutionConfig,
    GenerationStats,
    Individual,
    crowding_distance,
    dominates,
    evolve,
    fast_nondominated_sort,
    stats_to_csv,
    tournament_select,
)

__version__ = "0.1.0"
