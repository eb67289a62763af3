"""Integer genotype and its grammar-guided decoding into generator scripts.

A chromosome is 102 integers in [0, 49]: gene 0 picks the explorer count
(1 + gene mod 5), gene 1 is the script seed, and each of the five following
20-gene blocks encodes one explorer. Decoding expands a fixed non-recursive
grammar depth-first; every non-terminal with two or more options consumes the
next gene of the block (mod the option count), wrapping around inside the
block when the derivation needs more than 20 genes. Decoding is total: every
chromosome yields a valid script.
"""

from __future__ import annotations

import numpy as np

from .script import (
    COMPARATORS,
    Executer,
    Explorer,
    GeneratorScript,
    NeighborhoodCheck,
    Noise,
    ORDER_KINDS,
    Rule,
)
from .grid import CATALOG

CHROMOSOME_LENGTH = 102
GENE_VALUES = 50
BLOCK_LENGTH = 20
BLOCK_COUNT = 5


def validate_chromosome(genes: np.ndarray) -> None:
    genes = np.asarray(genes)
    if genes.shape != (CHROMOSOME_LENGTH,):
        raise ValueError(f"chromosome must have exactly {CHROMOSOME_LENGTH} genes")
    if genes.min() < 0 or genes.max() >= GENE_VALUES:
        raise ValueError(f"genes must lie in [0, {GENE_VALUES})")


def random_chromosome(rng: np.random.Generator) -> np.ndarray:
    """102 i.i.d. uniform genes in [0, 49]."""
    return rng.integers(0, GENE_VALUES, size=CHROMOSOME_LENGTH, dtype=np.int64)


class _BlockReader:
    """Yields a block's genes left to right, wrapping cyclically."""

    def __init__(self, block):
        self.block = block
        self.cursor = 0

    def take(self) -> int:
        g = int(self.block[self.cursor % BLOCK_LENGTH])
        self.cursor += 1
        return g


def _decode_explorer(block, entity_count: int) -> Explorer:
    reader = _BlockReader(block)
    order = ORDER_KINDS[reader.take() % len(ORDER_KINDS)]
    n_rules = 1 + reader.take() % 2
    rules = []
    for _ in range(n_rules):
        if reader.take() % 2 == 0:
            neighborhood = reader.take() % len(CATALOG)
            entity = reader.take() % entity_count
            comparator = COMPARATORS[reader.take() % len(COMPARATORS)]
            threshold = reader.take() % 10
            condition = NeighborhoodCheck(neighborhood, entity, comparator, threshold)
        else:
            condition = Noise((reader.take() % 10) / 10)
        n_execs = 1 + reader.take() % 2
        executers = tuple(
            Executer(reader.take() % len(CATALOG), reader.take() % entity_count)
            for _ in range(n_execs)
        )
        rules.append(Rule(condition, executers))
    return Explorer(order, tuple(rules))


def decode(genes: np.ndarray, entity_count: int) -> GeneratorScript:
    """Decode a chromosome into a generator script (total, deterministic)."""
    if entity_count < 2:
        raise ValueError("entity_count must be >= 2")
    n_explorers = 1 + int(genes[0]) % BLOCK_COUNT
    seed = int(genes[1])
    explorers = tuple(
        _decode_explorer(genes[2 + i * BLOCK_LENGTH : 2 + (i + 1) * BLOCK_LENGTH], entity_count)
        for i in range(n_explorers)
    )
    return GeneratorScript(explorers, seed)


# ---------------------------------------------------------------------------
# Genetic operators
# ---------------------------------------------------------------------------

# Swappable units: the count gene, the seed gene, and the five explorer blocks.
_UNITS = [(0, 1), (1, 2)] + [
    (2 + i * BLOCK_LENGTH, 2 + (i + 1) * BLOCK_LENGTH) for i in range(BLOCK_COUNT)
]


def crossover(
    a: np.ndarray, b: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Swap one uniformly chosen unit (count gene, seed gene, or one explorer
    block) between copies of the parents."""
    lo, hi = _UNITS[int(rng.integers(len(_UNITS)))]
    child_a = a.copy()
    child_b = b.copy()
    child_a[lo:hi] = b[lo:hi]
    child_b[lo:hi] = a[lo:hi]
    return child_a, child_b


def mutate(genes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Replace one uniformly chosen gene with a fresh uniform value (which may
    coincide with the old one)."""
    out = genes.copy()
    i = int(rng.integers(CHROMOSOME_LENGTH))
    out[i] = int(rng.integers(GENE_VALUES))
    return out


# ---------------------------------------------------------------------------
# File form: one line of 102 space-separated integers
# ---------------------------------------------------------------------------

def chromosome_to_text(genes: np.ndarray) -> str:
    return " ".join(str(int(g)) for g in genes) + "\n"


def chromosome_from_text(text: str) -> np.ndarray:
    parts = text.split()
    try:
        genes = np.array([int(p) for p in parts], dtype=np.int64)
    except ValueError as exc:
        raise ValueError(f"chromosome text: {exc}") from None
    validate_chromosome(genes)
    return genes
