"""Tile grids, the neighborhood catalog, and the graph utilities on top of them.

Levels are dense 2D grids of small integer entity ids, stored row-major.
Positions are ``(x, y)`` pairs with ``x`` the column and ``y`` the row;
``y`` grows downward, so "up" is ``(0, -1)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from numba import njit
from scipy import ndimage

Position = tuple[int, int]


class Level:
    """A width x height grid of entity ids (row-major flat list)."""

    __slots__ = ("width", "height", "cells")

    def __init__(self, width: int, height: int, cells: Sequence[int] | None = None, fill: int = 0):
        if width < 1 or height < 1:
            raise ValueError("level dimensions must be >= 1")
        self.width = width
        self.height = height
        if cells is None:
            self.cells = [fill] * (width * height)
        else:
            cells = list(cells)
            if len(cells) != width * height:
                raise ValueError(f"expected {width * height} cells, got {len(cells)}")
            self.cells = cells

    def get(self, x: int, y: int) -> int:
        return self.cells[y * self.width + x]

    def set(self, x: int, y: int, entity: int) -> None:
        self.cells[y * self.width + x] = entity

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def copy(self) -> "Level":
        return Level(self.width, self.height, list(self.cells))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.cells, dtype=np.int16).reshape(self.height, self.width)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Level)
            and self.width == other.width
            and self.height == other.height
            and self.cells == other.cells
        )

    def __repr__(self) -> str:
        return f"Level({self.width}x{self.height})"


def level_to_text(level: Level, glyphs: Sequence[str]) -> str:
    """Render a level as one line of glyphs per row."""
    rows = []
    for y in range(level.height):
        row = level.cells[y * level.width : (y + 1) * level.width]
        rows.append("".join(glyphs[e] for e in row))
    return "\n".join(rows) + "\n"


def level_from_text(text: str, glyphs: Sequence[str]) -> Level:
    """Parse the textual level form; raises ValueError on unknown glyphs or ragged rows."""
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise ValueError("empty level text")
    width = len(lines[0])
    lookup = {g: i for i, g in enumerate(glyphs)}
    cells: list[int] = []
    for y, line in enumerate(lines):
        if len(line) != width:
            raise ValueError(f"row {y} has length {len(line)}, expected {width}")
        for x, ch in enumerate(line):
            if ch not in lookup:
                raise ValueError(f"unknown glyph {ch!r} at row {y}, column {x}")
            cells.append(lookup[ch])
    return Level(width, len(lines), cells)


# ---------------------------------------------------------------------------
# Neighborhoods
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Neighborhood:
    """A named set of (dx, dy) offsets relative to a center tile."""

    name: str
    offsets: tuple[Position, ...]


def _window(radius: int, keep: Callable[[int, int], bool]) -> tuple[Position, ...]:
    return tuple(
        (dx, dy)
        for dy in range(-radius, radius + 1)
        for dx in range(-radius, radius + 1)
        if keep(dx, dy)
    )


# Fixed catalog of the 18 neighborhoods, in decode order. Entries span the
# 1x1, 3x3 and 5x5 windows; the order is part of the genotype-phenotype map
# and must not change.
CATALOG: tuple[Neighborhood, ...] = (
    Neighborhood("self", ((0, 0),)),
    Neighborhood("up", ((0, -1),)),
    Neighborhood("down", ((0, 1),)),
    Neighborhood("left", ((-1, 0),)),
    Neighborhood("right", ((1, 0),)),
    Neighborhood("all_3x3", _window(1, lambda dx, dy: True)),
    Neighborhood("ring_3x3", _window(1, lambda dx, dy: (dx, dy) != (0, 0))),
    Neighborhood("plus_3x3", _window(1, lambda dx, dy: abs(dx) + abs(dy) <= 1)),
    Neighborhood("cardinal_3x3", _window(1, lambda dx, dy: abs(dx) + abs(dy) == 1)),
    Neighborhood("diagonal_3x3", _window(1, lambda dx, dy: abs(dx) == 1 and abs(dy) == 1)),
    Neighborhood("horizontal_3", ((-1, 0), (0, 0), (1, 0))),
    Neighborhood("vertical_3", ((0, -1), (0, 0), (0, 1))),
    Neighborhood("all_5x5", _window(2, lambda dx, dy: True)),
    Neighborhood("ring_5x5", _window(2, lambda dx, dy: max(abs(dx), abs(dy)) == 2)),
    Neighborhood("plus_5x5", _window(2, lambda dx, dy: abs(dx) + abs(dy) <= 2)),
    Neighborhood("cardinal_5x5", _window(2, lambda dx, dy: (dx == 0) != (dy == 0))),
    Neighborhood("diagonal_5x5", _window(2, lambda dx, dy: abs(dx) == abs(dy) and dx != 0)),
    Neighborhood("horizontal_5", ((-2, 0), (-1, 0), (0, 0), (1, 0), (2, 0))),
)

NEIGHBORHOOD_BY_NAME = {n.name: i for i, n in enumerate(CATALOG)}


def neighborhood_positions(
    catalog: Sequence[Neighborhood], index: int, center: Position, level: Level
) -> list[Position]:
    """Absolute positions of a neighborhood at ``center``, out-of-bounds dropped."""
    cx, cy = center
    out = []
    for dx, dy in catalog[index].offsets:
        x, y = cx + dx, cy + dy
        if 0 <= x < level.width and 0 <= y < level.height:
            out.append((x, y))
    return out


@lru_cache(maxsize=None)
def _index_table(width: int, height: int, nbhd_index: int) -> tuple[tuple[int, ...], ...]:
    """Per-center tuples of in-bounds flat cell indices for one catalog entry.

    Shared by the interpreter's condition counts and executer writes; cached
    per grid size since maps within a run share dimensions.
    """
    offsets = CATALOG[nbhd_index].offsets
    table = []
    for i in range(width * height):
        cx, cy = i % width, i // width
        idxs = []
        for dx, dy in offsets:
            x, y = cx + dx, cy + dy
            if 0 <= x < width and 0 <= y < height:
                idxs.append(y * width + x)
        table.append(tuple(idxs))
    return tuple(table)


# ---------------------------------------------------------------------------
# Counting, regions, paths
# ---------------------------------------------------------------------------

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def count_entity(level: Level, entity: int) -> int:
    """Number of cells equal to ``entity``."""
    return level.cells.count(entity)


def count_regions(level: Level, entity: int) -> int:
    """Number of 4-connected components of cells equal to ``entity``."""
    match = level.to_array() == entity
    if not match.any():
        return 0
    _, n = ndimage.label(match, structure=_CROSS)
    return int(n)


def connected_regions(level: Level, entity: int) -> list[set[Position]]:
    """4-connected components of cells matching ``entity``.

    Components are returned in discovery order (row-major order of each
    component's first cell); they are disjoint and cover every matching cell.
    """
    match = level.to_array() == entity
    if not match.any():
        return []
    labels, n = ndimage.label(match, structure=_CROSS)
    flat = labels.ravel()
    groups: list[list[int]] = [[] for _ in range(n + 1)]
    for i in np.flatnonzero(flat):
        groups[flat[i]].append(int(i))
    groups = sorted((g for g in groups[1:] if g), key=lambda g: g[0])
    w = level.width
    return [{(i % w, i // w) for i in g} for g in groups]


def shortest_path_length(
    level: Level,
    passable: Callable[[int], bool],
    start: Position,
    goal: Position,
) -> int | None:
    """Minimum number of cardinal steps from ``start`` to ``goal`` across
    passable cells, or None if unreachable or either endpoint is blocked."""
    w, h = level.width, level.height
    cells = level.cells
    si = start[1] * w + start[0]
    gi = goal[1] * w + goal[0]
    if not passable(cells[si]) or not passable(cells[gi]):
        return None
    if si == gi:
        return 0
    dist = [-1] * (w * h)
    dist[si] = 0
    queue = deque([si])
    while queue:
        u = queue.popleft()
        du = dist[u]
        x, y = u % w, u // w
        for v in (u - 1 if x > 0 else -1,
                  u + 1 if x + 1 < w else -1,
                  u - w if y > 0 else -1,
                  u + w if y + 1 < h else -1):
            if v >= 0 and dist[v] < 0 and passable(cells[v]):
                if v == gi:
                    return du + 1
                dist[v] = du + 1
                queue.append(v)
    return None


@njit(cache=True)
def _max_pairwise_bfs(open_cells: np.ndarray, width: int, height: int) -> int:
    """Max over all open-cell pairs of their BFS distance (one BFS per cell)."""
    n = width * height
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    best = 0
    for s in range(n):
        if open_cells[s] == 0:
            continue
        for i in range(n):
            dist[i] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if du > best:
                best = du
            x = u % width
            y = u // width
            if x > 0 and open_cells[u - 1] != 0 and dist[u - 1] < 0:
                dist[u - 1] = du + 1
                queue[tail] = u - 1
                tail += 1
            if x + 1 < width and open_cells[u + 1] != 0 and dist[u + 1] < 0:
                dist[u + 1] = du + 1
                queue[tail] = u + 1
                tail += 1
            if y > 0 and open_cells[u - width] != 0 and dist[u - width] < 0:
                dist[u - width] = du + 1
                queue[tail] = u - width
                tail += 1
            if y + 1 < height and open_cells[u + width] != 0 and dist[u + width] < 0:
                dist[u + width] = du + 1
                queue[tail] = u + width
                tail += 1
    return best


def longest_shortest_path(level: Level, entity: int) -> int:
    """Graph pseudo-diameter of the cells matching ``entity``: the largest
    shortest-path distance between any two matching cells in the same
    4-connected region. 0 when fewer than two cells match."""
    open_cells = np.asarray([1 if c == entity else 0 for c in level.cells], dtype=np.uint8)
    return int(_max_pairwise_bfs(open_cells, level.width, level.height))
