"""Minimum-step Sokoban solving by breadth-first search over push states.

States are (player position, crate position set); actions are the four
cardinal player moves, where stepping into a crate pushes it iff the cell
beyond is in-bounds, non-solid, and crate-free. The search is exact: it
returns the minimum number of player moves, or None when no solution exists
within the step and node caps.
"""

from __future__ import annotations

from collections import deque

import numpy as np
from numba import njit

from .grid import Level

SOLID = 1
PLAYER = 2
CRATE = 3
TARGET = 4

DEFAULT_STEP_CAP = 60
DEFAULT_NODE_CAP = 10**6

# numba path encodes crate sets as int64 bit masks and packs (mask, player)
# into one key; beyond this cell count fall back to the generic search
_MASK_LIMIT = 56


@njit(cache=True)
def _solve_masked(
    width: int,
    height: int,
    solid_mask: np.int64,
    player: np.int64,
    crate_mask: np.int64,
    target_mask: np.int64,
    step_cap: np.int64,
    node_cap: np.int64,
) -> np.int64:
    """Returns min steps, -1 if exhausted without a solution, -2 on cap hit."""
    if crate_mask == target_mask:
        return 0
    n = width * height
    move = np.full((4, n), -1, dtype=np.int64)
    for i in range(n):
        if solid_mask >> i & 1:
            continue
        x = i % width
        y = i // width
        if x > 0 and not solid_mask >> (i - 1) & 1:
            move[0, i] = i - 1
        if x + 1 < width and not solid_mask >> (i + 1) & 1:
            move[1, i] = i + 1
        if y > 0 and not solid_mask >> (i - width) & 1:
            move[2, i] = i - width
        if y + 1 < height and not solid_mask >> (i + width) & 1:
            move[3, i] = i + width

    start = (crate_mask << 6) | player
    seen = {start}
    frontier = [start]
    depth = np.int64(0)
    nodes = np.int64(0)
    while len(frontier) > 0:
        depth += 1
        if depth > step_cap:
            return -2
        nxt = [np.int64(0) for _ in range(0)]
        for state in frontier:
            p = state & 63
            cm = state >> 6
            nodes += 1
            if nodes > node_cap:
                return -2
            for d in range(4):
                q = move[d, p]
                if q < 0:
                    continue
                if cm >> q & 1:
                    r = move[d, q]
                    if r < 0 or (cm >> r & 1):
                        continue
                    ncm = (cm & ~(np.int64(1) << q)) | (np.int64(1) << r)
                    if ncm == target_mask:
                        return depth
                    key = (ncm << 6) | q
                else:
                    key = (cm << 6) | q
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    return -1


def _solve_generic(width, height, solid, player, crates, targets, step_cap, node_cap):
    """Pure-python variant of the same search for grids too large to mask."""
    if crates == targets:
        return 0
    n = width * height

    def moves(i):
        x, y = i % width, i // width
        out = []
        if x > 0:
            out.append(i - 1)
        if x + 1 < width:
            out.append(i + 1)
        if y > 0:
            out.append(i - width)
        if y + 1 < height:
            out.append(i + width)
        return [j for j in out if j not in solid]

    move_table = [moves(i) if i not in solid else [] for i in range(n)]
    start = (player, crates)
    seen = {start}
    frontier = deque([start])
    depth = 0
    nodes = 0
    while frontier:
        depth += 1
        if depth > step_cap:
            return None
        for _ in range(len(frontier)):
            p, cm = frontier.popleft()
            nodes += 1
            if nodes > node_cap:
                return None
            for q in move_table[p]:
                if q in cm:
                    dx = q - p
                    r = q + dx
                    # a horizontal push must not wrap to the next row
                    if abs(dx) == 1 and r // width != q // width:
                        continue
                    if not 0 <= r < n or r in solid or r in cm:
                        continue
                    ncm = (cm - {q}) | {r}
                    if ncm == targets:
                        return depth
                    state = (q, ncm)
                else:
                    state = (q, cm)
                if state not in seen:
                    seen.add(state)
                    frontier.append(state)
    return None


def sokoban_solve(
    level: Level,
    step_cap: int = DEFAULT_STEP_CAP,
    node_cap: int = DEFAULT_NODE_CAP,
    *,
    solid: int = SOLID,
    player: int = PLAYER,
    crate: int = CRATE,
    target: int = TARGET,
) -> int | None:
    """Minimum player moves to put every crate on a target, or None.

    Requires exactly one player and equal, non-zero crate and target counts;
    None covers both unsolvable levels and searches cut off by the caps.
    """
    cells = level.cells
    players = [i for i, c in enumerate(cells) if c == player]
    crates = frozenset(i for i, c in enumerate(cells) if c == crate)
    targets = frozenset(i for i, c in enumerate(cells) if c == target)
    if len(players) != 1:
        raise ValueError(f"expected exactly one player, found {len(players)}")
    if not crates or len(crates) != len(targets):
        raise ValueError("crate and target counts must be equal and non-zero")

    n = level.width * level.height
    if n <= _MASK_LIMIT:
        solid_mask = 0
        crate_mask = 0
        target_mask = 0
        for i, c in enumerate(cells):
            if c == solid:
                solid_mask |= 1 << i
        for i in crates:
            crate_mask |= 1 << i
        for i in targets:
            target_mask |= 1 << i
        steps = _solve_masked(
            level.width,
            level.height,
            np.int64(solid_mask),
            np.int64(players[0]),
            np.int64(crate_mask),
            np.int64(target_mask),
            np.int64(step_cap),
            np.int64(node_cap),
        )
        return None if steps < 0 else int(steps)
    solid_set = frozenset(i for i, c in enumerate(cells) if c == solid)
    return _solve_generic(
        level.width, level.height, solid_set, players[0], crates, targets, step_cap, node_cap
    )
