"""Level rendering: glyph text (see grid.level_to_text) and small PPM images."""

from __future__ import annotations

from .grid import Level
from .problems import ProblemSpec

# Figure-style palette: walls black on white floor, actors in saturated colors.
ENTITY_COLORS = {
    "empty": (255, 255, 255),
    "solid": (0, 0, 0),
    "player": (40, 180, 40),
    "enemy": (210, 40, 40),
    "key": (230, 205, 40),
    "door": (40, 200, 200),
    "crate": (210, 40, 40),
    "target": (50, 70, 220),
}


def render_level_ppm(level: Level, problem: ProblemSpec, scale: int = 12) -> bytes:
    """Binary PPM (P6) image of the level, one scale x scale block per tile."""
    palette = [ENTITY_COLORS[name] for name in problem.entities]
    w = level.width * scale
    h = level.height * scale
    header = f"P6\n{w} {h}\n255\n".encode()
    rows = bytearray()
    for y in range(level.height):
        row = bytearray()
        for x in range(level.width):
            row.extend(bytes(palette[level.get(x, y)]) * scale)
        rows.extend(bytes(row) * scale)
    return header + bytes(rows)
