"""The restricted generator language: explorers that sweep a level in a fixed
order and rewrite tiles through first-match condition -> executer rules.

A generator script is an ordered list of at most five explorers plus a seed.
Each explorer visits tiles in one of four orders and, at every visited tile,
fires the executers of the first rule whose condition holds there (later rules
are not checked at that tile). Writes are applied immediately, so later visits
in the same pass see them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .grid import CATALOG, NEIGHBORHOOD_BY_NAME, Level, Position, _index_table, connected_regions

MAX_EXPLORERS = 5
MAX_RULES = 2
MAX_EXECUTERS = 2
SEED_RANGE = 50

COMPARATORS = (">", "<", "==", "!=")


class OrderKind(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    RANDOM = "random"
    CONNECT = "connect"


ORDER_KINDS = tuple(OrderKind)


@dataclass(frozen=True)
class NeighborhoodCheck:
    """Condition: count of ``entity`` cells in a neighborhood vs a threshold."""

    neighborhood: int
    entity: int
    comparator: str
    threshold: int


@dataclass(frozen=True)
class Noise:
    """Condition: true with fixed probability (one rng draw per evaluation)."""

    probability: float


Condition = NeighborhoodCheck | Noise


@dataclass(frozen=True)
class Executer:
    """Write ``entity`` into every in-bounds cell of a neighborhood."""

    neighborhood: int
    entity: int


@dataclass(frozen=True)
class Rule:
    condition: Condition
    executers: tuple[Executer, ...]


@dataclass(frozen=True)
class Explorer:
    order: OrderKind
    rules: tuple[Rule, ...]


@dataclass(frozen=True)
class GeneratorScript:
    explorers: tuple[Explorer, ...]
    seed: int


def validate_script(script: GeneratorScript, entity_count: int) -> None:
    """Raise ValueError if the script violates any structural invariant."""
    if not 1 <= len(script.explorers) <= MAX_EXPLORERS:
        raise ValueError(f"script must have 1..{MAX_EXPLORERS} explorers")
    if not 0 <= script.seed < SEED_RANGE:
        raise ValueError(f"seed must be in [0, {SEED_RANGE})")
    for explorer in script.explorers:
        if not isinstance(explorer.order, OrderKind):
            raise ValueError("unknown order kind")
        if not 1 <= len(explorer.rules) <= MAX_RULES:
            raise ValueError(f"explorer must have 1..{MAX_RULES} rules")
        for rule in explorer.rules:
            if not 1 <= len(rule.executers) <= MAX_EXECUTERS:
                raise ValueError(f"rule must have 1..{MAX_EXECUTERS} executers")
            cond = rule.condition
            if isinstance(cond, NeighborhoodCheck):
                if not 0 <= cond.neighborhood < len(CATALOG):
                    raise ValueError("condition neighborhood index out of range")
                if not 0 <= cond.entity < entity_count:
                    raise ValueError("condition entity out of range")
                if cond.comparator not in COMPARATORS:
                    raise ValueError(f"unknown comparator {cond.comparator!r}")
                if not 0 <= cond.threshold <= 9:
                    raise ValueError("threshold must be in [0, 9]")
            elif isinstance(cond, Noise):
                if not 0.0 <= cond.probability < 1.0:
                    raise ValueError("noise probability must be in [0, 1)")
            else:
                raise ValueError("unknown condition kind")
            for ex in rule.executers:
                if not 0 <= ex.neighborhood < len(CATALOG):
                    raise ValueError("executer neighborhood index out of range")
                if not 0 <= ex.entity < entity_count:
                    raise ValueError("executer entity out of range")


# ---------------------------------------------------------------------------
# Visit orders
# ---------------------------------------------------------------------------

def _l_path(a: Position, b: Position) -> list[Position]:
    """Tiles of the axis-aligned path a -> b, horizontal leg first, inclusive."""
    ax, ay = a
    bx, by = b
    path = [(x, ay) for x in _steps(ax, bx)]
    path.extend((bx, y) for y in _steps(ay, by)[1:])
    return path


def _steps(start: int, stop: int) -> list[int]:
    step = 1 if stop >= start else -1
    return list(range(start, stop + step, step))


def _connect_positions(level: Level) -> list[Position]:
    """Positions along axis-aligned paths joining the disconnected regions of
    entity 0 into the first region's group; empty when already connected.

    Regions are merged in discovery order. Each region connects to the closest
    tile (Manhattan distance, ties by row-major order of the pair) of the
    already-merged group, walking the horizontal leg first. Path tiles join the
    merged group, so later regions may connect to an earlier path.
    """
    regions = connected_regions(level, 0)
    if len(regions) <= 1:
        return []
    w = level.width
    # work on sorted row-major flat keys so the distance tie-break (smallest
    # merged tile, then smallest region tile) falls out of a lexsort
    merged = np.array(sorted(y * w + x for x, y in regions[0]), dtype=np.int64)
    out: list[Position] = []
    for region in regions[1:]:
        reg = np.array(sorted(y * w + x for x, y in region), dtype=np.int64)
        dist = np.abs(merged[:, None] % w - reg[None, :] % w) + np.abs(
            merged[:, None] // w - reg[None, :] // w
        )
        ai, bi = np.nonzero(dist == dist.min())
        pick = np.lexsort((reg[bi], merged[ai]))[0]
        a_flat = int(merged[ai[pick]])
        b_flat = int(reg[bi[pick]])
        path = _l_path((a_flat % w, a_flat // w), (b_flat % w, b_flat // w))
        if len(path) > 2:
            out.extend(path)
        path_keys = np.array([y * w + x for x, y in path], dtype=np.int64)
        merged = np.unique(np.concatenate((merged, reg, path_keys)))
    return out


def visit_sequence(order: OrderKind, level: Level, rng: np.random.Generator) -> list[Position]:
    """The ordered tile positions an explorer visits.

    horizontal is a row-major scan, vertical column-major, random a uniformly
    shuffled permutation of all tiles (consumes the rng), and connect yields
    the tiles of paths joining disconnected entity-0 regions (no rng use).
    """
    w, h = level.width, level.height
    if order is OrderKind.HORIZONTAL:
        return [(x, y) for y in range(h) for x in range(w)]
    if order is OrderKind.VERTICAL:
        return [(x, y) for x in range(w) for y in range(h)]
    if order is OrderKind.RANDOM:
        perm = rng.permutation(w * h)
        return [(int(i) % w, int(i) // w) for i in perm]
    if order is OrderKind.CONNECT:
        return _connect_positions(level)
    raise ValueError(f"unknown order {order!r}")


# ---------------------------------------------------------------------------
# Interpreter
# ---------------------------------------------------------------------------

def evaluate_condition(
    cond: Condition, level: Level, pos: Position, rng: np.random.Generator
) -> bool:
    """Whether a rule condition holds at ``pos``.

    Neighborhood checks compare the count of matching cells in the clipped
    neighborhood against the threshold; noise draws one uniform number.
    """
    if isinstance(cond, Noise):
        return rng.random() < cond.probability
    table = _index_table(level.width, level.height, cond.neighborhood)
    cells = level.cells
    entity = cond.entity
    count = 0
    for i in table[pos[1] * level.width + pos[0]]:
        if cells[i] == entity:
            count += 1
    return _compare(count, cond.comparator, cond.threshold)


def _compare(count: int, comparator: str, threshold: int) -> bool:
    if comparator == ">":
        return count > threshold
    if comparator == "<":
        return count < threshold
    if comparator == "==":
        return count == threshold
    return count != threshold


def apply_executers(execs: tuple[Executer, ...], level: Level, pos: Position) -> None:
    """Apply each executer in order: write its entity over its neighborhood."""
    w = level.width
    cells = level.cells
    flat = pos[1] * w + pos[0]
    for ex in execs:
        table = _index_table(w, level.height, ex.neighborhood)
        entity = ex.entity
        for i in table[flat]:
            cells[i] = entity


def run_explorer(explorer: Explorer, level: Level, rng: np.random.Generator) -> None:
    """Run one explorer pass over the level, mutating it in place.

    At each visited tile the rules are tried in order and only the first one
    whose condition holds fires. Writes are immediate, so the pass sees its
    own earlier modifications.
    """
    positions = visit_sequence(explorer.order, level, rng)
    w, h = level.width, level.height
    cells = level.cells

    # Pre-resolve per-rule lookup tables once per pass; the per-tile loop
    # below is the hot path of every generator evaluation.
    compiled = []
    for rule in explorer.rules:
        cond = rule.condition
        execs = tuple((_index_table(w, h, ex.neighborhood), ex.entity) for ex in rule.executers)
        if isinstance(cond, Noise):
            compiled.append((None, cond.probability, None, None, None, execs))
        else:
            compiled.append(
                (
                    _index_table(w, h, cond.neighborhood),
                    None,
                    cond.entity,
                    cond.comparator,
                    cond.threshold,
                    execs,
                )
            )

    rand = rng.random
    for x, y in positions:
        flat = y * w + x
        for table, prob, entity, comparator, threshold, execs in compiled:
            if table is None:
                fired = rand() < prob
            else:
                count = 0
                for i in table[flat]:
                    if cells[i] == entity:
                        count += 1
                if comparator == ">":
                    fired = count > threshold
                elif comparator == "<":
                    fired = count < threshold
                elif comparator == "==":
                    fired = count == threshold
                else:
                    fired = count != threshold
            if fired:
                for ex_table, ex_entity in execs:
                    for i in ex_table[flat]:
                        cells[i] = ex_entity
                break


def run_script(script: GeneratorScript, level: Level, rng: np.random.Generator) -> None:
    """Run every explorer in script order on the shared level (in place).

    The rng stream is consumed sequentially across explorers, so the whole run
    is a deterministic function of (script, input level, rng state).
    """
    for explorer in script.explorers:
        run_explorer(explorer, level, rng)


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

class ScriptParseError(ValueError):
    """Malformed script text; ``location`` points at the offending element."""

    def __init__(self, location: str, reason: str):
        self.location = location
        self.reason = reason
        super().__init__(f"{location}: {reason}")


def _format_condition(cond: Condition, entity_names: Sequence[str]) -> str:
    if isinstance(cond, Noise):
        return f"noise({cond.probability:g})"
    name = CATALOG[cond.neighborhood].name
    return f"{name}({entity_names[cond.entity]}) {cond.comparator} {cond.threshold}"


def serialize_script(script: GeneratorScript, entity_names: Sequence[str]) -> str:
    """Render a script as its JSON text form (see parse_script)."""
    doc = {
        "seed": script.seed,
        "explorers": [
            {
                "order": explorer.order.value,
                "rules": [
                    {
                        "condition": _format_condition(rule.condition, entity_names),
                        "executers": [
                            {
                                "neighborhood": CATALOG[ex.neighborhood].name,
                                "entity": entity_names[ex.entity],
                            }
                            for ex in rule.executers
                        ],
                    }
                    for rule in explorer.rules
                ],
            }
            for explorer in script.explorers
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def _parse_condition(text: str, entity_names: Sequence[str], loc: str) -> Condition:
    text = text.strip()
    if text.startswith("noise(") and text.endswith(")"):
        body = text[len("noise(") : -1]
        try:
            p = float(body)
        except ValueError:
            raise ScriptParseError(loc, f"bad noise probability {body!r}") from None
        if not 0.0 <= p < 1.0:
            raise ScriptParseError(loc, f"noise probability {p} outside [0, 1)")
        return Noise(p)
    head, sep, rest = text.partition(")")
    if not sep or "(" not in head:
        raise ScriptParseError(loc, f"malformed condition {text!r}")
    name, _, entity = head.partition("(")
    if name not in NEIGHBORHOOD_BY_NAME:
        raise ScriptParseError(loc, f"unknown neighborhood {name!r}")
    if entity not in entity_names:
        raise ScriptParseError(loc, f"unknown entity {entity!r}")
    parts = rest.split()
    if len(parts) != 2:
        raise ScriptParseError(loc, f"expected '<comparator> <threshold>' after {head!r})")
    comparator, threshold_text = parts
    if comparator not in COMPARATORS:
        raise ScriptParseError(loc, f"unknown comparator {comparator!r}")
    try:
        threshold = int(threshold_text)
    except ValueError:
        raise ScriptParseError(loc, f"bad threshold {threshold_text!r}") from None
    if not 0 <= threshold <= 9:
        raise ScriptParseError(loc, f"threshold {threshold} outside [0, 9]")
    return NeighborhoodCheck(
        NEIGHBORHOOD_BY_NAME[name], list(entity_names).index(entity), comparator, threshold
    )


def parse_script(text: str, entity_names: Sequence[str]) -> GeneratorScript:
    """Parse the JSON text form back into a GeneratorScript.

    Raises ScriptParseError naming the element and reason on malformed input;
    parse(serialize(s)) is structurally equal to s.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScriptParseError(f"offset {exc.pos}", exc.msg) from None
    if not isinstance(doc, dict):
        raise ScriptParseError("document", "expected a JSON object")
    seed = doc.get("seed")
    if not isinstance(seed, int) or not 0 <= seed < SEED_RANGE:
        raise ScriptParseError("seed", f"expected an integer in [0, {SEED_RANGE})")
    raw_explorers = doc.get("explorers")
    if not isinstance(raw_explorers, list) or not raw_explorers:
        raise ScriptParseError("explorers", "expected a non-empty list")
    if len(raw_explorers) > MAX_EXPLORERS:
        raise ScriptParseError("explorers", f"{len(raw_explorers)} explorers exceed the limit of {MAX_EXPLORERS}")
    explorers = []
    order_values = {o.value: o for o in OrderKind}
    for i, raw_explorer in enumerate(raw_explorers):
        loc = f"explorers[{i}]"
        if not isinstance(raw_explorer, dict):
            raise ScriptParseError(loc, "expected an object")
        order = raw_explorer.get("order")
        if order not in order_values:
            raise ScriptParseError(f"{loc}.order", f"unknown order {order!r}")
        raw_rules = raw_explorer.get("rules")
        if not isinstance(raw_rules, list) or not 1 <= len(raw_rules) <= MAX_RULES:
            raise ScriptParseError(f"{loc}.rules", f"expected 1..{MAX_RULES} rules")
        rules = []
        for j, raw_rule in enumerate(raw_rules):
            rloc = f"{loc}.rules[{j}]"
            if not isinstance(raw_rule, dict) or "condition" not in raw_rule:
                raise ScriptParseError(rloc, "expected an object with a condition")
            condition = _parse_condition(str(raw_rule["condition"]), entity_names, f"{rloc}.condition")
            raw_execs = raw_rule.get("executers")
            if not isinstance(raw_execs, list) or not 1 <= len(raw_execs) <= MAX_EXECUTERS:
                raise ScriptParseError(f"{rloc}.executers", f"expected 1..{MAX_EXECUTERS} executers")
            executers = []
            for k, raw_exec in enumerate(raw_execs):
                eloc = f"{rloc}.executers[{k}]"
                if not isinstance(raw_exec, dict):
                    raise ScriptParseError(eloc, "expected an object")
                nbhd = raw_exec.get("neighborhood")
                if nbhd not in NEIGHBORHOOD_BY_NAME:
                    raise ScriptParseError(f"{eloc}.neighborhood", f"unknown neighborhood {nbhd!r}")
                entity = raw_exec.get("entity")
                if entity not in entity_names:
                    raise ScriptParseError(f"{eloc}.entity", f"unknown entity {entity!r}")
                executers.append(
                    Executer(NEIGHBORHOOD_BY_NAME[nbhd], list(entity_names).index(entity))
                )
            rules.append(Rule(condition, tuple(executers)))
        explorers.append(Explorer(order_values[order], tuple(rules)))
    return GeneratorScript(tuple(explorers), seed)
