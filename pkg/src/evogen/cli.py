"""Command-line interface: evolve generators, evaluate and sample them, and
build random baselines. All commands are batch-style and bit-deterministic
given their seeds; exit code 0 on success, 1 on usage errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .genome import chromosome_from_text, chromosome_to_text, decode, random_chromosome
from .grid import level_to_text
from .nsga2 import EvolutionConfig, evolve, stats_to_csv
from .problems import PROBLEM_FACTORIES, evaluate_script, get_problem, init_map
from .render import render_level_ppm
from .script import GeneratorScript, ScriptParseError, parse_script, run_script, serialize_script
from .seeding import sample_rng


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Run configuration (flat "key = value" text)
# ---------------------------------------------------------------------------

CONFIG_DEFAULTS = {
    "problem": "binary",
    "population": 500,
    "generations": 2000,
    "crossover_rate": 0.7,
    "mutation_rate": 0.3,
    "samples": 50,
    "seed": 0,
    "output_dir": "run",
    "render_count": 4,
    "render_images": False,
}

_CONFIG_PARSERS = {
    "problem": str,
    "population": int,
    "generations": int,
    "crossover_rate": float,
    "mutation_rate": float,
    "samples": int,
    "seed": int,
    "output_dir": str,
    "render_count": int,
    "render_images": lambda s: {"true": True, "false": False}[s.lower()],
}


def parse_run_config(text: str) -> dict:
    """Parse the flat config format; unknown keys are rejected by name."""
    config = dict(CONFIG_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_PARSERS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        try:
            config[key] = _CONFIG_PARSERS[key](value)
        except (ValueError, KeyError):
            raise UsageError(f"config line {lineno}: bad value {value!r} for key {key!r}") from None
    if config["problem"] not in PROBLEM_FACTORIES:
        raise UsageError(
            f"config: unknown problem {config['problem']!r} (choose from {sorted(PROBLEM_FACTORIES)})"
        )
    return config


def _echo_config(config: dict) -> str:
    lines = [f"{key} = {config[key]}" for key in CONFIG_DEFAULTS]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_evolve(config_path: str) -> Path:
    config = parse_run_config(Path(config_path).read_text())
    problem = get_problem(config["problem"])
    evo = EvolutionConfig(
        problem=config["problem"],
        population_size=config["population"],
        generations=config["generations"],
        crossover_rate=config["crossover_rate"],
        mutation_rate=config["mutation_rate"],
        samples_per_eval=config["samples"],
        master_seed=config["seed"],
    )
    _, stats, archive = evolve(evo, problem)

    out = Path(config["output_dir"])
    scripts_dir = out / "scripts"
    scripts_dir.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(_echo_config(config))
    (out / "stats.csv").write_text(stats_to_csv(stats, problem.objective_names))

    fitness_lines = [",".join(("script",) + problem.objective_names)]
    for index, individual in enumerate(archive):
        name = f"front0_{index:03d}.json"
        script = decode(individual.chromosome, len(problem.entities))
        (scripts_dir / name).write_text(serialize_script(script, problem.entities))
        (scripts_dir / f"front0_{index:03d}.chromosome.txt").write_text(
            chromosome_to_text(individual.chromosome)
        )
        fitness_lines.append(",".join([name] + [repr(float(v)) for v in individual.fitness]))
    (out / "front_fitness.csv").write_text("\n".join(fitness_lines) + "\n")

    if config["render_count"] > 0:
        renders = out / "renders"
        renders.mkdir(exist_ok=True)
        for index, individual in enumerate(archive):
            script = decode(individual.chromosome, len(problem.entities))
            for i in range(config["render_count"]):
                level = _sample_level(script, problem, script.seed, i)
                stem = renders / f"front0_{index:03d}_s{i}"
                stem.with_suffix(".txt").write_text(level_to_text(level, problem.glyphs))
                if config["render_images"]:
                    stem.with_suffix(".ppm").write_bytes(render_level_ppm(level, problem))
    return out


def _sample_level(script: GeneratorScript, problem, seed_base: int, index: int):
    rng = sample_rng(seed_base, index)
    level = init_map(problem, rng)
    run_script(script, level, rng)
    return level


def _load_script(args, problem) -> GeneratorScript:
    if args.script:
        text = Path(args.script).read_text()
        try:
            return parse_script(text, problem.entities)
        except ScriptParseError as exc:
            raise UsageError(f"{args.script}: {exc}") from None
    text = Path(args.chromosome).read_text()
    try:
        genes = chromosome_from_text(text)
    except ValueError as exc:
        raise UsageError(f"{args.chromosome}: {exc}") from None
    return decode(genes, len(problem.entities))


def cmd_eval(args) -> str:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    problem = get_problem(args.problem)
    script = _load_script(args, problem)
    fitness = evaluate_script(script, problem, args.samples, seed_base=args.seed)
    lines = [f"{name}={float(v)!r}" for name, v in zip(problem.objective_names, fitness)]
    return "\n".join(lines) + "\n"


def cmd_sample(args) -> list[Path]:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    problem = get_problem(args.problem)
    script = _load_script(args, problem)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i in range(args.count):
        level = _sample_level(script, problem, args.seed, i)
        path = out / f"sample_{i:03d}.txt"
        path.write_text(level_to_text(level, problem.glyphs))
        written.append(path)
        if args.render:
            image = out / f"sample_{i:03d}.ppm"
            image.write_bytes(render_level_ppm(level, problem))
            written.append(image)
    return written


def cmd_baseline(args) -> str:
    if args.n < 1 or args.samples < 1:
        raise UsageError("--n and --samples must be >= 1")
    problem = get_problem(args.problem)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    lines = [",".join(("generator",) + problem.objective_names)]
    for index in range(args.n):
        genes = random_chromosome(rng)
        script = decode(genes, len(problem.entities))
        fitness = evaluate_script(script, problem, args.samples)
        lines.append(",".join([str(index)] + [repr(float(v)) for v in fitness]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Argument parsing and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evogen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="run an evolution and archive its Pareto front")
    p_evolve.add_argument("--config", required=True, help="flat key = value config file")

    p_eval = sub.add_parser("eval", help="print a generator's fitness vector")
    p_eval.add_argument("--problem", required=True, choices=sorted(PROBLEM_FACTORIES))
    group = p_eval.add_mutually_exclusive_group(required=True)
    group.add_argument("--script", help="script JSON file")
    group.add_argument("--chromosome", help="chromosome text file (102 integers)")
    p_eval.add_argument("--samples", type=int, default=50)
    p_eval.add_argument("--seed", type=int, default=None,
                        help="override the script's stored seed for sampling")

    p_sample = sub.add_parser("sample", help="write rendered levels from a script")
    p_sample.add_argument("--problem", required=True, choices=sorted(PROBLEM_FACTORIES))
    p_sample.add_argument("--script", required=True)
    p_sample.add_argument("--count", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--render", action="store_true", help="also write PPM images")
    p_sample.add_argument("--out", default=".", help="output directory")
    p_sample.set_defaults(chromosome=None)

    p_base = sub.add_parser("baseline", help="fitness CSV of randomly drawn generators")
    p_base.add_argument("--problem", required=True, choices=sorted(PROBLEM_FACTORIES))
    p_base.add_argument("--n", type=int, required=True)
    p_base.add_argument("--samples", type=int, required=True)
    p_base.add_argument("--seed", type=int, required=True)
    p_base.add_argument("--out", default=None, help="write the CSV here instead of stdout")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "evolve":
            out = cmd_evolve(args.config)
            print(out)
        elif args.command == "eval":
            sys.stdout.write(cmd_eval(args))
        elif args.command == "sample":
            cmd_sample(args)
        elif args.command == "baseline":
            csv_text = cmd_baseline(args)
            if args.out:
                Path(args.out).write_text(csv_text)
            else:
                sys.stdout.write(csv_text)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
