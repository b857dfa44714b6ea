"""Command-line entry point: ``multiplex-graphlets <subcommand> ...``.

Exit codes:
    0: success
    2: input error (unreadable or malformed documents, mismatching schemas)
    3: configuration error (invalid parameters, missing --seed, exceeded caps)
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn

import networkx as nx
import pandas as pd
from pydantic import ValidationError

from multiplex_graphlets import __version__
from multiplex_graphlets.atlas import global_columns, orbit_table
from multiplex_graphlets.config import RunConfig, SyntheticConfig, default_workers, load_config
from multiplex_graphlets.counting import GraphletDegreeMatrix, count_graphlets, read_degree_matrix, write_degree_matrix
from multiplex_graphlets.embedding import gcd_matrix, mds3, write_coordinates, write_distance_matrix
from multiplex_graphlets.generators import GeneratorSpec, benchmark_grid, generate_multiplex, write_benchmark_grid
from multiplex_graphlets.helpers.common.constants import BenchmarkGrid, Defaults, ErrorMessages
from multiplex_graphlets.helpers.common.enums import GeneratorFamily, Taxonomy
from multiplex_graphlets.helpers.common.exceptions import ConfigError, InputError
from multiplex_graphlets.helpers.logging_config import generate_run_id, setup_logging
from multiplex_graphlets.metrics import gcd, gcm, read_gcm, suborbit_histogram, write_gcm, write_histogram
from multiplex_graphlets.multiplex import default_plex_names, read_multiplex, write_multiplex
from multiplex_graphlets.pipeline import (
    replicate_synthetic_experiment,
    run_consensus,
    run_kplex_sweep,
    run_synthetic_experiment,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_CONFIG_ERROR = 3

SPACES = [str(space) for space in Taxonomy]
FAMILIES = [str(family) for family in GeneratorFamily]


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors raise ``ConfigError`` so ``main`` maps them to exit code 3."""

    def error(self, message: str) -> NoReturn:
        """Print the usage line and raise instead of exiting with status 2."""
        self.print_usage(sys.stderr)
        raise ConfigError(f"{self.prog}: {message}")


def _require_seed(seed: int | None, step: str) -> int:
    if seed is None:
        raise ConfigError(ErrorMessages.SEED_REQUIRED.format(step=step))
    return seed


def _generator_spec(**values: Any) -> GeneratorSpec:
    try:
        return GeneratorSpec(**values)
    except ValidationError as exc:
        raise ConfigError(f"Invalid generator parameters: {exc}") from exc


def _write_or_print(frame: pd.DataFrame, out: Path | None) -> None:
    if out is None:
        frame.to_csv(sys.stdout, index=False, lineterminator="\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, lineterminator="\n")


def _counting_options(parser: argparse.ArgumentParser, default_space: Taxonomy = Taxonomy.DISTINCT) -> None:
    parser.add_argument("--max-size", type=int, default=Defaults.MAX_SIZE, choices=(2, 3, 4))
    parser.add_argument("--space", choices=SPACES, default=str(default_space))
    parser.add_argument("--workers", type=int, default=None, help="Worker processes (default: env or the CPU count)")


def _run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    parser.add_argument("-k", "--k", type=int, help="Plex subset size")
    parser.add_argument("--max-size", type=int, choices=(2, 3, 4))
    parser.add_argument("--space", choices=SPACES)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--sample-size", type=int, help="Sample this many k-plex selections (needs --seed)")
    parser.add_argument("--combination-cap", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out-dir", type=Path)


def _run_overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "k": args.k,
        "max_size": args.max_size,
        "space": args.space,
        "seed": args.seed,
        "sample_size": args.sample_size,
        "combination_cap": args.combination_cap,
        "workers": args.workers,
        "output_dir": args.out_dir,
    }


def cmd_count(args: argparse.Namespace) -> int:
    """Count graphlet degrees of one edge list."""
    graph = read_multiplex(args.input)
    matrix = count_graphlets(graph, args.max_size, args.space, args.workers or default_workers())
    logger.info("Graphlet instances by graphlet id: %s", matrix.graphlet_counts())
    write_degree_matrix(matrix, args.out)
    return EXIT_OK


def _gcm_source(args: argparse.Namespace) -> GraphletDegreeMatrix:
    if not args.from_counts:
        graph = read_multiplex(args.input)
        return count_graphlets(graph, args.max_size, args.space, args.workers or default_workers())
    if not args.plexes:
        raise ConfigError("--from-counts needs --plexes to interpret the column ids")
    return read_degree_matrix(args.input, args.space, plex_names=args.plexes.split(","))


def cmd_gcm(args: argparse.Namespace) -> int:
    """Correlate a counted edge list, or a degree matrix written by ``count``."""
    write_gcm(gcm(_gcm_source(args)), args.out)
    return EXIT_OK


def cmd_gcd(args: argparse.Namespace) -> int:
    """Print the distance between two GCM files."""
    print(f"{gcd(read_gcm(args.first), read_gcm(args.second)):.12g}")
    return EXIT_OK


def cmd_hist(args: argparse.Namespace) -> int:
    """Sub-orbit frequency histogram over one or more edge lists."""
    workers = args.workers or default_workers()
    matrices = [count_graphlets(read_multiplex(path), args.max_size, args.space, workers) for path in args.inputs]
    write_histogram(suborbit_histogram(matrices), args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """GCMs of every k-plex network of one multiplex."""
    cfg = load_config(args.config, RunConfig, {**_run_overrides(args), "inputs": [args.input]})
    graph = read_multiplex(args.input)
    sweep = run_kplex_sweep(cfg, graph, cfg.output_dir)
    logger.info("Wrote %d GCMs to %s", len(sweep.gcms), cfg.output_dir)
    return EXIT_OK


def cmd_consensus(args: argparse.Namespace) -> int:
    """Consensus correlations over per-file groups or a grouping file."""
    overrides = {
        **_run_overrides(args),
        "inputs": args.inputs or None,
        "rho_min": args.rho_min,
        "f_min": args.f_min,
        "g_min": args.g_min if args.g_min is not None else Defaults.G_MIN_PRESETS.get(args.g_min_preset),
        "grouping_file": args.grouping_file,
    }
    cfg = load_config(args.config, RunConfig, overrides)
    report = run_consensus(cfg, out_dir=cfg.output_dir)
    logger.info("%d correlation pairs retained", len(report.retained))
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    """Write one synthetic d-plex network."""
    seed = _require_seed(args.seed, "generate")
    spec = _generator_spec(
        family=args.family,
        n=args.n,
        p=args.p,
        seed=seed,
        beta=args.beta,
        triangle_probability=args.triangle_probability,
    )
    graph = generate_multiplex(spec, args.d)
    flat = graph.to_networkx()
    logger.info(
        "Generated %r: flattened density %.4g, average clustering %.4g",
        graph,
        nx.density(flat),
        nx.average_clustering(flat),
    )
    write_multiplex(graph, args.out)
    return EXIT_OK


def cmd_benchmark_grid(args: argparse.Namespace) -> int:
    """Write the benchmark grid of edge lists plus a manifest."""
    seed = _require_seed(args.seed, "benchmark-grid")
    try:
        specs = benchmark_grid(
            seed=seed,
            families=args.families,
            sizes=args.sizes,
            probabilities=args.probabilities,
            replicates=args.replicates,
        )
    except ValidationError as exc:
        raise ConfigError(f"Invalid grid parameters: {exc}") from exc
    write_benchmark_grid(args.out_dir, specs, d=args.d, workers=args.workers or default_workers())
    return EXIT_OK


def _gcm_paths(inputs: Sequence[Path], directories: Sequence[Path]) -> list[Path]:
    paths = list(inputs)
    for directory in directories:
        if not directory.is_dir():
            raise InputError(f"--gcms expects a directory, got {directory}")
        found = sorted(directory.glob("*.csv"))
        if not found:
            raise InputError(f"No GCM files (*.csv) in {directory}")
        paths.extend(found)
    if not paths:
        raise ConfigError("embed needs GCM files or --gcms directories")
    return paths


def cmd_embed(args: argparse.Namespace) -> int:
    """Pairwise GCDs of GCM files and their 3D classical MDS coordinates."""
    paths = _gcm_paths(args.inputs, args.gcms)
    gcms = [read_gcm(path) for path in paths]
    distances = gcd_matrix(gcms, [path.stem for path in paths])
    write_distance_matrix(distances, args.out_dir / "gcd.csv")
    write_coordinates(mds3(distances), args.out_dir / "coords.csv")
    return EXIT_OK


def cmd_atlas_dump(args: argparse.Namespace) -> int:
    """List the sub-orbit ids of a signature matrix's columns."""
    if args.d < 1:
        raise ConfigError(f"Plex count must be positive, got {args.d}")
    if args.space != Taxonomy.FULL and args.max_size > 3:
        raise ConfigError(ErrorMessages.REDUCED_MAX_SIZE)
    plex_names = default_plex_names(args.d)
    columns = global_columns(args.d, args.max_size, args.space)
    frame = pd.DataFrame(
        {
            "orbit": [column.orbit for column in columns],
            "id": [column.render(plex_names=plex_names, d=args.d) for column in columns],
        }
    )
    _write_or_print(frame, args.out)
    return EXIT_OK


def cmd_atlas_orbits(args: argparse.Namespace) -> int:
    """Describe the 15 orbits."""
    frame = pd.DataFrame(orbit_table())
    frame["slots"] = frame["slots"].str.join(" ")
    _write_or_print(frame, args.out)
    return EXIT_OK


def cmd_synthetic(args: argparse.Namespace) -> int:
    """The synthetic separation experiment."""
    overrides = {
        "seed": args.seed,
        "families": args.families,
        "sizes": args.sizes,
        "probabilities": args.probabilities,
        "replicates": args.replicates,
        "plex_counts": args.plex_counts,
        "max_size": args.max_size,
        "space": args.space,
        "workers": args.workers,
        "output_dir": args.out_dir,
    }
    cfg = load_config(args.config, SyntheticConfig, overrides)
    if args.seeds:
        record = replicate_synthetic_experiment(cfg, args.seeds, cfg.output_dir)
        for variant in record["variants"]:
            significant = sum(row["significant"] for row in variant["pairs"])
            logger.info("%s: %d of %d family pairs separate", variant["name"], significant, len(variant["pairs"]))
        return EXIT_OK
    result = run_synthetic_experiment(cfg, cfg.output_dir)
    for variant in result.summary["variants"]:
        logger.info(
            "%s: within %.4g, cross %.4g, stress %.3g",
            variant["name"],
            variant["within_mean"],
            variant["cross_mean"],
            variant["stress"],
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-parser per subcommand."""
    parser = ArgumentParser(prog="multiplex-graphlets", description="Multiplex graphlet analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    count = subparsers.add_parser("count", help="Graphlet degree matrix of an edge list")
    count.add_argument("input", type=Path)
    count.add_argument("--out", type=Path, required=True)
    _counting_options(count)
    count.set_defaults(func=cmd_count)

    gcm_parser = subparsers.add_parser("gcm", help="Graphlet correlation matrix of an edge list")
    gcm_parser.add_argument("input", type=Path)
    gcm_parser.add_argument("--out", type=Path, required=True)
    _counting_options(gcm_parser)
    gcm_parser.add_argument("--from-counts", action="store_true", help="INPUT is a degree matrix CSV from count")
    gcm_parser.add_argument("--plexes", help="Comma-separated plex names of the degree matrix (with --from-counts)")
    gcm_parser.set_defaults(func=cmd_gcm)

    gcd_parser = subparsers.add_parser("gcd", help="Graphlet correlation distance of two GCM files")
    gcd_parser.add_argument("first", type=Path)
    gcd_parser.add_argument("second", type=Path)
    gcd_parser.set_defaults(func=cmd_gcd)

    hist = subparsers.add_parser("hist", help="Sub-orbit frequency histogram")
    hist.add_argument("inputs", type=Path, nargs="+")
    hist.add_argument("--out", type=Path, required=True)
    _counting_options(hist)
    hist.set_defaults(func=cmd_hist)

    sweep = subparsers.add_parser("sweep", help="GCMs of all k-plex networks")
    sweep.add_argument("input", type=Path)
    _run_options(sweep)
    sweep.set_defaults(func=cmd_sweep)

    consensus = subparsers.add_parser("consensus", help="Consensus correlations across groups")
    consensus.add_argument("inputs", type=Path, nargs="*")
    _run_options(consensus)
    consensus.add_argument("--rho-min", type=float)
    consensus.add_argument("--f-min", type=float)
    consensus.add_argument("--g-min", type=float)
    consensus.add_argument(
        "--g-min-preset", choices=sorted(Defaults.G_MIN_PRESETS), help="Named g_min (ignored when --g-min is set)"
    )
    consensus.add_argument("--grouping-file", type=Path, help="CSV with group_id,plex_name columns")
    consensus.set_defaults(func=cmd_consensus)

    generate = subparsers.add_parser("generate", help="One synthetic multiplex")
    generate.add_argument("--family", choices=FAMILIES, required=True)
    generate.add_argument("--n", type=int, required=True)
    generate.add_argument("--p", type=float, required=True)
    generate.add_argument("--d", type=int, default=2)
    generate.add_argument("--seed", type=int)
    generate.add_argument("--beta", type=float, default=BenchmarkGrid.REWIRING_PROBABILITY)
    generate.add_argument("--triangle-probability", type=float, default=BenchmarkGrid.TRIANGLE_PROBABILITY)
    generate.add_argument("--out", type=Path, required=True)
    generate.set_defaults(func=cmd_generate)

    grid = subparsers.add_parser("benchmark-grid", help="The synthetic benchmark grid")
    grid.add_argument("--seed", type=int)
    grid.add_argument("--d", type=int, default=2)
    grid.add_argument("--families", nargs="+", choices=FAMILIES, default=FAMILIES)
    grid.add_argument("--sizes", nargs="+", type=int, default=list(BenchmarkGrid.SIZES))
    grid.add_argument("--probabilities", nargs="+", type=float, default=list(BenchmarkGrid.PROBABILITIES))
    grid.add_argument("--replicates", type=int, default=BenchmarkGrid.REPLICATES)
    grid.add_argument("--workers", type=int)
    grid.add_argument("--out-dir", type=Path, required=True)
    grid.set_defaults(func=cmd_benchmark_grid)

    embed = subparsers.add_parser("embed", help="3D classical MDS of GCM files")
    embed.add_argument("inputs", type=Path, nargs="*", help="GCM CSV files")
    embed.add_argument(
        "--gcms", type=Path, action="append", default=[], help="Directory of GCM CSV files (repeatable)"
    )
    embed.add_argument("--out-dir", type=Path, required=True)
    embed.set_defaults(func=cmd_embed)

    atlas = subparsers.add_parser("atlas", help="Orbit and sub-orbit catalogue")
    atlas_commands = atlas.add_subparsers(dest="atlas_command", required=True)
    dump = atlas_commands.add_parser("dump", help="Sub-orbit ids in column order")
    dump.add_argument("--d", type=int, required=True)
    dump.add_argument("--space", choices=SPACES, default=str(Taxonomy.FULL))
    dump.add_argument("--max-size", type=int, default=Defaults.MAX_SIZE, choices=(2, 3, 4))
    dump.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    dump.set_defaults(func=cmd_atlas_dump)
    orbits = atlas_commands.add_parser("orbits", help="Graphlet, slots and stabilizer order of every orbit")
    orbits.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    orbits.set_defaults(func=cmd_atlas_orbits)

    synthetic = subparsers.add_parser("synthetic", help="Synthetic separation experiment")
    synthetic.add_argument("--config", type=Path)
    synthetic.add_argument("--seed", type=int)
    synthetic.add_argument("--seeds", nargs="+", type=int, help="Run once per seed and sign-test the separation")
    synthetic.add_argument("--families", nargs="+", choices=FAMILIES)
    synthetic.add_argument("--sizes", nargs="+", type=int)
    synthetic.add_argument("--probabilities", nargs="+", type=float)
    synthetic.add_argument("--replicates", type=int)
    synthetic.add_argument("--plex-counts", nargs="+", type=int)
    synthetic.add_argument("--max-size", type=int, choices=(2, 3, 4))
    synthetic.add_argument("--space", choices=SPACES)
    synthetic.add_argument("--workers", type=int)
    synthetic.add_argument("--out-dir", type=Path)
    synthetic.set_defaults(func=cmd_synthetic)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and map library errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        setup_logging()
        logger.error("Usage error: %s", exc)
        return EXIT_CONFIG_ERROR
    setup_logging(level="DEBUG" if args.verbose else None)
    logger.debug("Run %s: %s", generate_run_id(), args.command)
    try:
        return args.func(args)
    except ConfigError as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG_ERROR
    except (InputError, OSError) as exc:
        logger.error("Input error: %s", exc)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
