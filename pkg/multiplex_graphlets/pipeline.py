"""End-to-end experiments: k-plex sweeps, consensus reports and the synthetic separation run."""

import logging
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np
from scipy.stats import binomtest

from multiplex_graphlets.config import RunConfig, SyntheticConfig
from multiplex_graphlets.counting import count_graphlets
from multiplex_graphlets.embedding import (
    DistanceMatrix,
    EmbeddingResult,
    gcd_matrix,
    mds3,
    write_coordinates,
    write_distance_matrix,
)
from multiplex_graphlets.generators import GeneratorSpec, benchmark_grid, derive_seed, generate_multiplex
from multiplex_graphlets.helpers.common.constants import ErrorMessages
from multiplex_graphlets.helpers.common.enums import Taxonomy
from multiplex_graphlets.helpers.common.exceptions import ConfigError, InputError, ParseError
from multiplex_graphlets.helpers.encoders import dumps
from multiplex_graphlets.helpers.logging_config import set_run_id
from multiplex_graphlets.helpers.manifest import stable_hash, write_manifest
from multiplex_graphlets.helpers.tables import read_table
from multiplex_graphlets.metrics import GCM, ConsensusReport, consensus_correlations, gcm, write_gcm
from multiplex_graphlets.multiplex import (
    MultiplexGraph,
    PlexSelection,
    default_plex_names,
    extract_kplex,
    flatten,
    kplex_combinations,
    read_multiplex,
    sample_kplex_combinations,
)
from multiplex_graphlets.reporting import render_synthetic_summary, write_consensus_report

logger = logging.getLogger(__name__)

GROUP_COLUMN = "group_id"
PLEX_COLUMN = "plex_name"


@dataclass(frozen=True)
class SweepResult:
    """GCMs of the k-plex networks of one multiplex, in selection order."""

    selections: tuple[PlexSelection, ...]
    names: tuple[str, ...]
    gcms: tuple[GCM, ...]


@dataclass(frozen=True)
class VariantResult:
    """One synthetic variant (a d-plex grid or its flattened counterpart)."""

    name: str
    distances: DistanceMatrix
    embedding: EmbeddingResult
    families: tuple[str, ...]
    separation: dict[str, Any]


@dataclass(frozen=True)
class SyntheticResult:
    """Variants plus the summary written to ``summary.json``."""

    variants: tuple[VariantResult, ...]
    summary: dict[str, Any]


def _parallel_map(func: Callable, items: Sequence, workers: int) -> list:
    """Order-preserving map over a process pool (inline for one worker)."""
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def _positional(graph: MultiplexGraph) -> MultiplexGraph:
    """Rename plexes to ``a, b, ...`` so full-space columns align across selections."""
    return MultiplexGraph(graph.n, default_plex_names(graph.d), graph.edges, graph.node_names)


def _selection_gcm(task: tuple[MultiplexGraph, PlexSelection, int, Taxonomy]) -> GCM:
    graph, selection, max_size, space = task
    kplex = _positional(extract_kplex(graph, selection))
    return gcm(count_graphlets(kplex, max_size=max_size, space=space))


def select_kplexes(cfg: RunConfig, d: int, seed: int | None = None) -> list[PlexSelection]:
    """Selections of a sweep: all of them under the cap, or a seeded sample when a sample size is set.

    Raises:
        ConfigError: If k > d, the cap is exceeded without a sample size, or sampling lacks a seed.
    """
    if cfg.k > d:
        raise ConfigError(f"k={cfg.k} exceeds the plex count d={d}")
    total = math.comb(d, cfg.k)
    if cfg.sample_size is not None:
        if seed is None:
            seed = cfg.require_seed("k-plex sampling")
        return sample_kplex_combinations(d, cfg.k, cfg.sample_size, seed)
    if total > cfg.combination_cap:
        raise ConfigError(ErrorMessages.COMBINATION_CAP.format(d=d, k=cfg.k, count=total, cap=cfg.combination_cap))
    return kplex_combinations(d, cfg.k)


def run_kplex_sweep(
    cfg: RunConfig,
    graph: MultiplexGraph,
    out_dir: str | Path | None = None,
    seed: int | None = None,
) -> SweepResult:
    """Count and correlate every (or every sampled) k-plex network of ``graph``.

    Full-space columns use positional plex names, so GCMs of different selections
    share a schema. When ``out_dir`` is given each GCM is written to ``<out_dir>/<a+b>.csv``
    next to a manifest carrying the config hash.
    """
    config_hash = cfg.config_hash()
    set_run_id(config_hash)
    selections = select_kplexes(cfg, graph.d, seed)
    names = tuple(selection.slug(graph.plex_names) for selection in selections)
    logger.info("Sweeping %d %d-plex selections of %r", len(selections), cfg.k, graph)
    tasks = [(graph, selection, cfg.max_size, cfg.space) for selection in selections]
    gcms = tuple(_parallel_map(_selection_gcm, tasks, cfg.workers))
    if out_dir is not None:
        out_dir = Path(out_dir)
        files = [write_gcm(matrix, out_dir / f"{name}.csv").name for name, matrix in zip(names, gcms)]
        write_manifest(
            out_dir,
            "kplex-sweep",
            config_hash,
            {"config": cfg.model_dump(mode="json"), "source": repr(graph), "files": files},
        )
    return SweepResult(tuple(selections), names, gcms)


def read_grouping(path: str | Path) -> dict[str, list[str]]:
    """Read a ``group_id,plex_name`` CSV into group -> plex names, in file order.

    Raises:
        ParseError: If the file is empty or a column is missing.
    """
    frame = read_table(path, dtype=str, keep_default_na=False)
    missing = {GROUP_COLUMN, PLEX_COLUMN} - set(frame.columns)
    if missing:
        raise ParseError(f"{path}: grouping file lacks column(s) {sorted(missing)}")
    if frame.empty:
        raise ParseError(f"{path}: grouping file has no rows")
    groups: dict[str, list[str]] = {}
    for group, plex in zip(frame[GROUP_COLUMN], frame[PLEX_COLUMN]):
        members = groups.setdefault(group.strip(), [])
        if plex.strip() not in members:
            members.append(plex.strip())
    return groups


def _group_graph(graph: MultiplexGraph, plex_names: Iterable[str], group: str) -> MultiplexGraph:
    index = {name: i for i, name in enumerate(graph.plex_names)}
    unknown = [name for name in plex_names if name not in index]
    if unknown:
        raise InputError(f"Group '{group}' names unknown plexes: {unknown}")
    return extract_kplex(graph, PlexSelection(tuple(sorted(index[name] for name in plex_names))))


def consensus_groups(cfg: RunConfig, out_dir: str | Path | None = None) -> dict[str, list[GCM]]:
    """Sweep the configured inputs into groups of GCMs.

    Without a grouping file every input file is one group. With one, each group is
    the k-plex sweep over the group's plexes of the (single) input multiplex.
    """
    if not cfg.inputs:
        raise ConfigError("Consensus needs at least one input edge list")

    def seed_for(index: int) -> int | None:
        return None if cfg.seed is None else derive_seed(cfg.seed, index)

    groups: dict[str, list[GCM]] = {}
    if cfg.grouping_file is None:
        for i, path in enumerate(cfg.inputs):
            group_dir = Path(out_dir) / "gcm" / Path(path).stem if out_dir is not None else None
            groups[Path(path).stem] = list(run_kplex_sweep(cfg, read_multiplex(path), group_dir, seed_for(i)).gcms)
        return groups

    if len(cfg.inputs) != 1:
        raise ConfigError("A grouping file applies to exactly one input multiplex")
    graph = read_multiplex(cfg.inputs[0])
    for i, (group, plex_names) in enumerate(read_grouping(cfg.grouping_file).items()):
        group_dir = Path(out_dir) / "gcm" / group if out_dir is not None else None
        sweep = run_kplex_sweep(cfg, _group_graph(graph, plex_names, group), group_dir, seed_for(i))
        groups[group] = list(sweep.gcms)
    return groups


def run_consensus(
    cfg: RunConfig, groups: Mapping[str, Sequence[GCM]] | None = None, out_dir: str | Path | None = None
) -> ConsensusReport:
    """Consensus correlations over grouped sweeps with the configured thresholds.

    Groups are swept from ``cfg.inputs`` unless given. With ``out_dir`` the report is
    written as ``consensus.json`` and ``consensus.md`` next to a manifest.
    """
    config_hash = cfg.config_hash()
    set_run_id(config_hash)
    if groups is None:
        groups = consensus_groups(cfg, out_dir)
    report = consensus_correlations(groups, rho_min=cfg.rho_min, f_min=cfg.f_min, g_min=cfg.g_min)
    if out_dir is not None:
        json_path, markdown_path = write_consensus_report(report, out_dir, config_hash=config_hash)
        write_manifest(
            out_dir,
            "consensus",
            config_hash,
            {"config": cfg.model_dump(mode="json"), "files": [json_path.name, markdown_path.name]},
        )
    return report


def _sign_test_p(gaps: Sequence[float]) -> float:
    """One-sided sign test p-value for ``gaps > 0``; zero gaps are dropped."""
    nonzero = [gap for gap in gaps if gap != 0]
    if not nonzero:
        return 1.0
    positive = sum(gap > 0 for gap in nonzero)
    return float(binomtest(positive, len(nonzero), 0.5, alternative="greater").pvalue)


def _network_gaps(values: np.ndarray, members: Mapping[str, list[int]], a: str, b: str) -> list[float]:
    """Per network of ``a`` or ``b``: mean distance to the other family minus mean distance to its own."""
    gaps = []
    for own, other in ((a, b), (b, a)):
        for i in members[own]:
            peers = [j for j in members[own] if j != i]
            if peers:
                gaps.append(float(values[i, members[other]].mean() - values[i, peers].mean()))
    return gaps


def separation_stats(distances: DistanceMatrix, families: Sequence[str]) -> dict[str, Any]:
    """Mean GCD within and across families, pooled and per family pair.

    Cross-family rows also carry ``gap``, the pair's mean GCD minus the mean
    within-family GCD of its two families, and ``sign_p``, a one-sided sign test
    over per-network gaps (see :func:`_network_gaps`). Both are ``None`` on
    within-family rows.
    """
    values = distances.values
    members: dict[str, list[int]] = {}
    for index, family in enumerate(families):
        members.setdefault(family, []).append(index)
    by_pair: dict[tuple[str, str], list[float]] = {}
    within: list[float] = []
    cross: list[float] = []
    for i, j in combinations(range(len(families)), 2):
        a, b = sorted((families[i], families[j]))
        by_pair.setdefault((a, b), []).append(values[i, j])
        (within if a == b else cross).append(values[i, j])
    rows = []
    for (a, b), pair_values in sorted(by_pair.items()):
        gap = sign_p = None
        if a != b:
            own = by_pair.get((a, a), []) + by_pair.get((b, b), [])
            gap = float(np.mean(pair_values) - np.mean(own)) if own else None
            sign_p = _sign_test_p(_network_gaps(values, members, a, b))
        rows.append(
            {
                "family_a": a,
                "family_b": b,
                "mean_gcd": float(np.mean(pair_values)),
                "pairs": len(pair_values),
                "gap": gap,
                "sign_p": sign_p,
            }
        )
    return {
        "within_mean": float(np.mean(within)) if within else 0.0,
        "cross_mean": float(np.mean(cross)) if cross else 0.0,
        "rows": rows,
    }


def seed_sign_test(runs: Sequence[Sequence[Mapping[str, Any]]], alpha: float = 0.05) -> list[dict[str, Any]]:
    """Sign test of the per-pair gaps of one variant across independently seeded runs.

    Args:
        runs: The ``rows`` of :func:`separation_stats`, one list per seed.
        alpha: Significance level of the one-sided test.

    Returns:
        One row per cross-family pair: positive gaps, seeds, p-value and whether it is below ``alpha``.
    """
    gaps: dict[tuple[str, str], list[float]] = {}
    for rows in runs:
        for row in rows:
            if row["family_a"] != row["family_b"] and row["gap"] is not None:
                gaps.setdefault((row["family_a"], row["family_b"]), []).append(row["gap"])
    result = []
    for (a, b), pair_gaps in sorted(gaps.items()):
        p_value = _sign_test_p(pair_gaps)
        result.append(
            {
                "family_a": a,
                "family_b": b,
                "positive": sum(gap > 0 for gap in pair_gaps),
                "seeds": len(pair_gaps),
                "p_value": p_value,
                "significant": p_value < alpha,
            }
        )
    return result


def _synthetic_gcms(task: tuple[GeneratorSpec, int, int, Taxonomy]) -> tuple[GCM, GCM]:
    spec, d, max_size, space = task
    graph = generate_multiplex(spec, d)
    layered = gcm(count_graphlets(graph, max_size=max_size, space=space))
    flat = gcm(count_graphlets(flatten(graph), max_size=max_size, space=space))
    return layered, flat


def _variant(
    name: str, gcms: Sequence[GCM], ids: Sequence[str], families: Sequence[str], out_dir: Path | None
) -> VariantResult:
    distances = gcd_matrix(gcms, ids)
    embedding = mds3(distances)
    if out_dir is not None:
        variant_dir = out_dir / name
        write_distance_matrix(distances, variant_dir / "gcd.csv")
        write_coordinates(embedding, variant_dir / "coords.csv", dict(zip(distances.ids, families)))
    return VariantResult(name, distances, embedding, tuple(families), separation_stats(distances, families))


def run_synthetic_experiment(cfg: SyntheticConfig, out_dir: str | Path | None = None) -> SyntheticResult:
    """Generate the grid, embed d-plex and flattened variants, and report their separation.

    Raises:
        ConfigError: If no seed is configured.
    """
    seed = cfg.require_seed("synthetic grid")
    config_hash = cfg.config_hash()
    set_run_id(config_hash)
    out_dir = Path(out_dir) if out_dir is not None else None
    specs = benchmark_grid(
        seed=seed,
        families=cfg.families,
        sizes=cfg.sizes,
        probabilities=cfg.probabilities,
        replicates=cfg.replicates,
        beta=cfg.beta,
        triangle_probability=cfg.triangle_probability,
    )
    ids = [spec.slug() for spec in specs]
    families = [spec.family for spec in specs]
    logger.info("Synthetic experiment: %d networks, plex counts %s", len(specs), cfg.plex_counts)

    variants: list[VariantResult] = []
    summary_variants: list[dict[str, Any]] = []
    for d in cfg.plex_counts:
        pairs = _parallel_map(_synthetic_gcms, [(spec, d, cfg.max_size, cfg.space) for spec in specs], cfg.workers)
        layered = _variant(f"{d}-plex", [pair[0] for pair in pairs], ids, families, out_dir)
        flat = _variant(f"{d}-plex-flattened", [pair[1] for pair in pairs], ids, families, out_dir)
        frobenius = float(np.linalg.norm(layered.distances.values - flat.distances.values))
        for variant, to_flat in ((layered, frobenius), (flat, None)):
            variants.append(variant)
            summary_variants.append(
                {
                    "name": variant.name,
                    "within_mean": variant.separation["within_mean"],
                    "cross_mean": variant.separation["cross_mean"],
                    "separation": variant.separation["rows"],
                    "stress": variant.embedding.stress,
                    "truncated_mass": variant.embedding.truncated_mass,
                    "frobenius_to_flat": to_flat,
                }
            )

    summary = {"config_hash": config_hash, "networks": len(specs), "variants": summary_variants}
    if out_dir is not None:
        (out_dir / "summary.json").write_text(dumps(summary), encoding="utf-8")
        (out_dir / "summary.md").write_text(render_synthetic_summary(summary), encoding="utf-8")
        write_manifest(
            out_dir,
            "synthetic",
            config_hash,
            {
                "config": cfg.model_dump(mode="json"),
                "variants": [variant.name for variant in variants],
                "networks": [{"id": spec.slug(), "spec": spec.model_dump(mode="json")} for spec in specs],
            },
        )
    return SyntheticResult(tuple(variants), summary)


def replicate_synthetic_experiment(
    cfg: SyntheticConfig, seeds: Sequence[int], out_dir: str | Path | None = None
) -> dict[str, Any]:
    """Run the synthetic experiment once per seed and sign-test every variant's pair gaps.

    Each run is written to ``<out_dir>/seed-<seed>``; the combined record goes to
    ``<out_dir>/sign_test.json`` next to a manifest.

    Raises:
        ConfigError: If no seeds are given.
    """
    if not seeds:
        raise ConfigError("Replication needs at least one seed")
    out_dir = Path(out_dir) if out_dir is not None else None
    runs = []
    for seed in seeds:
        run_dir = out_dir / f"seed-{seed}" if out_dir is not None else None
        runs.append(run_synthetic_experiment(cfg.model_copy(update={"seed": seed}), run_dir))

    config_hash = stable_hash({"config": cfg.config_hash(), "seeds": list(seeds)})
    set_run_id(config_hash)
    variants = []
    for index, variant in enumerate(runs[0].variants):
        summaries = [run.summary["variants"][index] for run in runs]
        variants.append(
            {
                "name": variant.name,
                "within_mean": [summary["within_mean"] for summary in summaries],
                "cross_mean": [summary["cross_mean"] for summary in summaries],
                "frobenius_to_flat": [summary["frobenius_to_flat"] for summary in summaries],
                "pairs": seed_sign_test([run.variants[index].separation["rows"] for run in runs]),
            }
        )
    record = {"config_hash": config_hash, "seeds": list(seeds), "variants": variants}
    if out_dir is not None:
        (out_dir / "sign_test.json").write_text(dumps(record), encoding="utf-8")
        write_manifest(
            out_dir,
            "synthetic-replication",
            config_hash,
            {"config": cfg.model_dump(mode="json"), "seeds": list(seeds), "files": ["sign_test.json"]},
        )
    for variant in variants:
        failing = [f"{row['family_a']}/{row['family_b']}" for row in variant["pairs"] if not row["significant"]]
        logger.info("%s: %d pairs, not significant: %s", variant["name"], len(variant["pairs"]), failing or "none")
    return record
