"""The synthetic benchmark grid: family x N x p cells with seeded replicates."""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from multiplex_graphlets.generators.base import GeneratorSpec, derive_seed
from multiplex_graphlets.generators.compose import generate_multiplex
from multiplex_graphlets.helpers.common.constants import BenchmarkGrid
from multiplex_graphlets.helpers.common.enums import GeneratorFamily
from multiplex_graphlets.helpers.manifest import stable_hash, write_manifest
from multiplex_graphlets.multiplex import write_multiplex

logger = logging.getLogger(__name__)


def replicate_seed(seed: int, family: str, n: int, p: float, replicate: int) -> int:
    """Seed of one grid replicate, mixed from the grid seed and the cell coordinates."""
    return derive_seed(seed, n, round(p * 10_000), replicate, *str(family).lower().encode("utf-8"))


def benchmark_grid(
    seed: int = 0,
    families: Sequence[str] = tuple(GeneratorFamily),
    sizes: Sequence[int] = BenchmarkGrid.SIZES,
    probabilities: Sequence[float] = BenchmarkGrid.PROBABILITIES,
    replicates: int = BenchmarkGrid.REPLICATES,
    beta: float = BenchmarkGrid.REWIRING_PROBABILITY,
    triangle_probability: float = BenchmarkGrid.TRIANGLE_PROBABILITY,
) -> list[GeneratorSpec]:
    """All grid specs in family, size, probability, replicate order.

    The defaults give 4 x 5 x 5 cells with 20 replicates each, 2000 specs.
    """
    specs = [
        GeneratorSpec(
            family=family,
            n=n,
            p=p,
            seed=replicate_seed(seed, family, n, p, replicate),
            replicate=replicate,
            beta=beta,
            triangle_probability=triangle_probability,
        )
        for family in families
        for n in sizes
        for p in probabilities
        for replicate in range(replicates)
    ]
    logger.debug("Benchmark grid with seed %d: %d specs", seed, len(specs))
    return specs


def write_benchmark_grid(out_dir: str | Path, specs: Sequence[GeneratorSpec], d: int = 2, workers: int = 1) -> Path:
    """Generate every spec as a d-plex network, write ``<slug>.edges`` files and ``manifest.json``.

    Returns:
        Path of the manifest.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def build(spec: GeneratorSpec) -> dict:
        graph = generate_multiplex(spec, d)
        path = write_multiplex(graph, out_dir / f"{spec.slug()}.edges")
        return {"file": path.name, "spec": spec.model_dump(mode="json"), "edges": graph.edge_count}

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        entries = list(executor.map(build, specs))

    spec_records = [entry["spec"] for entry in entries]
    config_hash = stable_hash({"d": d, "specs": spec_records})
    logger.info("Wrote %d benchmark networks to %s", len(entries), out_dir)
    return write_manifest(out_dir, "benchmark-grid", config_hash, {"d": d, "networks": entries})
