"""Constants."""


class ErrorMessages:
    """User-facing error messages."""

    SEED_REQUIRED = "A --seed is required for stochastic steps ({step})."
    TOO_MANY_PLEXES = (
        "{d} plexes declared but at most {limit} are supported; pre-select plexes (e.g. with a k-plex sweep) first."
    )
    COMBINATION_CAP = (
        "C({d},{k}) = {count} k-plex selections exceeds the cap of {cap}; pass a sample size to sample selections."
    )
    REDUCED_MAX_SIZE = "Reduced taxonomies cover orbits 0-3 only; max size 4 requires the full space."


class Defaults:
    """Default thresholds and run parameters."""

    RHO_MIN: float = 0.7
    F_MIN: float = 0.6
    G_MIN_SOCIAL: float = 0.8
    G_MIN_ECONOMIC: float = 0.9
    G_MIN_PRESETS: dict[str, float] = {"social": G_MIN_SOCIAL, "economic": G_MIN_ECONOMIC}
    MAX_SIZE: int = 3
    COMBINATION_CAP: int = 5000
    MAX_PLEXES: int = 64


class BenchmarkGrid:
    """Synthetic benchmark grid parameters."""

    SIZES: tuple[int, ...] = (100, 200, 300, 400, 500)
    PROBABILITIES: tuple[float, ...] = (0.2, 0.35, 0.5, 0.75, 0.8)
    REPLICATES: int = 20
    REWIRING_PROBABILITY: float = 0.01
    TRIANGLE_PROBABILITY: float = 0.8


class EnvVars:
    """Environment variables read by the package."""

    JSON_LOGGING = "MULTIPLEX_GRAPHLETS_JSON_LOGGING"
    LOG_LEVEL = "MULTIPLEX_GRAPHLETS_LOG_LEVEL"
    WORKERS = "MULTIPLEX_GRAPHLETS_WORKERS"
