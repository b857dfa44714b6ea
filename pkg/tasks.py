"""Invoke tasks for linting, testing, docs and the experiment shortcuts of multiplex-graphlets."""

from invoke.collection import Collection
from invoke.exceptions import Exit
from invoke.tasks import task as invoke_task

# Defaults can be overridden in invoke.yml or with INVOKE_MULTIPLEX_GRAPHLETS_<KEY> environment variables
namespace = Collection("multiplex_graphlets")
namespace.configure(
    {
        "multiplex_graphlets": {
            "package": "multiplex_graphlets",
            "runs_dir": "runs",
            "seed": 2024,
            "workers": None,
        }
    }
)


def task(function=None, *args, **kwargs):
    """Like ``invoke.task``, but also registers the task in ``namespace``."""

    def register(function=None):
        wrapped = invoke_task(*args, **kwargs)(function) if args or kwargs else invoke_task(function)
        namespace.add_task(wrapped)
        return wrapped

    # Bare @task vs @task(...)
    return register(function) if function else register


def run_command(context, command, **kwargs):
    """Run ``command`` inside the poetry environment."""
    return context.run(f"poetry run {command}", **kwargs)


def _settings(context):
    return context.multiplex_graphlets


# ------------------------------------------------------------------------------
# EXPERIMENTS
# ------------------------------------------------------------------------------
@task(
    help={
        "d": "Plex count.",
        "space": "full, plexcount or distinct (default: full).",
        "max_size": "Largest graphlet size (default: 3).",
    }
)
def atlas_dump(context, d=2, space="full", max_size=3):
    """Print the column ids of a signature matrix."""
    run_command(context, f"multiplex-graphlets atlas dump --d {d} --space {space} --max-size {max_size}")


@task(
    help={
        "seed": "Grid seed (default: the configured seed).",
        "out_dir": "Where to write results (default: <runs_dir>/synthetic).",
        "workers": "Worker processes (default: the configured count, else one per CPU).",
    }
)
def synthetic(context, seed=None, out_dir="", workers=None):
    """Run the synthetic separation experiment with the default grid."""
    settings = _settings(context)
    seed = settings.seed if seed is None else seed
    workers = settings.workers if workers is None else workers
    out_dir = out_dir or f"{settings.runs_dir}/synthetic"
    workers_flag = f" --workers {workers}" if workers else ""
    run_command(context, f"multiplex-graphlets synthetic --seed {seed}{workers_flag} --out-dir {out_dir}")


# ------------------------------------------------------------------------------
# DOCS
# ------------------------------------------------------------------------------
@task
def docs(context):
    """Serve the MkDocs site on port 8001 with live reload."""
    run_command(context, "mkdocs serve -v")


@task
def docs_build(context):
    """Build the MkDocs site, failing on warnings."""
    run_command(context, "mkdocs build --strict")


# ------------------------------------------------------------------------------
# LINTING
# ------------------------------------------------------------------------------
@task(help={"fix": "Rewrite files instead of only checking them."})
def ruff(context, fix=False):
    """Check formatting and lint rules with ruff."""
    failed = False
    for command in ("ruff format" if fix else "ruff format --check", "ruff check --fix" if fix else "ruff check"):
        result = run_command(context, f"{command} .", warn=True)
        failed = failed or not result.ok
    if failed:
        raise Exit(code=1)


@task(aliases=("a",))
def autoformat(context):
    """Format and auto-fix the code base."""
    ruff(context, fix=True)


@task
def pylint(context):
    """Run pylint with the pyproject settings."""
    result = run_command(context, f"pylint --rcfile pyproject.toml {_settings(context).package}", warn=True)
    if not result.ok:
        raise Exit(code=1)


@task(help={"fix": "Apply the fixes pymarkdown knows before scanning."})
def markdownlint(context, fix=False):
    """Lint README and docs."""
    if fix:
        run_command(context, "pymarkdown fix --recurse docs *.md")
    # fix skips issues it cannot repair; always scan afterwards
    run_command(context, "pymarkdown scan --recurse docs *.md")


# ------------------------------------------------------------------------------
# TESTS
# ------------------------------------------------------------------------------
@task(
    help={
        "label": "Test module, class or method to run (default: the whole suite).",
        "failfast": "Stop at the first failure.",
        "pattern": "Only run tests whose names contain this substring.",
        "verbose": "List every test.",
        "coverage": "Measure coverage while testing.",
    }
)
def unittest(context, label="", failfast=False, pattern="", verbose=False, coverage=False):
    """Run the unit tests with unittest."""
    runner = "coverage run --module unittest" if coverage else "python -m unittest"
    target = label or f"discover --start-directory {_settings(context).package}/tests --top-level-directory ."
    flags = [flag for flag, enabled in (("--failfast", failfast), ("--verbose", verbose)) if enabled]
    if pattern:
        flags.append(f"-k '{pattern}'")
    run_command(context, " ".join([runner, target, "--buffer", *flags]))


@task
def coverage_report(context):
    """Summarize coverage of the last ``invoke unittest --coverage`` run and write lcov.info."""
    run_command(context, "coverage report --skip-covered")
    run_command(context, "coverage lcov -o lcov.info")


@task(help={"lint_only": "Skip the unit tests."})
def tests(context, lint_only=False):
    """Run every check: linters, lock file, docs build and unit tests."""
    ruff(context)
    markdownlint(context)
    context.run("poetry check")
    pylint(context)
    docs_build(context)
    if not lint_only:
        unittest(context, coverage=True)
        coverage_report(context)
    print("All checks passed.")
