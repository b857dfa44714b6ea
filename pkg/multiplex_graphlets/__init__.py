"""Graphlet analysis of multiplex networks."""

from importlib import metadata
from pathlib import Path

try:
    __version__ = metadata.version("multiplex-graphlets")
except metadata.PackageNotFoundError:
    # Fall back to reading from pyproject.toml for development checkouts
    try:
        import tomllib

        pyproject_path = Path(__file__).parent.parent / "pyproject.toml"
        with open(pyproject_path, "rb") as f:
            __version__ = tomllib.load(f)["tool"]["poetry"]["version"]
    except (KeyError, FileNotFoundError):
        __version__ = "0.1.0"  # Ultimate fallback

__all__ = ["__version__"]
