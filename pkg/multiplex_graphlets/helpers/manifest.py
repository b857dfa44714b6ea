"""Run manifests and config hashing.

Artifacts of a run are byte-identical for equal configs; the manifest is the only
file carrying a timestamp.
"""

import hashlib
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from multiplex_graphlets import __version__
from multiplex_graphlets.helpers.encoders import dumps
from multiplex_graphlets.helpers.logging_config import get_run_id

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def stable_hash(payload: Any) -> str:
    """SHA-256 of the canonical JSON form of ``payload``."""
    return hashlib.sha256(dumps(payload).encode("utf-8")).hexdigest()


def write_manifest(out_dir: str | Path, kind: str, config_hash: str, payload: dict[str, Any]) -> Path:
    """Write ``manifest.json`` with the config hash, run id, package version and a UTC timestamp."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    document = {
        "kind": kind,
        "config_hash": config_hash,
        "run_id": get_run_id(),
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **payload,
    }
    path = out_dir / MANIFEST_NAME
    path.write_text(dumps(document), encoding="utf-8")
    logger.info("Wrote %s manifest to %s", kind, path)
    return path
