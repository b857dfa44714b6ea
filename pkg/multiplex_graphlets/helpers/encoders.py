"""Custom JSON encoders for serialization."""

import json
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np


class NumpyEncoder(json.JSONEncoder):
    """JSON encoder handling NumPy scalars and arrays, enums and paths."""

    def default(self, obj: Any) -> Any:
        """Convert NumPy and other non-JSON types for serialization."""
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, Path):
            return obj.as_posix()
        return super().default(obj)


def dumps(payload: Any) -> str:
    """Serialize deterministically: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(payload, cls=NumpyEncoder, sort_keys=True, indent=2) + "\n"
