"""CSV reading for artifacts, with pandas failures reported as ``ParseError``."""

import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from multiplex_graphlets.helpers.common.exceptions import ParseError

logger = logging.getLogger(__name__)


def read_table(path: str | Path, **kwargs: Any) -> pd.DataFrame:
    """``pandas.read_csv`` that raises ``ParseError`` for empty or malformed files.

    Missing files still raise ``FileNotFoundError``.
    """
    try:
        frame = pd.read_csv(path, **kwargs)
    except pd.errors.EmptyDataError as exc:
        raise ParseError(f"{path}: file is empty") from exc
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: malformed CSV ({exc})") from exc
    logger.debug("Read %s: %d rows, %d columns", path, *frame.shape)
    return frame


def table_values(frame: pd.DataFrame, path: str | Path, dtype: type) -> np.ndarray:
    """Cells of ``frame`` as a ``dtype`` array.

    Raises:
        ParseError: If a cell is missing or not a number of that type.
    """
    if frame.isna().to_numpy().any():
        raise ParseError(f"{path}: missing cells")
    try:
        return frame.to_numpy(dtype=dtype)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: non-numeric cell ({exc})") from exc
