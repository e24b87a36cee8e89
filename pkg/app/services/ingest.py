"""CSV ingestion into a TimeSeries."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import IO

import numpy as np
import pandas as pd

from app.core.exceptions import IngestError
from app.models import TimeSeries

logger = logging.getLogger(__name__)


def _is_number(value: object) -> bool:
    try:
        float(str(value).strip())
    except ValueError:
        return False
    return True


def _select_column(
    frame: pd.DataFrame, column: str | int | None, header: list[str] | None
) -> int:
    if column is None:
        return 0
    if isinstance(column, int) or (isinstance(column, str) and column.strip().isdigit()):
        index = int(column)
        if not 0 <= index < frame.shape[1]:
            raise IngestError(f"column index {index} out of range (file has {frame.shape[1]})")
        return index
    if header is None or column not in header:
        raise IngestError(f"column {column!r} not found in header")
    return header.index(column)


def ingest_csv(source: str | Path | IO, column: str | int | None = None) -> TimeSeries:
    """Read one numeric column of a CSV file in file order.

    A header row is assumed when the first selected cell is not numeric. ``column`` is a
    header name or a 0-based index; the first column is used by default. Blank lines are
    skipped.

    Raises:
        IngestError: On a missing or empty file, a malformed row, or a non-numeric or
            missing cell (the message names the 1-based line)
    """
    try:
        frame = pd.read_csv(
            source,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            skipinitialspace=True,
        )
    except FileNotFoundError as exc:
        raise IngestError(f"file not found: {source}") from exc
    except pd.errors.EmptyDataError as exc:
        raise IngestError("file is empty") from exc
    except pd.errors.ParserError as exc:
        raise IngestError(f"malformed CSV: {exc}") from exc

    # Row i of the frame is line i + 1 of the file.
    lines = np.arange(1, len(frame) + 1)
    filled = frame.fillna("").apply(lambda col: col.str.strip())
    keep = (filled != "").any(axis=1).to_numpy()
    filled, lines = filled[keep], lines[keep]
    if filled.empty:
        raise IngestError("file is empty")

    first = [str(v) for v in filled.iloc[0]]
    by_name = isinstance(column, str) and not column.strip().isdigit()
    header: list[str] | None = None
    if by_name or not _is_number(first[_select_column(filled, column, None)]):
        header = first
        filled, lines = filled.iloc[1:], lines[1:]
    index = _select_column(filled, column, header)

    raw = filled.iloc[:, index]
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        pos = int(np.argmax(bad))
        raise IngestError(f"non-numeric or missing value {raw.iloc[pos]!r}", line=int(lines[pos]))
    if values.size == 0:
        raise IngestError("file has a header but no data rows")
    logger.info("ingested %d values (header=%s)", values.size, header is not None)
    return TimeSeries(values)
