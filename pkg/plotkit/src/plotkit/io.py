"""CSV loading with loud failures on missing files or columns."""

from __future__ import annotations

import pandas as pd


class MissingColumnError(ValueError):
    """The CSV exists but lacks a column a panel needs."""


def read_table(path: str, required: tuple[str, ...]) -> pd.DataFrame:
    """Read a CSV written by the quenchecho CLI and check its header.

    '#'-prefixed lines (schedule-table provenance comments) are skipped.
    Raises FileNotFoundError for a missing file and MissingColumnError when
    any of `required` is absent from the header.
    """
    df = pd.read_csv(path, comment="#")
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise MissingColumnError(
            f"{path}: missing column(s) {missing}; found {list(df.columns)}")
    return df
