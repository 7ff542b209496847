"""Observation matrices: CSV loading, standardization, noise augmentation and
row subsampling."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateColumnError, DimensionError, ParseError

MIN_ROWS = 3
MIN_COLS = 2


@dataclass(frozen=True)
class DataMatrix:
    """An ``n x p`` block of observations, rows are samples and columns variables."""

    values: np.ndarray
    column_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {values.shape}")
        n, p = values.shape
        if n < MIN_ROWS or p < MIN_COLS:
            raise DimensionError(f"need n >= {MIN_ROWS} and p >= {MIN_COLS}, got n={n}, p={p}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ParseError(f"non-finite entry at row {bad[0]}, column {bad[1]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.column_names is not None:
            names = tuple(str(c) for c in self.column_names)
            if len(names) != p:
                raise DimensionError(f"{len(names)} column names for {p} columns")
            object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column_name(self, j: int):
        return None if self.column_names is None else self.column_names[j]


def load_csv(path, has_header: bool = False) -> DataMatrix:
    """Read a comma separated numeric table.

    Only the plain dialect is accepted: ``,`` separators, ``.`` decimals and at
    most one header row. Row and column indices in error messages are 0-based
    and count data rows only.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    header = None
    if has_header:
        if not rows:
            raise ParseError(f"{path}: missing header row")
        header, rows = [c.strip() for c in rows[0]], rows[1:]
    if not rows:
        raise DimensionError(f"{path}: no data rows")

    width = len(header) if header is not None else len(rows[0])
    data = np.empty((len(rows), width))
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"{path}: row {r} has {len(row)} fields, expected {width}")
        for c, cell in enumerate(row):
            try:
                data[r, c] = float(cell)
            except ValueError:
                raise ParseError(f"{path}: non-numeric cell {cell!r} at row {r}, column {c}") from None
    return DataMatrix(data, tuple(header) if header is not None else None)


def _check_variance(d: DataMatrix, centered: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(centered, axis=0)
    scale = np.linalg.norm(d.values, axis=0)
    for j in np.flatnonzero(norms <= 1e-13 * np.maximum(scale, 1e-300)):
        raise DegenerateColumnError(int(j), d.column_name(int(j)))
    return norms


def standardize(d: DataMatrix) -> DataMatrix:
    """Center every column and scale it to unit standard deviation (divisor n)."""
    centered = d.values - d.values.mean(axis=0)
    norms = _check_variance(d, centered)
    return DataMatrix(centered / (norms / np.sqrt(d.n)), d.column_names)


def augment_noise(d: DataMatrix, q: int, rng_seed: int) -> DataMatrix:
    """Append ``q`` independent standard Gaussian columns drawn from ``rng_seed``."""
    if q < 0:
        raise DimensionError(f"noise column count must be >= 0, got {q}")
    if q == 0:
        return d
    rng = np.random.default_rng(rng_seed)
    noise = rng.standard_normal((d.n, q))
    names = None
    if d.column_names is not None:
        names = d.column_names + tuple(f"noise_{k + 1}" for k in range(q))
    return DataMatrix(np.hstack([d.values, noise]), names)


def subsample_rows(d: DataMatrix, m: int, rng_seed: int) -> DataMatrix:
    """Draw ``m`` rows without replacement."""
    if not MIN_ROWS <= m <= d.n:
        raise DimensionError(f"subsample size must lie in [{MIN_ROWS}, {d.n}], got {m}")
    rng = np.random.default_rng(rng_seed)
    rows = rng.choice(d.n, size=m, replace=False)
    return DataMatrix(d.values[rows], d.column_names)


def from_columns(columns: Sequence[Sequence[float]], names=None) -> DataMatrix:
    return DataMatrix(np.column_stack([np.asarray(c, dtype=float) for c in columns]), names)
