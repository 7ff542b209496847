"""Sample correlation matrix and the ordered absolute off-diagonal entries."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .ingest import DataMatrix, _check_variance


@dataclass(frozen=True)
class CorrelationMatrix:
    s: np.ndarray
    n: int

    def __post_init__(self):
        s = np.array(self.s, dtype=float, copy=True)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] < 2:
            raise DimensionError(f"expected a square matrix with p >= 2, got shape {s.shape}")
        # exact symmetry from the upper triangle, unit diagonal set rather than computed
        upper = np.triu(s, 1)
        s = np.clip(upper + upper.T, -1.0, 1.0)
        np.fill_diagonal(s, 1.0)
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def p(self) -> int:
        return self.s.shape[0]

    def to_csv(self, path) -> None:
        np.savetxt(Path(path), self.s, delimiter=",", fmt="%.17g")


def correlation_matrix(d: DataMatrix) -> CorrelationMatrix:
    """S_ij = x_i . x_j / (|x_i| |x_j|) on centered columns."""
    centered = d.values - d.values.mean(axis=0)
    norms = _check_variance(d, centered)
    unit = centered / norms
    return CorrelationMatrix(unit.T @ unit, d.n)


@dataclass(frozen=True)
class OrderedEdges:
    """All pairs ``i < j`` sorted by ``|S_ij|`` descending, ties by ``(i, j)``."""

    values: np.ndarray
    i: np.ndarray
    j: np.ndarray
    p: int
    n: int

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return zip(self.values.tolist(), self.i.tolist(), self.j.tolist())

    def __getitem__(self, k):
        return float(self.values[k]), int(self.i[k]), int(self.j[k])


def ordered_edges(c: CorrelationMatrix) -> OrderedEdges:
    iu, ju = np.triu_indices(c.p, 1)
    vals = np.abs(c.s[iu, ju])
    # lexsort uses the last key as primary
    order = np.lexsort((ju, iu, -vals))
    return OrderedEdges(vals[order], iu[order], ju[order], c.p, c.n)


def edges_from_values(values, p: int, n: int = 0) -> OrderedEdges:
    """Build OrderedEdges from a dict ``{(i, j): |S_ij|}`` or a full matrix."""
    s = np.eye(p)
    if isinstance(values, dict):
        for (a, b), v in values.items():
            s[a, b] = s[b, a] = v
    else:
        s = np.asarray(values, dtype=float)
    return ordered_edges(CorrelationMatrix(s, n))
