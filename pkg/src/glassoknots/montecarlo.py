"""Replication engine for the null-behaviour simulations.

A :class:`Scenario` fixes the data-generating law. :func:`run` draws
``reps`` independent data sets, computes the knot statistics for each and
aligns them by null step: step ``j`` is the ``j``-th knot at or after the
first edge that leaves the signal block ``A x A``. Each replication seeds its
own generator from ``(seed, rep)``, so results do not depend on execution
order or on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .correlation import correlation_matrix, ordered_edges
from .errors import DimensionError, InputError
from .ingest import DataMatrix, augment_noise, standardize, subsample_rows
from .knotpath import UnionFind, knot_sequence

KINDS = ("global_null", "disconnected_pairs", "clique", "tied_pairs", "augmented_real")
DEFAULT_STRENGTH = {"disconnected_pairs": 0.8, "clique": 0.6, "tied_pairs": 0.7}


@dataclass(frozen=True)
class Scenario:
    """Data-generating settings.

    ``signal_strengths`` overrides ``signal_strength`` per pair for
    ``disconnected_pairs`` (distinct pair correlations). For
    ``augmented_real`` the real columns form the signal set and ``p`` is the
    total width after appending noise.
    """

    kind: str
    n: int
    p: int
    signal_size: int = 0
    signal_strength: Optional[float] = None
    reps: int = 1000
    seed: int = 0
    null_steps: int = 5
    top_d: int = 6
    signal_strengths: Optional[tuple[float, ...]] = None
    real_data: Optional[DataMatrix] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 3 or self.p < 2 or self.reps < 1:
            raise DimensionError(f"need n >= 3, p >= 2, reps >= 1; got {self.n}, {self.p}, {self.reps}")
        if self.kind == "augmented_real":
            if self.real_data is None:
                raise InputError("augmented_real needs real_data")
            if self.real_data.p > self.p:
                raise DimensionError("p must be at least the number of real columns")
            object.__setattr__(self, "signal_size", self.real_data.p)
        if self.kind == "global_null":
            object.__setattr__(self, "signal_size", 0)
        if self.kind in ("disconnected_pairs", "tied_pairs") and self.signal_size % 2:
            raise InputError(f"{self.kind} needs an even signal_size, got {self.signal_size}")
        if self.kind in ("disconnected_pairs", "tied_pairs", "clique") and not 2 <= self.signal_size <= self.p:
            raise InputError(f"signal_size must lie in [2, p], got {self.signal_size}")
        if self.signal_strength is None and self.kind in DEFAULT_STRENGTH:
            object.__setattr__(self, "signal_strength", DEFAULT_STRENGTH[self.kind])
        if self.signal_strengths is not None:
            if self.kind != "disconnected_pairs":
                raise InputError("per-pair strengths apply to disconnected_pairs only")
            strengths = tuple(float(r) for r in self.signal_strengths)
            if len(strengths) != self.signal_size // 2:
                raise InputError(f"need {self.signal_size // 2} pair strengths, got {len(strengths)}")
            object.__setattr__(self, "signal_strengths", strengths)
        for r in self.pair_strengths() if self.kind != "global_null" else ():
            if not 0 < r < 1:
                raise InputError(f"signal strength must lie in (0, 1), got {r}")

    def pair_strengths(self) -> tuple[float, ...]:
        if self.signal_strengths is not None:
            return self.signal_strengths
        if self.kind in ("disconnected_pairs", "tied_pairs"):
            return (self.signal_strength,) * (self.signal_size // 2)
        if self.kind == "clique":
            return (self.signal_strength,)
        return ()

    def signal_pairs(self) -> Optional[list[tuple[int, int]]]:
        """Pairs that must share a component before the first noise edge."""
        a = self.signal_size
        if self.kind in ("disconnected_pairs", "tied_pairs"):
            return [(2 * b, 2 * b + 1) for b in range(a // 2)]
        if self.kind == "clique":
            return [(0, j) for j in range(1, a)]
        if self.kind == "global_null":
            return []
        return None

    @property
    def signal_edges(self) -> Optional[int]:
        """Number of knots that fall inside ``A x A`` when the signal enters first."""
        if self.kind == "global_null":
            return 0
        if self.kind in ("disconnected_pairs", "tied_pairs"):
            return self.signal_size // 2
        if self.kind == "clique":
            return self.signal_size - 1
        return None

    def covariance(self) -> np.ndarray:
        sigma = np.eye(self.p)
        a = self.signal_size
        if self.kind in ("disconnected_pairs", "tied_pairs"):
            for b, r in enumerate(self.pair_strengths()):
                sigma[2 * b, 2 * b + 1] = sigma[2 * b + 1, 2 * b] = r
        elif self.kind == "clique":
            block = np.full((a, a), self.signal_strength)
            np.fill_diagonal(block, 1.0)
            sigma[:a, :a] = block
        return sigma

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("real_data")
        if d["signal_strengths"] is not None:
            d["signal_strengths"] = list(d["signal_strengths"])
        return d


def rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, rep]))


def _sigma_root(s: Scenario) -> Optional[np.ndarray]:
    if s.kind in ("global_null", "augmented_real"):
        return None
    w, v = np.linalg.eigh(s.covariance())
    if w.min() <= 0:
        raise InputError("signal covariance is not positive definite")
    return (v * np.sqrt(w)) @ v.T


def generate(s: Scenario, rep: int, _root=None) -> DataMatrix:
    """Data set number ``rep`` of scenario ``s``; signal variables are columns ``0..|A|-1``."""
    rng = rep_rng(s.seed, rep)
    if s.kind == "augmented_real":
        # two independent child seeds: one for the row draw, one for the noise block
        row_seed, noise_seed = rng.integers(0, 2 ** 63, size=2)
        real = subsample_rows(s.real_data, s.n, int(row_seed))
        return augment_noise(real, s.p - real.p, int(noise_seed))
    z = rng.standard_normal((s.n, s.p))
    root = _sigma_root(s) if _root is None else _root
    if root is None:
        return DataMatrix(z)
    return DataMatrix(z @ root)


@dataclass
class RepOutcome:
    raw: np.ndarray
    first_noise_step: int
    top_disjoint: bool
    signal_first: Optional[bool] = None
    top_outside_noise: Optional[bool] = None


def _replicate(s: Scenario, rep: int, root, width: int) -> RepOutcome:
    d = standardize(generate(s, rep, root))
    edges = ordered_edges(correlation_matrix(d))
    ks = knot_sequence(edges)
    rho = ks.rho
    raw = np.full(width, np.nan)
    count = min(width, ks.M - 1)
    raw[:count] = s.n * rho[:count] * (rho[:count] - rho[1:count + 1])

    a = s.signal_size
    first_noise = ks.M + 1
    uf = UnionFind(s.p)
    for k, knot in enumerate(ks.knots, start=1):
        if not (knot.i < a and knot.j < a):
            first_noise = k
            break
        uf.union(knot.i, knot.j)
    pairs = s.signal_pairs()
    signal_first = None if pairs is None else all(uf.find(i) == uf.find(j) for i, j in pairs)

    top = min(s.top_d, len(edges))
    idx = np.concatenate([edges.i[:top], edges.j[:top]])
    disjoint = len(np.unique(idx)) == 2 * top

    outside_noise = None
    if a > 0:
        # largest edges outside A x A, checked for avoiding A altogether
        outside = ~((edges.i < a) & (edges.j < a))
        head = np.flatnonzero(outside)[:s.top_d]
        outside_noise = bool(np.all(edges.i[head] >= a))
    return RepOutcome(raw, first_noise, disjoint, signal_first, outside_noise)


def _replicate_chunk(args):
    s, reps, width = args
    root = _sigma_root(s)
    return [_replicate(s, r, root, width) for r in reps]


@dataclass
class StepSummary:
    step: int
    mu: float
    count: int
    mean: float
    se: float
    ci_low: float
    ci_high: float
    median: float
    q25: float
    q75: float
    ks_d: float
    ks_pass_1pct: bool
    qq: list = field(repr=False)


@dataclass
class SimulationResult:
    scenario: Scenario
    raw_statistics: np.ndarray
    per_rep_statistics: np.ndarray
    per_rep_first_noise_step: np.ndarray
    top_disjoint: np.ndarray
    summaries: list
    pvalue_samples: np.ndarray
    signal_first: Optional[np.ndarray] = None
    top_outside_noise: Optional[np.ndarray] = None

    @property
    def event_b(self) -> Optional[np.ndarray]:
        """Per replication: each signal pair was connected before the first edge left ``A x A``."""
        return self.signal_first

    def step_means(self) -> np.ndarray:
        return np.array([sm.mean for sm in self.summaries])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rep", "null_step", "k", "t", "p_conservative"])
        for rep in range(self.per_rep_statistics.shape[0]):
            first = int(self.per_rep_first_noise_step[rep])
            for j, t in enumerate(self.per_rep_statistics[rep], start=1):
                if np.isnan(t):
                    continue
                w.writerow([rep, j, first + j - 1, repr(float(t)), repr(math.exp(-t))])
        return buf.getvalue()

    def summary_dict(self) -> dict:
        b = self.event_b
        return {
            "scenario": self.scenario.to_dict(),
            "steps": [{k: v for k, v in asdict(sm).items() if k != "qq"} for sm in self.summaries],
            "event_b_frequency": None if b is None else float(np.mean(b)),
            "top_disjoint_frequency": float(np.mean(self.top_disjoint)),
            "top_outside_noise_frequency": (None if self.top_outside_noise is None
                                            else float(np.mean(self.top_outside_noise))),
            "first_step_pvalue_ks": _ks_summary(self.pvalue_samples, uniform=True),
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.summary_dict(), indent=indent)

    def qq_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["null_step", "theoretical", "empirical"])
        for sm in self.summaries:
            for th, em in sm.qq:
                w.writerow([sm.step, repr(th), repr(em)])
        return buf.getvalue()


    def hist_csv(self, bins: int = 40, upper: float = 6.0) -> str:
        """Counts per null step on ``bins`` equal cells over ``[0, upper]``; the last cell is open."""
        edges = np.linspace(0.0, upper, bins + 1)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["null_step", "left", "right", "count"])
        for j in range(self.per_rep_statistics.shape[1]):
            v = self.per_rep_statistics[:, j]
            v = np.minimum(v[~np.isnan(v)], upper)
            counts, _ = np.histogram(v, bins=edges)
            for c in range(bins):
                right = "inf" if c == bins - 1 else repr(float(edges[c + 1]))
                w.writerow([j + 1, repr(float(edges[c])), right, int(counts[c])])
        return buf.getvalue()


def _raw_width(s: Scenario) -> int:
    return s.signal_size + s.null_steps


def run(s: Scenario, workers: int = 1) -> SimulationResult:
    """Run all replications of ``s`` and aggregate by null step."""
    width = _raw_width(s)
    if workers <= 1:
        outcomes = _replicate_chunk((s, range(s.reps), width))
    else:
        chunks = [(s, range(lo, min(lo + 50, s.reps)), width) for lo in range(0, s.reps, 50)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for part in pool.map(_replicate_chunk, chunks) for o in part]
    return aggregate(s, outcomes)


def aggregate(s: Scenario, outcomes: Sequence[RepOutcome]) -> SimulationResult:
    raw = np.vstack([o.raw for o in outcomes])
    first = np.array([o.first_noise_step for o in outcomes], dtype=int)
    aligned = np.full((len(outcomes), s.null_steps), np.nan)
    for r, f in enumerate(first):
        cols = np.arange(f - 1, f - 1 + s.null_steps)
        ok = cols < raw.shape[1]
        aligned[r, ok] = raw[r, cols[ok]]
    summaries = [summarize_step(aligned[:, j], j + 1) for j in range(s.null_steps)]
    pvals = np.exp(-aligned[:, 0])
    return SimulationResult(s, raw, aligned, first, np.array([o.top_disjoint for o in outcomes]),
                            summaries, pvals, _flags(outcomes, "signal_first"),
                            _flags(outcomes, "top_outside_noise"))


def _flags(outcomes, name):
    values = [getattr(o, name) for o in outcomes]
    return None if values[0] is None else np.array(values, dtype=bool)


def summarize_step(values: np.ndarray, step: int) -> StepSummary:
    mu = 1.0 / step
    v = values[~np.isnan(values)]
    mean = float(v.mean()) if len(v) else math.nan
    se = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else 0.0
    half = 1.959963984540054 * se
    if len(v) >= 20:
        d, ok = ks_distance(v, mu)
    else:
        d, ok = math.nan, False
    qq = qq_points(v, mu) if len(v) else []
    q25, med, q75 = np.quantile(v, [0.25, 0.5, 0.75]) if len(v) else (math.nan,) * 3
    return StepSummary(step, mu, len(v), mean, se, mean - half, mean + half,
                       float(med), float(q25), float(q75), d, ok, qq)


def ks_critical(size: int, level: float = 0.01) -> float:
    """Asymptotic one-sample KS critical value ``K^{-1}(1 - level) / sqrt(size)``."""
    return float(special.kolmogi(level)) / math.sqrt(size)


def ks_distance(samples, mu: float):
    """Sup distance between the empirical CDF and Exp(mean ``mu``).

    Returns ``(d, passes)`` where ``passes`` compares ``d`` with the
    asymptotic 1% critical value.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    size = len(x)
    if size < 20:
        raise DimensionError(f"KS distance needs at least 20 samples, got {size}")
    cdf = -np.expm1(-np.maximum(x, 0.0) / mu)
    above = np.arange(1, size + 1) / size - cdf
    below = cdf - np.arange(size) / size
    d = float(max(above.max(), below.max()))
    return d, bool(d <= ks_critical(size))


def _ks_summary(samples, uniform=False) -> Optional[dict]:
    v = np.asarray(samples, dtype=float)
    v = v[~np.isnan(v)]
    if len(v) < 20:
        return None
    # p = exp(-T) is uniform exactly when T is Exp(1); the KS distance is shared
    t = -np.log(v) if uniform else v
    d, ok = ks_distance(t, 1.0)
    return {"d": d, "pass_1pct": bool(ok), "critical": ks_critical(len(v))}


def qq_points(samples, mu: float = 1.0) -> list[tuple[float, float]]:
    """Sorted samples against Exp(1) quantiles at ``(i - 0.5)/N``.

    Exp(1/k) data trace a line of slope ``1/k``. ``mu`` is carried for the
    caller's reference line and does not change the coordinates.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if len(x) == 0:
        raise DimensionError("QQ points need at least one sample")
    probs = (np.arange(1, len(x) + 1) - 0.5) / len(x)
    theory = -np.log1p(-probs)
    return list(zip(theory.tolist(), x.tolist()))


def qq_slope(points) -> float:
    """Least-squares slope through the origin."""
    th = np.array([a for a, _ in points])
    em = np.array([b for _, b in points])
    return float(th @ em / (th @ th))
