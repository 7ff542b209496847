"""Sequential statistics along the knot sequence and their exponential p-values.

For knots ``rho_1 >= rho_2 >= ... >= rho_M``

    T_k = n * rho_k * (rho_k - rho_{k+1}),   k = 1, ..., M - 1.

At the first null step ``T_k`` is asymptotically Exp(mean 1); at the ``j``-th
null step it is Exp(mean 1/j). Comparing every step with Exp(1) is therefore
exact at the first null step and conservative afterwards. When the last
signal step ``m`` is known the sharper reference Exp(1/(k - m)) is available.

The covariance-test form of the statistic, computed from the full graphical
lasso solution, equals ``T_k`` algebraically and is not evaluated here.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from typing import Optional

from .errors import InsufficientKnotsError, InvalidStepError
from .knotpath import KnotSequence
from .nulltheory import exp_survival


@dataclass(frozen=True)
class TestStep:
    __test__ = False

    k: int
    rho_k: float
    rho_k1: float
    t: float
    p_conservative: float
    p_exact_given_m: Optional[float] = None


@dataclass(frozen=True)
class TestReport:
    __test__ = False

    steps: tuple[TestStep, ...]
    n: int
    m: Optional[int] = None

    @property
    def M(self) -> int:
        """Number of knots the report was built from."""
        return len(self.steps) + 1

    @property
    def t(self) -> list[float]:
        return [s.t for s in self.steps]

    @property
    def p_conservative(self) -> list[float]:
        return [s.p_conservative for s in self.steps]

    def to_rows(self) -> list[dict]:
        return [{"k": s.k, "rho_k": s.rho_k, "rho_k1": s.rho_k1, "t": s.t,
                 "p_conservative": s.p_conservative,
                 "p_exact_given_m": s.p_exact_given_m} for s in self.steps]

    def to_csv(self, extra: Optional[dict] = None) -> str:
        rows = self.to_rows()
        fields = list(rows[0]) if rows else ["k", "rho_k", "rho_k1", "t",
                                              "p_conservative", "p_exact_given_m"]
        if extra:
            fields += list(extra)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            if extra:
                r.update({key: col[r["k"] - 1] for key, col in extra.items()})
            writer.writerow({key: "" if v is None else _fmt(v) for key, v in r.items()})
        return buf.getvalue()

    def to_json(self, indent=2, **meta) -> str:
        return json.dumps({"n": self.n, "m": self.m, **meta, "steps": self.to_rows()}, indent=indent)


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def test_statistics(ks: KnotSequence) -> TestReport:
    """T_k for k = 1..M-1; the last knot has no successor and gets no statistic."""
    if ks.M < 2:
        raise InsufficientKnotsError(f"need at least 2 knots, got {ks.M}")
    rho = ks.rho
    steps = []
    for k in range(1, ks.M):
        a, b = float(rho[k - 1]), float(rho[k])
        t = ks.n * a * (a - b)
        steps.append(TestStep(k, a, b, t, exp_survival(1.0, t)))
    return TestReport(tuple(steps), ks.n)


test_statistics.__test__ = False


def p_values(tr: TestReport, m: Optional[int] = None) -> TestReport:
    """Attach p-values. With ``m`` given, steps ``k > m`` also get the
    Exp(1/(k - m)) survival ``exp(-(k - m) t)``."""
    if m is None:
        steps = tuple(replace(s, p_conservative=exp_survival(1.0, s.t), p_exact_given_m=None)
                      for s in tr.steps)
        return TestReport(steps, tr.n, None)
    if m < 0 or m >= tr.M:
        raise InvalidStepError(f"known last signal step must satisfy 0 <= m < M = {tr.M}, got {m}")
    steps = []
    for s in tr.steps:
        exact = exp_survival(1.0 / (s.k - m), s.t) if s.k > m else None
        steps.append(replace(s, p_conservative=exp_survival(1.0, s.t), p_exact_given_m=exact))
    return TestReport(tuple(steps), tr.n, m)


def sequential_stop(tr: TestReport, alpha: float) -> Optional[int]:
    """First step whose conservative p-value exceeds ``alpha``.

    A heuristic stopping rule: it has no proven error-rate guarantee.
    """
    if not 0 < alpha < 1:
        raise InvalidStepError(f"alpha must lie in (0, 1), got {alpha}")
    for s in tr.steps:
        if s.p_conservative > alpha:
            return s.k
    return None
