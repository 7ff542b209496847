"""Null distribution of scaled sample correlations and the bounds built on it.

Under independence, ``x = sqrt(n) |S_ij|`` computed from ``n`` centered
observations has density

    f_n(x) = c_n (1 - x^2/n)^((n-4)/2),   0 <= x <= sqrt(n),
    c_n = 2/sqrt(n pi) * Gamma((n-1)/2) / Gamma((n-2)/2).

The tail ``Fbar_n`` is evaluated through the regularized incomplete beta
function, since ``S_ij^2 ~ Beta(1/2, (n-2)/2)``. An adaptive Gauss-Kronrod
rule integrates ``f_n`` independently and is used for every integral of the
form ``int g(Fbar_n(x)) f_n(x) dx``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

from .errors import DomainError

QUAD_ABS_TOL = 1e-10

# Gauss-Kronrod 7/15 abscissae (non-negative half) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[[13, 11, 9]] = _WG[:3]
_GAUSS_W[7] = _WG[3]


def _gk15(func, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(func(mid + half * _NODES), dtype=float)
    kron = half * np.dot(_KRONROD_W, fx)
    gauss = half * np.dot(_GAUSS_W, fx)
    return kron, abs(kron - gauss)


def adaptive_quad(func: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                  abs_tol: float = QUAD_ABS_TOL, rel_tol: float = 0.0,
                  points: Optional[Sequence[float]] = None, limit: int = 5000):
    """Globally adaptive Gauss-Kronrod (7, 15) quadrature.

    ``func`` must accept a numpy array of abscissae. The interval with the
    largest error estimate is bisected until the summed estimate drops below
    ``max(abs_tol, rel_tol * |I|)``. ``points`` seeds the initial partition,
    which matters for integrands with narrow peaks.

    Returns ``(value, error_estimate)``.
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = sorted({a, b, *(float(t) for t in (points or ()) if a < t < b)})
    heap = []
    total, err = 0.0, 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _gk15(func, lo, hi)
        total += v
        err += e
        heapq.heappush(heap, (-e, lo, hi, v))
    evaluations = len(heap)
    while err > max(abs_tol, rel_tol * abs(total)) and evaluations < limit:
        neg_e, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_e, lo, hi, v))
            break
        v1, e1 = _gk15(func, lo, mid)
        v2, e2 = _gk15(func, mid, hi)
        total += v1 + v2 - v
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        evaluations += 2
    # re-sum to shed accumulated cancellation error
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return sign * total, err


@dataclass(frozen=True)
class NullMarginal:
    """Null law of ``sqrt(n) |S_ij|`` for sample size ``n >= 3``."""

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"null marginal needs n >= 3, got {self.n}")

    @property
    def root_n(self) -> float:
        return math.sqrt(self.n)

    @property
    def c_n(self) -> float:
        n = self.n
        log_ratio = special.gammaln((n - 1) / 2) - special.gammaln((n - 2) / 2)
        return 2.0 / math.sqrt(n * math.pi) * math.exp(log_ratio)

    @property
    def a_n(self) -> float:
        """Left end of the interval where the Mills lower bound holds."""
        n = self.n
        if n == 3:
            return math.sqrt(3 / 5)
        return math.sqrt((math.sqrt(8 * n * n - 16 * n + 1) - 2 * n + 1) / (2 * (n - 3)))


def _scalar_or_array(x, out):
    return float(out) if np.ndim(x) == 0 else out


def f_n(nm: NullMarginal, x):
    """Density of ``sqrt(n)|S_ij|``; zero off ``[0, sqrt(n)]``."""
    xa = np.asarray(x, dtype=float)
    inside = (xa >= 0) & (xa <= nm.root_n)
    r = xa / nm.root_n
    # factored form keeps base exactly 0 at the endpoint
    base = np.where(inside, (1.0 - r) * (1.0 + r), 1.0)
    with np.errstate(divide="ignore"):
        out = np.where(inside, nm.c_n * np.power(np.maximum(base, 0.0), (nm.n - 4) / 2), 0.0)
    return _scalar_or_array(x, out)


def tail_Fbar(nm: NullMarginal, x):
    """Upper tail ``Pr(sqrt(n)|S_ij| > x)``."""
    xa = np.asarray(x, dtype=float)
    u = np.clip(1.0 - xa * xa / nm.n, 0.0, 1.0)
    out = special.betainc((nm.n - 2) / 2, 0.5, u)
    out = np.where(xa <= 0, 1.0, np.where(xa >= nm.root_n, 0.0, out))
    return _scalar_or_array(x, out)


def tail_inverse(nm: NullMarginal, q):
    """The ``x`` with ``Fbar_n(x) = q`` for ``q`` in ``[0, 1]``."""
    qa = np.asarray(q, dtype=float)
    u = special.betaincinv((nm.n - 2) / 2, 0.5, np.clip(qa, 0.0, 1.0))
    out = np.sqrt(nm.n * np.clip(1.0 - u, 0.0, 1.0))
    return _scalar_or_array(q, out)


def _theta(nm: NullMarginal, x: float) -> float:
    return math.asin(min(max(x / nm.root_n, 0.0), 1.0))


def density_integral(nm: NullMarginal, g: Optional[Callable], x_lo: float, x_hi: float,
                     points: Sequence[float] = (), abs_tol: float = QUAD_ABS_TOL,
                     rel_tol: float = 0.0):
    """``int_{x_lo}^{x_hi} g(x) f_n(x) dx`` by adaptive quadrature.

    Substitutes ``x = sqrt(n) sin(theta)`` so ``f_n dx`` becomes the smooth
    ``c_n sqrt(n) cos(theta)^(n-3) dtheta``, including the endpoint
    singularity at ``n = 3``. ``g=None`` integrates the density alone.
    """
    scale = nm.c_n * nm.root_n
    power = nm.n - 3

    def integrand(theta):
        w = scale * np.cos(theta) ** power
        if g is None:
            return w
        return np.asarray(g(nm.root_n * np.sin(theta)), dtype=float) * w

    x_lo, x_hi = max(x_lo, 0.0), min(x_hi, nm.root_n)
    if x_hi <= x_lo:
        return 0.0, 0.0
    t_points = [_theta(nm, t) for t in points]
    return adaptive_quad(integrand, _theta(nm, x_lo), _theta(nm, x_hi),
                         abs_tol=abs_tol, rel_tol=rel_tol, points=t_points)


def tail_Fbar_quad(nm: NullMarginal, x: float) -> float:
    """Quadrature route to :func:`tail_Fbar`, kept independent of the beta function."""
    return density_integral(nm, None, x, nm.root_n)[0]


def mills_bounds(nm: NullMarginal, x: float):
    """Bounds on ``Fbar_n(x) / f_n(x)`` as ``(lower, upper)``.

    ``lower`` is ``None`` for ``x <= a_n``, outside its proven range.
    """
    n = nm.n
    if not 0 < x < nm.root_n:
        raise DomainError(f"Mills bounds need 0 < x < sqrt(n) = {nm.root_n:g}, got {x}")
    shrink = 1.0 - x * x / n
    upper = n / (n - 2) / x * shrink
    lower = (n + 1) / (n - 2) * x / (x * x + 1) * shrink if x > nm.a_n else None
    return lower, upper


def mills_ratio(nm: NullMarginal, x: float, rel_tol: float = 1e-12) -> float:
    """``Fbar_n(x) / f_n(x)`` by quadrature of ``f_n(w) / f_n(x)``.

    Both factors underflow near ``sqrt(n)`` for large ``n``; the scaled
    integrand ``((n - w^2) / (n - x^2))^((n-4)/2)`` does not.
    """
    n, root = nm.n, nm.root_n
    if not 0 <= x < root:
        raise DomainError(f"Mills ratio needs 0 <= x < sqrt(n) = {root:g}, got {x}")
    if n == 4:
        return root - x
    log_base = math.log((root - x) * (root + x))
    expo = (n - 4) / 2

    def scaled(w):
        return np.exp(expo * (np.log((root - w) * (root + w)) - log_base))

    # integrand decays on a scale of roughly (n - x^2) / (n x)
    width = root - x
    scale = min(width, (root - x) * (root + x) / (max(n - 4, 1) * max(x, 1e-3)))
    points = [x + scale * f for f in (1.0, 4.0, 16.0, 64.0) if scale * f < width]
    val, _ = adaptive_quad(scaled, x, root, abs_tol=0.0, rel_tol=rel_tol, points=points)
    return val


def _pairs(p: int) -> int:
    return p * (p - 1) // 2


def max_cdf_chenstein(nm: NullMarginal, p: int, x):
    """Poisson approximation ``exp(-C(p,2) Fbar_n(x))`` to ``Pr(sqrt(n) max|S_ij| < x)``.

    See :func:`chenstein_error_bound` for the pointwise error.
    """
    if p < 2:
        raise DomainError(f"need p >= 2, got {p}")
    out = np.exp(-_pairs(p) * np.asarray(tail_Fbar(nm, x)))
    return _scalar_or_array(x, out)


def chenstein_error_bound(nm: NullMarginal, p: int, x):
    fb = np.asarray(tail_Fbar(nm, x))
    return _scalar_or_array(x, 2.0 * p ** 3 * fb * fb)


def max_lower_bound(nm: NullMarginal, p: int) -> float:
    """Upper bound on ``Pr(sqrt(n) max|S_ij| < sqrt(log p))``, valid for p >= 8."""
    if p < 8:
        raise DomainError(f"bound is established only for p >= 8, got {p}")
    return math.exp(-p ** 0.6 / (4.0 * math.sqrt(math.log(p))))


def chebyshev_count_bound(nm: NullMarginal, p: int, x: float, k: float) -> float:
    """Third-moment bound on ``Pr(#{i<j : sqrt(n)|S_ij| > x} < k)``."""
    fb = tail_Fbar(nm, x)
    expected = _pairs(p) * fb
    if not k < expected:
        raise DomainError(f"bound is vacuous unless k < C(p,2) Fbar(x) = {expected:g}")
    return (1.0 + 4.0 * (p - 3) * fb) / (expected * expected) / (1.0 - k / expected) ** 3


def _tail_points(nm: NullMarginal, x_lo: float, x_hi: float, scale: float, count: int = 60):
    """Breakpoints spread evenly in log tail probability, densest where ``Fbar ~ 1/scale``."""
    q_hi = tail_Fbar(nm, x_lo)
    q_lo = max(tail_Fbar(nm, x_hi), 1e-8 / scale)
    if not q_lo < q_hi:
        return []
    return [float(t) for t in tail_inverse(nm, np.geomspace(q_lo, q_hi, count))]


def conjecture_integral(nm: NullMarginal, p: int, k: int):
    """``int_0^U G(x) Fbar^(k-1)(x) f_n(x) dx`` with ``U = sqrt((4 - 2/(k+2)) log p)``.

    ``G`` is replaced by :func:`max_cdf_chenstein`. Returns the integral and
    the integral scaled by ``p^(2k)``; the decay of the latter is the object of
    interest.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    pairs = _pairs(p)
    upper = math.sqrt((4.0 - 2.0 / (k + 2)) * math.log(p))

    def g(x):
        fb = tail_Fbar(nm, x)
        return np.exp(-pairs * fb) * fb ** (k - 1)

    value, _ = density_integral(nm, g, 0.0, upper,
                                points=_tail_points(nm, 0.0, upper, pairs),
                                abs_tol=1e-300, rel_tol=1e-10)
    return value, value * float(p) ** (2 * k)


def int3_bounds_check(nm: NullMarginal, p: int, k: int):
    """Quadrature of ``int e^(-C Fbar) Fbar^k f_n dx`` over ``[0, sqrt(n)]`` and the
    bound ``k! / C^(k+1)`` with ``C = C(p, 2)``."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    pairs = _pairs(p)

    def g(x):
        fb = tail_Fbar(nm, x)
        return np.exp(-pairs * fb) * fb ** k

    value, _ = density_integral(nm, g, 0.0, nm.root_n,
                                points=_tail_points(nm, 0.0, nm.root_n, pairs),
                                abs_tol=1e-300, rel_tol=1e-11)
    return value, math.factorial(k) / float(pairs) ** (k + 1)


def exp_survival(mu: float, t):
    """``Pr(E > t)`` for an exponential with mean ``mu``."""
    if not mu > 0:
        raise DomainError(f"mean must be positive, got {mu}")
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0):
        raise DomainError("t must be non-negative")
    return _scalar_or_array(t, np.exp(-ta / mu))


def gap_threshold(x: float, t: float) -> float:
    """Root ``s > x`` of ``s (s - x) = t``."""
    xa = np.asarray(x, dtype=float)
    return _scalar_or_array(x, 0.5 * (xa + np.sqrt(xa * xa + 4.0 * t)))


def exp_limit_ratio(nm: NullMarginal, x: float, t: float) -> float:
    """``Pr(X (X - x) >= t) / Pr(X >= x)`` for ``X = sqrt(n)|S_ij|``; tends to ``e^-t``."""
    return tail_Fbar(nm, gap_threshold(x, t)) / tail_Fbar(nm, x)


def null_table(n: int, p: int, grid_points: int = 100) -> list[dict]:
    """Rows of ``x, f_n, Fbar_n, Mills bounds, Chen-Stein CDF`` on an open grid over ``(0, sqrt(n))``."""
    nm = NullMarginal(n)
    xs = np.linspace(0.0, nm.root_n, grid_points + 2)[1:-1]
    rows = []
    for x in xs:
        lower, upper = mills_bounds(nm, float(x))
        rows.append({
            "x": float(x),
            "f_n": f_n(nm, float(x)),
            "Fbar_n": tail_Fbar(nm, float(x)),
            "mills_lower": lower,
            "mills_upper": upper,
            "chen_stein": max_cdf_chenstein(nm, p, float(x)),
        })
    return rows
