"""Closed-form two-sided moment bounds and the Orlicz dual-norm functional.

Bound sources (``BoundInterval.source``):

* ``khintchine`` — ||sum a_i eps_i||_p in [||a||_2, gamma_p ||a||_2], p >= 2
                   (upper: optimal-constant Khintchine; lower: norm monotonicity);
* ``comp2``      — the outer members of the Bernoulli/exponential comparison
                   chain: [gamma_p (tail l2), gamma_p ||a||_2], p >= 2;
* ``estrad``     — Rademacher sums: lower max{gamma_p (tail l2), head-sum/sqrt2},
                   upper gamma_p (tail l2) + head-sum, head/tail split at ceil(p/2);
* ``estexp``     — two-sided exponential sums: lower max{gamma_p ||a||_2,
                   (p/(e sqrt2)) ||a||_inf}, upper gamma_p ||a||_2 + p ||a||_inf;
* ``logconc``    — any unit-variance symmetric law with log-concave tails,
                   p >= 3: gamma_p (sum_{i >= ceil(p/2)} a_i^2)^{1/2} combined
                   with the supplied head norm ||sum_{i<p} a_i X_i||_p (the head
                   i < p and tail i >= ceil(p/2) overlap by design);
* ``gaussGap``   — |  ||S||_p - gamma_p ||a||_2 | <= p ||a||_inf, p >= 3,
                   clamped below at 0.

The dual-norm functional sup{ sum a_i b_i : sum M_i(b_i) <= p } with
M_i(x) = x^2 for |x| <= 1 and M_i(x) = -ln P(|X_i| >= |x|) for |x| > 1 is
solved by Lagrange-multiplier bisection on the budget, treating the jump of
M at |x| = 1 as a kink (both one-sided candidates evaluated, ties resolved
toward the largest maximizer), plus an exact budget top-up pass for the
discontinuous-budget case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import coeffs, dists
from .coeffs import CoefficientVector
from .dists import DistributionSpec, gamma_p
from .errors import UnboundedSupremumError
from .summoments import MomentEstimate

__all__ = [
    "BoundInterval",
    "OrliczFunction",
    "khintchine_bounds",
    "comp2_bounds",
    "rademacher_bounds",
    "exponential_bounds",
    "logconcave_bounds",
    "gaussian_approx_gap",
    "gk_dual_norm",
    "BOUND_SOURCES",
]

BOUND_SOURCES = ("khintchine", "comp2", "estrad", "estexp", "logconc", "gaussGap")


@dataclass(frozen=True)
class BoundInterval:
    """A [lower, upper] pair for ||S||_p with its provenance."""

    lower: float
    upper: float
    source: str
    p: float

    def __post_init__(self):
        if self.source not in BOUND_SOURCES:
            raise ValueError(f"unknown bound source {self.source!r}")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("bound endpoints must be finite")
        if self.lower < 0 or self.lower > self.upper:
            raise ValueError(f"need 0 <= lower <= upper, got [{self.lower}, {self.upper}]")

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= x <= self.upper + slack


def _tail_l2(v: CoefficientVector, p: float) -> tuple[CoefficientVector, CoefficientVector, float]:
    rearranged = coeffs.rearrange(v)
    head, tail = coeffs.head_tail_split(rearranged, p)
    return head, tail, coeffs.norm(tail, 2)


def khintchine_bounds(v: CoefficientVector, p: float) -> BoundInterval:
    """[||a||_2, gamma_p ||a||_2] for Rademacher sums, p >= 2."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p!r}")
    l2 = coeffs.norm(v, 2)
    return BoundInterval(l2, max(gamma_p(p) * l2, l2), "khintchine", p)


def comp2_bounds(v: CoefficientVector, p: float) -> BoundInterval:
    """Outer members of the comparison chain: [gamma_p tail-l2, gamma_p ||a||_2]."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p!r}")
    _, _, tl2 = _tail_l2(v, p)
    g = gamma_p(p)
    upper = g * coeffs.norm(v, 2)
    return BoundInterval(min(g * tl2, upper), upper, "comp2", p)


def rademacher_bounds(v: CoefficientVector, p: float) -> BoundInterval:
    """Two-sided bound for ||sum a_i eps_i||_p, p >= 2.

    With the rearranged split at ceil(p/2): the tail contributes at Gaussian
    l2 scale, the head at first-moment scale (lower constant 1/sqrt2).
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p!r}")
    head, _, tl2 = _tail_l2(v, p)
    head_sum = sum(head.values)
    g = gamma_p(p)
    lower = max(g * tl2, head_sum / math.sqrt(2.0))
    return BoundInterval(lower, g * tl2 + head_sum, "estrad", p)


def exponential_bounds(v: CoefficientVector, p: float) -> BoundInterval:
    """Two-sided bound for ||sum a_i E_i||_p, p >= 2."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p!r}")
    l2 = coeffs.norm(v, 2)
    linf = coeffs.norm(v, math.inf)
    g = gamma_p(p)
    lower = max(g * l2, p / (math.e * math.sqrt(2.0)) * linf)
    return BoundInterval(lower, g * l2 + p * linf, "estexp", p)


def logconcave_bounds(
    v: CoefficientVector, d: DistributionSpec, p: float, head_norm: MomentEstimate
) -> BoundInterval:
    """Two-sided bound for ||sum a_i X_i||_p, X symmetric unit-variance with
    log-concave tails, p >= 3.

    ``head_norm`` must be ||sum_{i<p} a_i X_i||_p computed by a summoments
    engine over the 1-based head indices i < p of the rearranged vector; the
    head (i < p) and the l2 tail (i >= ceil(p/2)) overlap by design.
    """
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p!r}")
    if not v.is_rearranged():
        raise ValueError("logconcave_bounds requires a rearranged vector")
    if d.kind not in (dists.RADEMACHER, dists.SYM_EXPONENTIAL, dists.GAUSSIAN, dists.WEIBULL_TAIL):
        raise ValueError(f"unsupported distribution kind {d.kind!r}")
    m = coeffs.half_ceil(p)
    tail = CoefficientVector(v.values[min(m - 1, len(v)) :])
    g_tail = gamma_p(p) * coeffs.norm(tail, 2)
    hn = head_norm.value
    return BoundInterval(max(g_tail, hn), g_tail + hn, "logconc", p)


def gaussian_approx_gap(v: CoefficientVector, p: float) -> BoundInterval:
    """Gaussian approximation window: gamma_p ||a||_2 +- p ||a||_inf, p >= 3,
    clamped below at 0 (norms are nonnegative; the signed form is checked
    separately by the verification module)."""
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p!r}")
    center = gamma_p(p) * coeffs.norm(v, 2)
    width = p * coeffs.norm(v, math.inf)
    return BoundInterval(max(center - width, 0.0), center + width, "gaussGap", p)


# --- Orlicz dual norm ---------------------------------------------------------


class OrliczFunction:
    """Per-coordinate cost M(x) = x^2 for |x| <= 1, N(|x|) beyond, where
    N(t) = -ln P(|X| >= t) is the tail exponent of a unit-variance law.

    M is even and nondecreasing on each piece; when N(1) != 1 it jumps at
    |x| = 1 and the solver treats the jump as a kink.
    """

    def __init__(self, d: DistributionSpec):
        self.dist = d

    def tail_exponent(self, x: float) -> float:
        tp = dists.tail_probability(self.dist, x)
        return math.inf if tp == 0.0 else -math.log(tp)

    def tail_piece_entry_cost(self) -> float:
        """lim_{x -> 1+} N(x): the cost of entering the |x| > 1 piece.

        Infinite for Rademacher (its tail piece is empty), N(1) otherwise.
        """
        if self.dist.kind == dists.RADEMACHER:
            return math.inf
        return self.tail_exponent(1.0)

    def __call__(self, x: float) -> float:
        ax = abs(x)
        return ax * ax if ax <= 1.0 else self.tail_exponent(ax)

    def tail_exponent_inverse(self, y: float) -> float | None:
        """x with N(x) = y, or None when N never attains finite y (Rademacher)."""
        d = self.dist
        if d.kind == dists.RADEMACHER:
            return None
        if d.kind == dists.SYM_EXPONENTIAL:
            return y / math.sqrt(2.0)
        if d.kind == dists.GAUSSIAN:
            from scipy.special import erfcinv

            return math.sqrt(2.0) * float(erfcinv(math.exp(-y)))
        return d.scale * y ** (1.0 / d.alpha)

    def tail_exponent_slope(self, x: float) -> float:
        """N'(x) for x >= 1 (N is convex, so the slope is nondecreasing)."""
        d = self.dist
        if d.kind == dists.RADEMACHER:
            return math.inf
        if d.kind == dists.SYM_EXPONENTIAL:
            return math.sqrt(2.0)
        if d.kind == dists.GAUSSIAN:
            return math.sqrt(2.0 / math.pi) * math.exp(-0.5 * x * x) / math.erfc(x / math.sqrt(2.0))
        return (d.alpha / d.scale) * (x / d.scale) ** (d.alpha - 1.0)

    def largest_sublevel(self, y: float) -> float:
        """max{x >= 0 : M(x) <= y} for y >= 0."""
        if y < 0:
            raise ValueError("sublevel requires y >= 0")
        cand = math.sqrt(y) if y < 1.0 else 1.0
        n1 = self.tail_exponent(1.0)
        if y >= n1:
            inv = self.tail_exponent_inverse(y)
            if inv is not None:
                cand = max(cand, inv)
        return cand

    def slope_inverse(self, s: float, bmax: float) -> float:
        """b in [1, bmax] with N'(b) = s, clipped to the interval."""
        d = self.dist
        if d.kind == dists.SYM_EXPONENTIAL or (d.kind == dists.WEIBULL_TAIL and d.alpha == 1.0):
            # constant slope: the clip decides (largest maximizer on ties)
            return bmax if s >= self.tail_exponent_slope(1.0) else 1.0
        if s <= self.tail_exponent_slope(1.0):
            return 1.0
        if s >= self.tail_exponent_slope(bmax):
            return bmax
        if d.kind == dists.WEIBULL_TAIL:
            return min(max(d.scale * (s * d.scale / d.alpha) ** (1.0 / (d.alpha - 1.0)), 1.0), bmax)
        return float(brentq(lambda x: self.tail_exponent_slope(x) - s, 1.0, bmax))


_GK_SUBSET_CAP = 16


def _gk_regimes(a: np.ndarray, M: Sequence[OrliczFunction], order: list[int]):
    """Regime assignments to try: which coordinates sit on the tail piece
    (b > 1) versus the quadratic piece (b <= 1).

    With identical costs an optimal solution allocates monotonically in |a|
    (exchange argument), so the tail set can be taken as a prefix of the
    coefficients sorted by |a|; heterogeneous costs fall back to all subsets.
    """
    n = len(a)
    identical = all(mi.dist == M[0].dist for mi in M)
    if identical:
        for k in range(n + 1):
            yield frozenset(order[:k])
    elif n <= _GK_SUBSET_CAP:
        for mask in range(1 << n):
            yield frozenset(i for i in range(n) if mask >> i & 1)
    else:
        raise UnboundedSupremumError(
            f"heterogeneous Orlicz costs supported only up to n={_GK_SUBSET_CAP}"
        )


def _gk_solve_regime(
    a: np.ndarray, M: Sequence[OrliczFunction], p: float, tail_set: frozenset[int]
) -> float | None:
    """Exact optimum with each coordinate pinned to one piece of M.

    Quad coordinates take b in [0, 1] at cost b^2; tail coordinates take
    b in [1, bmax] at cost N(b) (convex), so the restricted problem is
    concave and multiplier bisection is exact.  Linear tail segments
    (constant N') make the budget jump at the critical multiplier; the
    remainder is then spent in closed form on the best coordinate, which is
    exact because tied linear segments all trade budget at the same rate.
    """
    n = len(a)
    in_tail = [i in tail_set for i in range(n)]
    for i in tail_set:
        if not math.isfinite(M[i].tail_piece_entry_cost()):
            return None  # no tail piece (Rademacher)
    bmax = [M[i].largest_sublevel(p) if in_tail[i] else 1.0 for i in range(n)]

    def allocate(lam: float) -> tuple[list[float], list[float], float]:
        bs, ms = [], []
        for i in range(n):
            if in_tail[i]:
                b = M[i].slope_inverse(float(a[i]) / lam, bmax[i])
                mval = M[i].tail_exponent(b)
            else:
                b = min(max(float(a[i]) / (2.0 * lam), 0.0), 1.0)
                mval = b * b
            bs.append(b)
            ms.append(mval)
        return bs, ms, float(sum(ms))

    lo, hi = 1e-30, 1e30
    _, _, g_max = allocate(lo)
    if g_max <= p:  # budget cannot be filled: caps are optimal
        bs, _, _ = allocate(lo)
        return float(np.dot(a, bs))
    _, _, g_min = allocate(hi)
    if g_min > p + 1e-12:
        return None  # regime infeasible: tail entry fees alone exceed p
    for _ in range(300):
        mid = math.sqrt(lo * hi)
        g = allocate(mid)[2]
        if g > p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi and hi - lo < 1.0:
            break
    bs, ms, g = allocate(hi)  # feasible side
    # spend any remainder left by a budget jump (linear tail segments)
    for _ in range(2 * n + 2):
        remaining = p - g
        if remaining <= 1e-12 * max(1.0, p):
            break
        best_gain, best_i, best_b, best_m = 0.0, -1, 0.0, 0.0
        for i in range(n):
            if a[i] == 0.0:
                continue
            if in_tail[i]:
                b_new = M[i].tail_exponent_inverse(ms[i] + remaining)
                if b_new is None:
                    continue
                b_new = min(b_new, bmax[i])
                m_new = M[i].tail_exponent(b_new)
            else:
                b_new = min(math.sqrt(ms[i] + remaining), 1.0)
                m_new = b_new * b_new
            gain = float(a[i]) * (b_new - bs[i])
            if gain > best_gain:
                best_gain, best_i, best_b, best_m = gain, i, b_new, m_new
        if best_i < 0:
            break
        g += best_m - ms[best_i]
        bs[best_i], ms[best_i] = best_b, best_m
    return float(np.dot(a, bs))


def gk_dual_norm(v: CoefficientVector, M: Sequence[OrliczFunction], p: float) -> float:
    """sup{ sum a_i b_i : sum M_i(b_i) <= p }.

    By symmetry the optimum takes a_i, b_i >= 0, and the convex, coercive
    budget saturates whenever it can.  The jump of M at |x| = 1 makes the
    plain multiplier bisection leave a duality gap, so the solver pins each
    coordinate to a piece of M (quadratic or tail) and bisects the
    multiplier within each now-concave regime, taking the best regime; the
    one-sided candidates of the kink appear as the b = 1 endpoints of the
    two regimes, with ties resolved toward the largest maximizer.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p!r}")
    if len(M) != len(v):
        raise ValueError(f"got {len(v)} coefficients but {len(M)} Orlicz functions")
    a = np.abs(v.as_array())
    if len(a) == 0 or float(a.max()) == 0.0:
        return 0.0
    for mi in M:
        if not math.isfinite(mi.largest_sublevel(p)):
            raise UnboundedSupremumError("a coordinate's sublevel set is unbounded")
    order = sorted(range(len(a)), key=lambda i: -a[i])
    best = 0.0
    for tail_set in _gk_regimes(a, M, order):
        val = _gk_solve_regime(a, M, p, tail_set)
        if val is not None and val > best:
            best = val
    return best
