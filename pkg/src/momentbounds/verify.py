"""Machine verification of the moment inequalities over grids and random
instances, plus a counterexample search.

Every comparison goes through one slack discipline:

* an exact link gets only the numerical slack (1e-9 on the norm scale);
* a statistical link is widened by its 3-sigma confidence interval; it is a
  *violation* only when the CI-widened inequality fails, *inconclusive* when
  the CI straddles the boundary, and a pass only when the margin clears the
  combined slack.  Statistical links that resolve decisively are tallied in
  ``ci_resolved``; inconclusive cases are never counted as passes.

Reports are reproducible: all randomness derives from (seed, case index)
substreams, and merges use a fixed fold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import bounds, coeffs, dists, summoments
from .coeffs import CoefficientVector
from .dists import DistributionSpec, gamma_p
from .errors import (
    DegenerateCoefficientsError,
    EngineCapacityError,
    ResidueCancellationError,
)
from .summoments import MomentEstimate

__all__ = [
    "NUMERICAL_SLACK",
    "COS_PRODUCT_SLACK",
    "VerificationReport",
    "SearchConfig",
    "merge_reports",
    "reference_estimate",
    "sample_coefficient_vector",
    "default_t_grid",
    "check_cos_product",
    "check_comparison_chain",
    "check_extremality",
    "check_bounds_sandwich",
    "check_p24_comparison",
    "check_gk_ratio",
    "search_counterexamples",
    "suite",
    "SUITE_CHECKS",
    "SEARCH_CHECKS",
    "DEFAULT_P_GRID",
]

NUMERICAL_SLACK = 1e-9
COS_PRODUCT_SLACK = 1e-12
DEFAULT_P_GRID = (2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0)
COEFFICIENT_REGIMES = ("uniform", "geometric", "spiked")


@dataclass(frozen=True)
class VerificationReport:
    """Pass/fail ledger for one check: counts, worst signed margin
    (negative = violation), CI bookkeeping and the seed that reproduces it.

    ``witness`` carries the instance achieving the worst margin for the
    counterexample search; None elsewhere.
    """

    check: str
    cases: int
    violations: int
    worst_margin: float
    ci_resolved: int
    inconclusive: int
    seed: int
    witness: tuple[float, ...] | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "cases": self.cases,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "ci_resolved": self.ci_resolved,
            "inconclusive": self.inconclusive,
            "seed": self.seed,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def merge_reports(reports: Sequence[VerificationReport], check: str, seed: int) -> VerificationReport:
    """Associative, commutative fold of per-instance reports."""
    cases = sum(r.cases for r in reports)
    violations = sum(r.violations for r in reports)
    ci_resolved = sum(r.ci_resolved for r in reports)
    inconclusive = sum(r.inconclusive for r in reports)
    worst = math.inf
    witness = None
    for r in reports:
        if r.worst_margin < worst:
            worst = r.worst_margin
            witness = r.witness
    if not reports:
        worst = math.inf
    return VerificationReport(check, cases, violations, worst, ci_resolved, inconclusive, seed, witness)


# --- estimates with certainty intervals on the norm scale ---------------------


@dataclass(frozen=True)
class _Norm:
    value: float
    lo: float
    hi: float
    statistical: bool = False

    @classmethod
    def exact(cls, x: float) -> "_Norm":
        return cls(x, x, x, False)

    @classmethod
    def from_estimate(cls, est: MomentEstimate) -> "_Norm":
        r = est.rigor
        if r.kind == "exact":
            return cls.exact(est.value)
        p = est.p
        raw = est.raw_moment
        if r.kind == "tolerance":
            lo = (raw * (1.0 - r.epsilon)) ** (1.0 / p) if raw > 0 else 0.0
            hi = (raw * (1.0 + r.epsilon)) ** (1.0 / p) if raw > 0 else 0.0
            return cls(est.value, lo, hi, False)
        lo = max(raw - r.halfwidth, 0.0) ** (1.0 / p)
        hi = (raw + r.halfwidth) ** (1.0 / p)
        return cls(est.value, lo, hi, True)


@dataclass
class _Tally:
    """Accumulator for link comparisons within one check invocation."""

    cases: int = 0
    violations: int = 0
    ci_resolved: int = 0
    inconclusive: int = 0
    worst: float = math.inf
    margins: list = field(default_factory=list)

    def compare(self, lhs: _Norm, rhs: _Norm, slack: float = NUMERICAL_SLACK) -> float:
        """Record the inequality lhs >= rhs; returns the raw margin."""
        margin = lhs.value - rhs.value
        certain_worst = lhs.lo - rhs.hi
        certain_best = lhs.hi - rhs.lo
        statistical = lhs.statistical or rhs.statistical
        self.cases += 1
        self.margins.append(margin)
        self.worst = min(self.worst, margin)
        if certain_best < -slack:
            self.violations += 1
        elif certain_worst >= -slack:
            if statistical:
                self.ci_resolved += 1
        else:
            self.inconclusive += 1
        return margin

    def report(self, check: str, seed: int, witness=None) -> VerificationReport:
        worst = self.worst if self.cases else math.inf
        return VerificationReport(
            check, self.cases, self.violations, worst, self.ci_resolved, self.inconclusive, seed, witness
        )


# --- engine selection ----------------------------------------------------------

_FALLBACK_ERRORS = (EngineCapacityError, DegenerateCoefficientsError, ResidueCancellationError)


def engine_applies(method: str, d: DistributionSpec) -> bool:
    """Whether an engine computes the law of d (Weibull alpha = 1 coincides
    with the two-sided exponential, so its exact engines apply there)."""
    exponential_like = d.kind == dists.SYM_EXPONENTIAL or (
        d.kind == dists.WEIBULL_TAIL and d.alpha == 1.0
    )
    if method == "enumeration":
        return d.kind == dists.RADEMACHER
    if method in ("partialFractions", "recursion"):
        return exponential_like
    if method == "haagerup":
        return d.kind == dists.RADEMACHER or exponential_like
    if method == "closedForm":
        return d.kind == dists.GAUSSIAN
    if method == "monteCarlo":
        return True
    raise ValueError(f"unknown engine {method!r}")


def reference_estimate(
    v: CoefficientVector,
    d: DistributionSpec,
    p: float,
    *,
    samples: int = 200_000,
    seed: int = 0,
    prefer: Sequence[str] | None = None,
) -> MomentEstimate:
    """Strongest available engine for ||sum a_i X_i||_p under d.

    Default ladders: Rademacher enumeration -> Monte Carlo; two-sided
    exponential partial fractions -> recursion -> Monte Carlo; Gaussian
    closed form; Weibull-tail Monte Carlo only.
    """
    if prefer is None:
        prefer = {
            dists.RADEMACHER: ("enumeration", "monteCarlo"),
            dists.SYM_EXPONENTIAL: ("partialFractions", "recursion", "monteCarlo"),
            dists.GAUSSIAN: ("closedForm",),
            dists.WEIBULL_TAIL: ("monteCarlo",),
        }[d.kind]
    last_error: Exception | None = None
    for method in prefer:
        if not engine_applies(method, d):
            raise ValueError(f"engine {method!r} does not compute {d.kind!r} sums")
        try:
            if method == "enumeration":
                return summoments.rademacher_sum_moment(v, p)
            if method == "partialFractions":
                return summoments.laplace_sum_moment_exact(v, p)
            if method == "recursion":
                return summoments.laplace_sum_moment_recursion(v, p)
            if method == "haagerup":
                kind = d.kind if d.kind == dists.RADEMACHER else dists.SYM_EXPONENTIAL
                return summoments.haagerup_moment(v, kind, p)
            if method == "closedForm":
                return summoments.gaussian_sum_norm(v, p)
            if method == "monteCarlo":
                return summoments.monte_carlo_sum_moment(v, d, p, samples, seed)
        except _FALLBACK_ERRORS as exc:
            last_error = exc
    raise last_error if last_error is not None else ValueError("no engine accepted the input")


# --- instance generation ---------------------------------------------------------


def sample_coefficient_vector(
    rng: np.random.Generator, n: int, regime: str | None = None
) -> CoefficientVector:
    """One random coefficient vector from the three regimes the bounds
    distinguish: balanced (uniform), tail-dominated (geometric decay) and
    head-dominated (spiked)."""
    if regime is None:
        regime = COEFFICIENT_REGIMES[int(rng.integers(0, len(COEFFICIENT_REGIMES)))]
    signs = rng.choice([-1.0, 1.0], n)
    if regime == "uniform":
        vals = rng.uniform(-1.0, 1.0, n)
    elif regime == "geometric":
        r = float(rng.uniform(0.2, 0.95))
        vals = signs * (r ** np.arange(1, n + 1)) * float(rng.uniform(0.5, 2.0))
    elif regime == "spiked":
        vals = signs * np.concatenate(([rng.uniform(1.0, 3.0)], rng.uniform(0.0, 0.3, n - 1)))
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return CoefficientVector(vals)


def default_t_grid(rng: np.random.Generator | None = None) -> np.ndarray:
    """Default grid for the cosine-product check: [0, 100] at step 1e-3 plus
    10^4 random points in [0, 10^4] when a stream is supplied."""
    grid = np.arange(0.0, 100.0 + 1e-9, 1e-3)
    if rng is None:
        return grid
    return np.concatenate([grid, rng.uniform(0.0, 1e4, 10_000)])


# --- deterministic checks ---------------------------------------------------------


def _cos_product_margins(v: CoefficientVector, t: np.ndarray) -> np.ndarray:
    a = v.as_array()
    lhs = np.prod(np.cos(np.outer(t, a)), axis=1) + 0.5 * (a[0] * t) ** 2 if len(a) else np.ones_like(t)
    if len(a) > 1:
        rhs = np.exp(-np.sum(np.log1p(0.5 * np.outer(t, a[1:]) ** 2), axis=1))
    else:
        rhs = np.ones_like(t)
    return lhs - rhs


def check_cos_product(
    v: CoefficientVector, t_grid: Iterable[float], seed: int = 0
) -> VerificationReport:
    """prod cos(a_i t) + a_1^2 t^2/2 >= prod_{i>=2} 1/(1 + a_i^2 t^2/2) on a
    grid, absolute slack 1e-12.  Deterministic; the input must be rearranged
    (the hypothesis |a_1| >= ... >= |a_n|)."""
    if not v.is_rearranged():
        raise ValueError("check_cos_product requires a rearranged vector")
    t = np.asarray(list(t_grid), dtype=float)
    margins = _cos_product_margins(v, t)
    violations = int(np.sum(margins < -COS_PRODUCT_SLACK))
    worst = float(np.min(margins)) if len(margins) else math.inf
    return VerificationReport("cos_product", len(t), violations, worst, 0, 0, seed)


# --- engine-backed checks -----------------------------------------------------------


def check_comparison_chain(
    v: CoefficientVector, p: float, seed: int, samples: int = 100_000
) -> VerificationReport:
    """The three-link chain for one vector:

    gamma_p ||a||_2 >= ||sum a_i eps_i||_p >= ||sum_{i >= ceil(p/2)} a*_i E_i||_p
    >= gamma_p (sum_{i >= ceil(p/2)} a*_i^2)^{1/2},

    on the norm scale, strongest engine per term.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p!r}")
    rearranged = coeffs.rearrange(v)
    _, tail = coeffs.head_tail_split(rearranged, p)
    e1 = _Norm.exact(gamma_p(p) * coeffs.norm(rearranged, 2))
    e2 = _Norm.from_estimate(reference_estimate(rearranged, dists.rademacher(), p, samples=samples, seed=seed))
    e3 = _Norm.from_estimate(
        reference_estimate(tail, dists.sym_exponential(), p, samples=samples, seed=seed + 1)
    )
    e4 = _Norm.exact(gamma_p(p) * coeffs.norm(tail, 2))
    tally = _Tally()
    tally.compare(e1, e2)
    tally.compare(e2, e3)
    tally.compare(e3, e4)
    return tally.report("comp2", seed)


def check_p24_comparison(
    v: CoefficientVector, p: float, seed: int, samples: int = 100_000
) -> VerificationReport:
    """E|sum_{i=1}^n a_i eps_i|^p >= E|sum_{i=2}^n a_i E_i|^p for 2 <= p <= 4
    (drop exactly the largest coefficient on the right)."""
    if not 2 <= p <= 4:
        raise ValueError(f"p must lie in [2, 4], got {p!r}")
    if not v.is_rearranged():
        raise ValueError("check_p24_comparison requires a rearranged vector")
    lhs = _Norm.from_estimate(reference_estimate(v, dists.rademacher(), p, samples=samples, seed=seed))
    rest = CoefficientVector(v.values[1:])
    rhs = _Norm.from_estimate(
        reference_estimate(rest, dists.sym_exponential(), p, samples=samples, seed=seed + 1)
    )
    tally = _Tally()
    tally.compare(lhs, rhs)
    return tally.report("p24", seed)


def check_extremality(
    v: CoefficientVector, alpha: float, p: float, seed: int, samples: int = 100_000
) -> VerificationReport:
    """||sum a_i eps_i||_p <= ||sum a_i X_i||_p <= ||sum a_i E_i||_p for
    X Weibull-tailed with shape alpha, p >= 3; the middle term is Monte
    Carlo, the ends exact where available."""
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p!r}")
    w = dists.weibull_tail(alpha)
    left = _Norm.from_estimate(reference_estimate(v, dists.rademacher(), p, samples=samples, seed=seed))
    mid = _Norm.from_estimate(summoments.monte_carlo_sum_moment(v, w, p, samples, seed + 1))
    right = _Norm.from_estimate(
        reference_estimate(v, dists.sym_exponential(), p, samples=samples, seed=seed + 2)
    )
    tally = _Tally()
    tally.compare(mid, left)
    tally.compare(right, mid)
    return tally.report("extremality", seed)


def _contains(tally: _Tally, ref: _Norm, lower: _Norm, upper: _Norm, slack=NUMERICAL_SLACK):
    tally.compare(ref, lower, slack)
    tally.compare(upper, ref, slack)


def check_bounds_sandwich(
    v: CoefficientVector, d: DistributionSpec, p: float, seed: int, samples: int = 100_000
) -> VerificationReport:
    """Reference norm inside every applicable closed-form interval:
    estrad/khintchine (Rademacher, p >= 2), estexp (exponential, p >= 2),
    logconc and the Gaussian-gap window incl. its signed form (p >= 3)."""
    ref_est = reference_estimate(v, d, p, samples=samples, seed=seed)
    ref = _Norm.from_estimate(ref_est)
    tally = _Tally()
    if d.kind == dists.RADEMACHER and p >= 2:
        bi = bounds.rademacher_bounds(v, p)
        _contains(tally, ref, _Norm.exact(bi.lower), _Norm.exact(bi.upper))
        bk = bounds.khintchine_bounds(v, p)
        _contains(tally, ref, _Norm.exact(bk.lower), _Norm.exact(bk.upper))
    if d.kind == dists.SYM_EXPONENTIAL and p >= 2:
        bi = bounds.exponential_bounds(v, p)
        _contains(tally, ref, _Norm.exact(bi.lower), _Norm.exact(bi.upper))
    if p >= 3:
        rearranged = coeffs.rearrange(v)
        head = CoefficientVector(rearranged.values[: coeffs.head_count_below(p, len(v))])
        head_est = reference_estimate(head, d, p, samples=samples, seed=seed + 1)
        hn = _Norm.from_estimate(head_est)
        m = coeffs.half_ceil(p)
        g_tail = gamma_p(p) * coeffs.norm(CoefficientVector(rearranged.values[m - 1 :]), 2)
        lower = _Norm(max(g_tail, hn.value), max(g_tail, hn.lo), max(g_tail, hn.hi), hn.statistical)
        upper = _Norm(g_tail + hn.value, g_tail + hn.lo, g_tail + hn.hi, hn.statistical)
        _contains(tally, ref, lower, upper)
        # Gaussian approximation gap, in signed form (no clamp)
        center = gamma_p(p) * coeffs.norm(v, 2)
        width = p * coeffs.norm(v, math.inf)
        tally.compare(ref, _Norm.exact(center - width))
        tally.compare(_Norm.exact(center + width), ref)
    return tally.report("sandwich", seed)


def check_gk_ratio(
    v: CoefficientVector,
    d: DistributionSpec,
    p: float,
    seed: int,
    samples: int = 100_000,
    band: tuple[float, float] = (1.0 / 20.0, 20.0),
) -> VerificationReport:
    """Empirical two-sidedness of the Orlicz dual-norm functional:
    ||sum_{i<p} a_i X_i||_p / gk stays inside a configurable band (the
    underlying equivalence holds up to unspecified universal constants)."""
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p!r}")
    rearranged = coeffs.rearrange(v)
    head = CoefficientVector(rearranged.values[: coeffs.head_count_below(p, len(v))])
    tally = _Tally()
    if len(head) == 0 or coeffs.norm(head, 2) == 0.0:
        return tally.report("gk_ratio", seed)
    gk = bounds.gk_dual_norm(head, [bounds.OrliczFunction(d)] * len(head), p)
    if gk <= 0.0:
        return tally.report("gk_ratio", seed)
    est = reference_estimate(head, d, p, samples=samples, seed=seed)
    hn = _Norm.from_estimate(est)
    ratio = _Norm(hn.value / gk, hn.lo / gk, hn.hi / gk, hn.statistical)
    tally.compare(ratio, _Norm.exact(band[0]))
    tally.compare(_Norm.exact(band[1]), ratio)
    return tally.report("gk_ratio", seed)


# --- counterexample search ------------------------------------------------------


SEARCH_CHECKS = ("cos_product", "comp2", "p24", "rec2")


@dataclass(frozen=True)
class SearchConfig:
    check: str
    n_max: int = 6
    p_grid: tuple[float, ...] = (2.5, 3.0, 4.0, 6.0)
    iterations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.check not in SEARCH_CHECKS:
            raise ValueError(f"search supports {SEARCH_CHECKS}, got {self.check!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


def _search_margin(check: str, inst: tuple, rng: np.random.Generator) -> float:
    """Worst margin of one instance, exact/deterministic engines only."""
    if check == "cos_product":
        v, = inst
        t = np.concatenate([np.geomspace(1e-3, 50.0, 64), rng.uniform(0.0, 100.0, 32)])
        return float(np.min(_cos_product_margins(v, t)))
    if check == "rec2":
        a, b, p = inst
        lhs = dists.single_moment_rademacher(a, b, p)
        rhs = abs(b) ** p + 0.5 * p * (p - 1.0) * a * a * abs(b) ** (p - 2.0)
        return (lhs - rhs) / max(1.0, abs(rhs))
    v, p = inst
    rearranged = coeffs.rearrange(v)
    rad = _Norm.from_estimate(summoments.rademacher_sum_moment(rearranged, p))
    if check == "comp2":
        _, tail = coeffs.head_tail_split(rearranged, p)
        lap = _Norm.from_estimate(_exactish_laplace(tail, p))
        links = [
            gamma_p(p) * coeffs.norm(rearranged, 2) - rad.value,
            rad.value - lap.value,
            lap.value - gamma_p(p) * coeffs.norm(tail, 2),
        ]
        return min(links)
    # p24
    rest = CoefficientVector(rearranged.values[1:])
    lap = _Norm.from_estimate(_exactish_laplace(rest, p))
    return rad.value - lap.value


def _exactish_laplace(v: CoefficientVector, p: float) -> MomentEstimate:
    try:
        return summoments.laplace_sum_moment_exact(v, p)
    except _FALLBACK_ERRORS:
        return summoments.laplace_sum_moment_recursion(v, p)


def _search_instance(check: str, cfg: SearchConfig, rng: np.random.Generator) -> tuple:
    if check == "rec2":
        a = float(rng.uniform(-3.0, 3.0))
        b = float(rng.uniform(-3.0, 3.0))
        p = float(rng.choice([x for x in cfg.p_grid if x >= 3.0] or [3.0]))
        return (a, b, p)
    n = int(rng.integers(1, cfg.n_max + 1))
    v = coeffs.rearrange(sample_coefficient_vector(rng, n))
    if check == "cos_product":
        return (v,)
    if check == "p24":
        p_ok = [x for x in cfg.p_grid if 2.0 <= x <= 4.0]
    else:
        p_ok = [x for x in cfg.p_grid if x >= 2.0]
    p = float(rng.choice(p_ok or [3.0]))
    return (v, p)


def _search_perturb(check: str, inst: tuple, rng: np.random.Generator) -> tuple:
    if check == "rec2":
        a, b, p = inst
        return (a * (1.0 + 0.1 * rng.standard_normal()), b * (1.0 + 0.1 * rng.standard_normal()), p)
    v = inst[0]
    vals = v.as_array() * (1.0 + 0.15 * rng.standard_normal(len(v)))
    v2 = coeffs.rearrange(CoefficientVector(vals))
    return (v2,) + inst[1:]


def search_counterexamples(config: SearchConfig) -> VerificationReport:
    """Random restarts plus coordinate-wise perturbation hill-climbing on the
    negative margin of the chosen inequality.  Returns the minimal margin
    found and its witness; a margin below the combined slack would expose an
    implementation bug (the inequalities are proved)."""
    rng = dists.substream(config.seed, 0)
    slack = COS_PRODUCT_SLACK if config.check == "cos_product" else NUMERICAL_SLACK * 10
    best_local = math.inf
    state = None
    worst = math.inf
    witness: tuple[float, ...] | None = None
    violations = 0
    for it in range(config.iterations):
        if state is None or it % 25 == 0:
            inst = _search_instance(config.check, config, rng)
            best_local = math.inf
        else:
            inst = _search_perturb(config.check, state, rng)
        margin = _search_margin(config.check, inst, rng)
        if margin < best_local:
            best_local = margin
            state = inst
        if margin < worst:
            worst = margin
            if config.check == "rec2":
                witness = tuple(float(x) for x in inst)
            else:
                witness = tuple(float(x) for x in inst[0].values)
        if margin < -slack:
            violations += 1
    return VerificationReport(
        config.check + "_search", config.iterations, violations, worst, 0, 0, config.seed, witness
    )


# --- suite ------------------------------------------------------------------------


SUITE_CHECKS = ("cos_product", "comp2", "p24", "extremality", "sandwich", "gk_ratio")


def _suite_vectors(rng: np.random.Generator, sizes: Sequence[int]) -> list[CoefficientVector]:
    out = []
    for n in sizes:
        for regime in COEFFICIENT_REGIMES:
            out.append(sample_coefficient_vector(rng, n, regime))
    return out


def suite(
    seed: int,
    *,
    samples: int = 50_000,
    checks: Sequence[str] | None = None,
    p_grid: Sequence[float] | None = None,
    gk_band: tuple[float, float] = (1.0 / 20.0, 20.0),
) -> list[VerificationReport]:
    """Run the named checks (default: all) over the default grids; one merged
    report per check, byte-reproducible from the seed."""
    wanted = tuple(checks) if checks is not None else SUITE_CHECKS
    for c in wanted:
        if c not in SUITE_CHECKS:
            raise ValueError(f"unknown check {c!r}; available: {SUITE_CHECKS}")
    ps = tuple(p_grid) if p_grid is not None else DEFAULT_P_GRID
    reports = []
    for check in SUITE_CHECKS:
        if check not in wanted:
            continue
        idx = SUITE_CHECKS.index(check)
        rng = dists.substream(seed, idx)
        case_seed = int(rng.integers(0, 2**31))
        subs: list[VerificationReport] = []
        if check == "cos_product":
            for v in _suite_vectors(rng, (1, 2, 4, 8)):
                subs.append(check_cos_product(coeffs.rearrange(v), default_t_grid(rng), seed))
        elif check == "comp2":
            for v in _suite_vectors(rng, (1, 3, 6, 8)):
                for p in [x for x in ps if x >= 2]:
                    subs.append(check_comparison_chain(v, p, case_seed, samples))
                    case_seed += 7
        elif check == "p24":
            for v in _suite_vectors(rng, (1, 3, 6, 8)):
                for p in [x for x in ps if 2 <= x <= 4]:
                    subs.append(check_p24_comparison(coeffs.rearrange(v), p, case_seed, samples))
                    case_seed += 7
        elif check == "extremality":
            for alpha in (1.0, 1.5, 2.0, 3.0):
                for v in _suite_vectors(rng, (2, 6)):
                    for p in [x for x in ps if x >= 3][:3]:
                        subs.append(check_extremality(v, alpha, p, case_seed, samples))
                        case_seed += 7
        elif check == "sandwich":
            kinds = (dists.rademacher(), dists.sym_exponential(), dists.weibull_tail(2.0))
            for d in kinds:
                vectors = _suite_vectors(rng, (2, 5, 8))
                if d.kind == dists.WEIBULL_TAIL:
                    vectors.append(CoefficientVector([1.0 / 8.0] * 64))  # MC-only size
                for v in vectors:
                    grid = [x for x in ps if x >= (3 if d.kind == dists.WEIBULL_TAIL else 2)][:4]
                    for p in grid:
                        subs.append(check_bounds_sandwich(v, d, p, case_seed, samples))
                        case_seed += 7
        elif check == "gk_ratio":
            for d in (dists.sym_exponential(), dists.weibull_tail(2.0)):
                for v in _suite_vectors(rng, (3, 6)):
                    for p in [x for x in ps if x >= 3][:3]:
                        subs.append(check_gk_ratio(v, d, p, case_seed, samples, gk_band))
                        case_seed += 7
        reports.append(merge_reports(subs, check, seed))
    return reports
