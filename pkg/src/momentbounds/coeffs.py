"""Coefficient vectors and their basic services.

Everything downstream works with the nonincreasing rearrangement of the
absolute coefficients and with the split of a rearranged vector into the
few largest entries (the *head*, 1-based indices i < ceil(p/2)) and the
remainder (the *tail*, indices i >= ceil(p/2)).  Contracts are stated
1-based; storage is an ordinary 0-based tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "CoefficientVector",
    "half_ceil",
    "head_count_below",
    "rearrange",
    "norm",
    "head_tail_split",
]


@dataclass(frozen=True, init=False)
class CoefficientVector:
    """A finite real weight sequence.

    Entries must be finite (no NaN/inf).  The empty vector is permitted so
    that the head of a p <= 2 split stays representable; sums over an empty
    vector are 0 and every norm of it is 0.
    """

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        vals = tuple(float(x) for x in values)
        for i, x in enumerate(vals):
            if not math.isfinite(x):
                raise ValueError(f"coefficient {i} is not finite: {x!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def is_rearranged(self) -> bool:
        """True when |a_1| >= |a_2| >= ... >= |a_n|."""
        a = self.values
        return all(abs(a[i]) >= abs(a[i + 1]) for i in range(len(a) - 1))


def half_ceil(p: float) -> int:
    """ceil(p/2) computed exactly.

    Half-integer p must not drift through floating division, so the ceiling
    is taken on the exact rational value of the float.
    """
    if not math.isfinite(p):
        raise ValueError(f"p must be finite, got {p!r}")
    return int(math.ceil(Fraction(p) / 2))


def head_count_below(p: float, n: int) -> int:
    """Number of 1-based indices i with i < p, clamped to [0, n].

    Used for the strict head ``i < p`` of the log-concave bound; exact for
    integer and half-integer p.
    """
    if not math.isfinite(p):
        raise ValueError(f"p must be finite, got {p!r}")
    frac = Fraction(p)
    count = int(math.ceil(frac)) - 1 if frac == int(frac) else int(math.floor(frac))
    return max(0, min(count, n))


def rearrange(v: CoefficientVector) -> CoefficientVector:
    """Nonincreasing rearrangement of the absolute coefficients.

    Ties are broken by original index (stable), which pins a unique output
    for reproducibility; no computed quantity depends on the tie order.
    """
    absvals = [abs(x) for x in v.values]
    order = sorted(range(len(absvals)), key=lambda i: (-absvals[i], i))
    return CoefficientVector(absvals[i] for i in order)


def norm(v: CoefficientVector, q: float) -> float:
    """l_q norm for q in [1, inf]; the empty vector has norm 0."""
    if q != math.inf and q < 1:
        raise ValueError(f"q must be >= 1 or inf, got {q!r}")
    if len(v) == 0:
        return 0.0
    a = np.abs(v.as_array())
    if q == math.inf:
        return float(a.max())
    if q == 1:
        return float(a.sum())
    if q == 2:
        return float(np.sqrt(np.sum(a * a)))
    # scale out the max to avoid overflow for large q
    top = float(a.max())
    if top == 0.0:
        return 0.0
    return top * float(np.sum((a / top) ** q)) ** (1.0 / q)


def head_tail_split(v: CoefficientVector, p: float) -> tuple[CoefficientVector, CoefficientVector]:
    """Split a rearranged vector at m = ceil(p/2), 1-based.

    head holds indices i < m (possibly empty), tail indices i >= m.
    Requires p >= 2 and a rearranged input.
    """
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p!r}")
    if not v.is_rearranged():
        raise ValueError("head_tail_split requires a rearranged vector")
    m = half_ceil(p)
    cut = min(m - 1, len(v))
    return CoefficientVector(v.values[:cut]), CoefficientVector(v.values[cut:])
