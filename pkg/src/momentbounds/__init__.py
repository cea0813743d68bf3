"""Moments of weighted sums of independent symmetric random variables,
closed-form two-sided Khintchine-type bounds, and machine verification of
the underlying inequalities at desk scale."""

__version__ = "0.1.0"

from . import bounds, coeffs, dists, summoments, verify  # noqa: F401
from .coeffs import CoefficientVector  # noqa: F401
from .dists import DistributionSpec  # noqa: F401
from .summoments import MomentEstimate, Rigor  # noqa: F401
from .bounds import BoundInterval, OrliczFunction  # noqa: F401
from .verify import VerificationReport  # noqa: F401
