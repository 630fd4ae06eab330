"""Compensated summary statistics and stable float formatting."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class SampleMoments:
    """Mean, spread and standard error of a sample.

    All sums go through ``math.fsum`` so the result is correctly rounded and
    does not depend on the order of ``values``.
    """

    n: int
    mean: float
    variance: float
    std_error: float
    fourth_central: float

    @property
    def variance_std_error(self) -> float:
        """Large-sample standard error of the sample variance."""
        if self.n < 2:
            return math.nan
        spread = self.fourth_central - self.variance**2
        return math.sqrt(max(spread, 0.0) / self.n)


def sample_moments(values: Sequence[float]) -> SampleMoments:
    """Compute compensated sample moments.

    Parameters
    ----------
    values : Sequence[float]
        The observations. Fewer than two yield ``nan`` spread.

    Returns
    -------
    SampleMoments
        Mean, unbiased variance, standard error of the mean and fourth
        central moment.

    """
    n = len(values)
    if n == 0:
        return SampleMoments(0, math.nan, math.nan, math.nan, math.nan)
    mean = math.fsum(values) / n
    if n < 2:
        return SampleMoments(n, mean, math.nan, math.nan, math.nan)
    devs = [v - mean for v in values]
    variance = math.fsum(d * d for d in devs) / (n - 1)
    fourth = math.fsum(d**4 for d in devs) / n
    return SampleMoments(n, mean, variance, math.sqrt(variance / n), fourth)


def format_float(value: float | int | None) -> str:
    """Shortest round-trip decimal text for CSV output; empty for ``None``."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
