"""Offspring-count families: how many children replace a dying particle."""

from __future__ import annotations

from abc import abstractmethod
from dataclasses import dataclass
from typing import override

import numpy as np

from blevy.base.base_law import BaseLaw, is_real, require_param


class OffspringLaw(BaseLaw):
    """Law of the offspring count N on {0, 1, 2, ...}.

    Besides E[N] and E[N^2], subclasses expose the probability generating
    function, used for the extinction probability, and a sampler.
    """

    @abstractmethod
    def pgf(self, s: float) -> float:
        """Probability generating function E[s^N]."""
        raise NotImplementedError

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> int:
        """Draw one offspring count."""
        raise NotImplementedError

    @property
    def p_zero(self) -> float:
        """P(N = 0)."""
        return self.pgf(0.0)

    @property
    def factorial_moment(self) -> float:
        """E[N(N-1)]."""
        return self.second_moment - self.mean

    @property
    def excess_mean(self) -> float:
        """E[N-1]."""
        return self.mean - 1.0

    @property
    def excess_second_moment(self) -> float:
        """E[(N-1)^2]."""
        return self.second_moment - 2.0 * self.mean + 1.0


@dataclass(frozen=True)
class DeterministicOffspring(OffspringLaw):
    """N = k almost surely."""

    k: int

    @property
    @override
    def mean(self) -> float:
        return float(self.k)

    @property
    @override
    def second_moment(self) -> float:
        return float(self.k * self.k)

    @override
    def validate(self, prefix: str) -> None:
        """Require an integer ``k >= 0``."""
        require_param(
            isinstance(self.k, int) and not isinstance(self.k, bool) and self.k >= 0,
            f"{prefix}.k",
            f"must be an integer >= 0, got {self.k!r}",
        )

    @override
    def pgf(self, s: float) -> float:
        return s**self.k

    @override
    def sample(self, rng: np.random.Generator) -> int:
        return self.k


@dataclass(frozen=True)
class TwoPointOffspring(OffspringLaw):
    """N = 0 with probability ``p0``, otherwise N = ``k``."""

    p0: float
    k: int

    @property
    @override
    def mean(self) -> float:
        return (1.0 - self.p0) * self.k

    @property
    @override
    def second_moment(self) -> float:
        return (1.0 - self.p0) * self.k * self.k

    @override
    def validate(self, prefix: str) -> None:
        """Require ``0 <= p0 <= 1`` and an integer ``k >= 2``."""
        require_param(
            is_real(self.p0) and 0.0 <= self.p0 <= 1.0,
            f"{prefix}.p0",
            f"must be a probability, got {self.p0!r}",
        )
        require_param(
            isinstance(self.k, int) and not isinstance(self.k, bool) and self.k >= 2,
            f"{prefix}.k",
            f"must be an integer >= 2, got {self.k!r}",
        )

    @override
    def pgf(self, s: float) -> float:
        return self.p0 + (1.0 - self.p0) * s**self.k

    @override
    def sample(self, rng: np.random.Generator) -> int:
        return 0 if rng.random() < self.p0 else self.k


@dataclass(frozen=True)
class GeometricOffspring(OffspringLaw):
    """Geometric law on {0, 1, 2, ...} parametrised by its mean.

    P(N = n) = p (1 - p)^n with p = 1 / (1 + mean).
    """

    mean_count: float

    @property
    def success(self) -> float:
        """Success probability p = 1 / (1 + mean)."""
        return 1.0 / (1.0 + self.mean_count)

    @property
    @override
    def mean(self) -> float:
        return float(self.mean_count)

    @property
    @override
    def second_moment(self) -> float:
        m = float(self.mean_count)
        return m + 2.0 * m * m

    @override
    def validate(self, prefix: str) -> None:
        """Require ``mean > 0``."""
        require_param(
            is_real(self.mean_count) and self.mean_count > 0,
            f"{prefix}.mean",
            f"must be > 0, got {self.mean_count!r}",
        )

    @override
    def pgf(self, s: float) -> float:
        p = self.success
        return p / (1.0 - (1.0 - p) * s)

    @override
    def sample(self, rng: np.random.Generator) -> int:
        # numpy's geometric counts trials, support {1, 2, ...}
        return int(rng.geometric(self.success)) - 1
