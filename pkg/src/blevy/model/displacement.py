"""Displacement families and their coupling across siblings.

A ``Marginal`` is a real-valued law with exact first two moments and an
exact sampler for sums of i.i.d. copies. The same families serve as the
jump marks of the motion's compound-Poisson part.
"""

from __future__ import annotations

from abc import abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import override

import numpy as np

from blevy.base.base_law import BaseLaw, is_real, require_param
from blevy.model.offspring import OffspringLaw


class Marginal(BaseLaw):
    """Real-valued law with an exact sampler."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` i.i.d. values."""
        raise NotImplementedError

    @abstractmethod
    def sample_sum(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        """For each entry k of ``counts`` draw the sum of k i.i.d. values.

        Parameters
        ----------
        rng : np.random.Generator
            Random stream.
        counts : np.ndarray
            Non-negative integer counts.

        Returns
        -------
        np.ndarray
            Float array shaped like ``counts``; entries with k = 0 are 0.

        """
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:
        """True when the law is the point mass at 0."""
        return False


@dataclass(frozen=True)
class ZeroMarginal(Marginal):
    """Point mass at 0."""

    @property
    @override
    def mean(self) -> float:
        return 0.0

    @property
    @override
    def second_moment(self) -> float:
        return 0.0

    @property
    @override
    def is_zero(self) -> bool:
        return True

    @override
    def validate(self, prefix: str) -> None:
        return None

    @override
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.zeros(size)

    @override
    def sample_sum(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(counts))


@dataclass(frozen=True)
class DeterministicMarginal(Marginal):
    """Point mass at ``value``."""

    value: float

    @property
    @override
    def mean(self) -> float:
        return float(self.value)

    @property
    @override
    def second_moment(self) -> float:
        return float(self.value) ** 2

    @property
    @override
    def is_zero(self) -> bool:
        return self.value == 0

    @override
    def validate(self, prefix: str) -> None:
        """Require a finite ``value``."""
        require_param(
            is_real(self.value), f"{prefix}.value", f"must be finite, got {self.value!r}"
        )

    @override
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, float(self.value))

    @override
    def sample_sum(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        return np.asarray(counts, dtype=float) * float(self.value)


@dataclass(frozen=True)
class GaussianMarginal(Marginal):
    """Normal law with mean ``mu`` and variance ``var``."""

    mu: float
    var: float

    @property
    @override
    def mean(self) -> float:
        return float(self.mu)

    @property
    @override
    def second_moment(self) -> float:
        return float(self.var) + float(self.mu) ** 2

    @override
    def validate(self, prefix: str) -> None:
        """Require finite ``mu`` and ``var >= 0``."""
        require_param(is_real(self.mu), f"{prefix}.mu", f"must be finite, got {self.mu!r}")
        require_param(
            is_real(self.var) and self.var >= 0,
            f"{prefix}.var",
            f"must be >= 0, got {self.var!r}",
        )

    @override
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.normal(self.mu, np.sqrt(self.var), size)

    @override
    def sample_sum(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        k = np.asarray(counts, dtype=float)
        # sum of k normals is N(k mu, k var)
        return rng.normal(k * self.mu, np.sqrt(k * self.var))


@dataclass(frozen=True)
class PoissonMarginal(Marginal):
    """Poisson law with mean ``mu`` (integer-valued marks)."""

    mu: float

    @property
    @override
    def mean(self) -> float:
        return float(self.mu)

    @property
    @override
    def second_moment(self) -> float:
        return float(self.mu) + float(self.mu) ** 2

    @override
    def validate(self, prefix: str) -> None:
        """Require ``mu > 0``."""
        require_param(
            is_real(self.mu) and self.mu > 0,
            f"{prefix}.mu",
            f"must be > 0, got {self.mu!r}",
        )

    @override
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.poisson(self.mu, size).astype(float)

    @override
    def sample_sum(self, rng: np.random.Generator, counts: np.ndarray) -> np.ndarray:
        k = np.asarray(counts, dtype=float)
        return rng.poisson(k * self.mu).astype(float)


class Coupling(Enum):
    """How sibling displacements relate to each other."""

    IID = "iid"  # independent draws given N
    SHARED = "shared"  # one common draw for all children


@dataclass(frozen=True)
class AggregateMoments:
    """Moments of the displacement sum over one brood.

    Attributes
    ----------
    sum_mean : float
        E[sum D_i].
    sum_of_squares : float
        E[sum D_i^2].
    square_of_sum : float
        E[(sum D_i)^2].
    excess_cross : float
        E[(N - 1) sum D_i], the brood-size/displacement cross moment.

    """

    sum_mean: float
    sum_of_squares: float
    square_of_sum: float
    excess_cross: float

    def as_tuple(self) -> tuple[float, float, float]:
        """Return ``(E[sum D], E[sum D^2], E[(sum D)^2])``."""
        return (self.sum_mean, self.sum_of_squares, self.square_of_sum)


@dataclass(frozen=True)
class DisplacementLaw:
    """Per-child marginal plus a coupling mode."""

    marginal: Marginal
    coupling: Coupling = Coupling.IID

    def validate(self, prefix: str) -> None:
        """Validate the marginal and the coupling tag."""
        require_param(
            isinstance(self.coupling, Coupling),
            f"{prefix}.coupling",
            f"must be one of {[c.value for c in Coupling]}, got {self.coupling!r}",
        )
        self.marginal.validate(prefix)

    @property
    def is_zero(self) -> bool:
        """True when every child lands on its parent's death position."""
        return self.marginal.is_zero

    def aggregate_moments(self, offspring: OffspringLaw) -> AggregateMoments:
        """Brood-level displacement moments for the given offspring law."""
        e_d = self.marginal.mean
        e_d2 = self.marginal.second_moment
        e_n = offspring.mean
        if self.coupling is Coupling.IID:
            square_of_sum = e_n * e_d2 + offspring.factorial_moment * e_d**2
        else:
            square_of_sum = offspring.second_moment * e_d2
        return AggregateMoments(
            sum_mean=e_n * e_d,
            sum_of_squares=e_n * e_d2,
            square_of_sum=square_of_sum,
            excess_cross=offspring.factorial_moment * e_d,
        )

    def sample_children(self, rng: np.random.Generator, n: int) -> list[float]:
        """Draw the displacements of an ``n``-child brood."""
        if n == 0 or self.marginal.is_zero:
            return [0.0] * n
        if self.coupling is Coupling.SHARED:
            return [float(self.marginal.sample(rng, 1)[0])] * n
        return self.marginal.sample(rng, n).tolist()
