"""BaseLaw: abstract foundation for every parametric family.

This class defines:
- the exact first and second moments every family must expose
- a ``validate`` hook raising ``InvalidParameter`` with the offending field
- derived quantities shared by all families (variance)
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

from blevy.utils.errors import InvalidParameter


class BaseLaw(ABC):
    """Abstract base class for offspring, displacement and jump laws.

    Families must implement:
    - mean -> float
    - second_moment -> float
    - validate(prefix: str) -> None
    """

    # --------------------------------------------------------
    # Required abstract members
    # --------------------------------------------------------
    @property
    @abstractmethod
    def mean(self) -> float:
        """Exact first moment."""
        raise NotImplementedError

    @property
    @abstractmethod
    def second_moment(self) -> float:
        """Exact second (raw) moment."""
        raise NotImplementedError

    @abstractmethod
    def validate(self, prefix: str) -> None:
        """Check parameter ranges.

        Parameters
        ----------
        prefix : str
            Dotted config path of this law, used to name offending fields.

        """
        raise NotImplementedError

    # --------------------------------------------------------
    # Shared helpers
    # --------------------------------------------------------
    @property
    def variance(self) -> float:
        """Exact variance."""
        return self.second_moment - self.mean**2


def require_param(condition: bool, field: str, message: str) -> None:
    """Raise ``InvalidParameter`` naming ``field`` unless ``condition`` holds."""
    if not condition:
        raise InvalidParameter(field, message)


def is_real(value: float) -> bool:
    """Return True for finite ints/floats (bools excluded)."""
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )
