"""Jump-diffusion motion: drift + Brownian part + compound-Poisson jumps.

Only increments over given durations are ever sampled; no path is stored.
An increment over ``dt`` is

    drift * dt + N(0, diffusion_var * dt) + sum_{i=1}^{K} J_i,  K ~ Poisson(jump_rate * dt)

and the jump sum is drawn in one shot from the exact law of a sum of K
marks (see ``Marginal.sample_sum``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from blevy.base.base_law import is_real, require_param
from blevy.model.displacement import Marginal, ZeroMarginal
from blevy.utils.errors import NegativeDuration
from blevy.utils.logger import setup_logger

logger = setup_logger("Levy", "blevy_levy.log")


@dataclass(frozen=True)
class LevySpec:
    """Parameters of a jump-diffusion.

    Parameters
    ----------
    drift : float
        Deterministic drift, position per unit time.
    diffusion_var : float
        Brownian variance rate, position^2 per unit time.
    jump_rate : float
        Jumps per unit time.
    jump_law : Marginal
        Law of each jump mark.

    """

    drift: float = 0.0
    diffusion_var: float = 0.0
    jump_rate: float = 0.0
    jump_law: Marginal = field(default_factory=ZeroMarginal)

    def validate(self, prefix: str = "model.motion") -> None:
        """Check every field; raises ``InvalidParameter`` naming the field."""
        require_param(
            is_real(self.drift), f"{prefix}.drift", f"must be finite, got {self.drift!r}"
        )
        require_param(
            is_real(self.diffusion_var) and self.diffusion_var >= 0,
            f"{prefix}.diffusion_var",
            f"must be >= 0, got {self.diffusion_var!r}",
        )
        require_param(
            is_real(self.jump_rate) and self.jump_rate >= 0,
            f"{prefix}.jump_rate",
            f"must be >= 0, got {self.jump_rate!r}",
        )
        self.jump_law.validate(f"{prefix}.jump")

    @property
    def has_jumps(self) -> bool:
        """True when jumps occur with non-zero marks."""
        return self.jump_rate > 0 and not self.jump_law.is_zero

    @property
    def is_zero(self) -> bool:
        """True for the zero process Z = 0."""
        return self.drift == 0 and self.diffusion_var == 0 and not self.has_jumps

    @property
    def is_deterministic(self) -> bool:
        """True when the motion is pure drift."""
        return self.diffusion_var == 0 and not self.has_jumps

    def without_drift(self) -> LevySpec:
        """Return the same process with the drift removed."""
        return replace(self, drift=0.0)


def levy_moments(spec: LevySpec) -> tuple[float, float]:
    """Return ``(E[Z_1], Var(Z_1))``.

    Parameters
    ----------
    spec : LevySpec
        The motion.

    Returns
    -------
    tuple[float, float]
        Mean rate ``drift + jump_rate * E[J]`` and variance rate
        ``diffusion_var + jump_rate * E[J^2]``.

    """
    if not spec.has_jumps:
        return float(spec.drift), float(spec.diffusion_var)
    mean_rate = spec.drift + spec.jump_rate * spec.jump_law.mean
    var_rate = spec.diffusion_var + spec.jump_rate * spec.jump_law.second_moment
    return float(mean_rate), float(var_rate)


def sample_increments(
    spec: LevySpec, dts: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Draw independent increments ``Z_{t+dt} - Z_t``, one per entry of ``dts``.

    Parameters
    ----------
    spec : LevySpec
        The motion.
    dts : np.ndarray
        Non-negative durations.
    rng : np.random.Generator
        Random stream; not consumed when the motion is deterministic.

    Returns
    -------
    np.ndarray
        Increments; entries with ``dt == 0`` are exactly 0.

    Raises
    ------
    NegativeDuration
        If any duration is negative.

    """
    dts = np.asarray(dts, dtype=float)
    if dts.size and float(dts.min()) < 0:
        raise NegativeDuration(float(dts.min()))

    out = spec.drift * dts
    if spec.diffusion_var > 0:
        out = out + rng.normal(0.0, np.sqrt(spec.diffusion_var * dts))
    if spec.has_jumps:
        counts = rng.poisson(spec.jump_rate * dts)
        out = out + spec.jump_law.sample_sum(rng, counts)
    return np.where(dts == 0, 0.0, out)


def sample_increment(spec: LevySpec, dt: float, rng: np.random.Generator) -> float:
    """Draw one increment over ``dt``.

    Parameters
    ----------
    spec : LevySpec
        The motion.
    dt : float
        Duration, ``>= 0``.
    rng : np.random.Generator
        Random stream.

    Returns
    -------
    float
        One draw of ``Z_{t+dt} - Z_t``; exactly 0 when ``dt == 0``.

    Raises
    ------
    NegativeDuration
        If ``dt < 0``.

    """
    if dt < 0:
        raise NegativeDuration(dt)
    if dt == 0:
        return 0.0
    value = float(sample_increments(spec, np.array([dt]), rng)[0])
    logger.debug(f"sample_increment(dt={dt}) -> {value}")
    return value
