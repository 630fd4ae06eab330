"""Model configuration, validation and the derived constants of the process.

The rates and constants computed here are:

- effective branching rate   lambda_hat = lambda * E[N - 1]
- movement rate              r = E[Z_1] + lambda * E[sum D]
- kappa                      E[(N - 1)^2] / E[N - 1]
- c1, c2                     constants of the centred-sum second moment
  c1 e^{2 lambda_hat t} - c2 t e^{lambda_hat t} - c1 e^{lambda_hat t}
- c1_corr, c2_corr           the same constants with the motion variance
  term carried through the one-step expansion
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from blevy.base.base_law import is_real, require_param
from blevy.levy.levy import LevySpec, levy_moments
from blevy.model.displacement import DisplacementLaw, Marginal
from blevy.model.offspring import OffspringLaw
from blevy.utils.errors import NoConvergence, SubcriticalOrCritical
from blevy.utils.logger import setup_logger
from blevy.utils.shared_defaults import (
    EXTINCTION_BRACKET_STEPS,
    EXTINCTION_MAX_STEPS,
    EXTINCTION_TOL,
)

logger = setup_logger("Model", "blevy_model.log")


@dataclass(frozen=True)
class ModelMoments:
    """Every moment symbol of the model, evaluated once."""

    e_n: float
    e_n2: float
    e_n_factorial: float
    e_n_excess: float
    e_n_excess2: float
    e_d: float
    e_d2: float
    sum_d: float
    sum_d2: float
    sq_sum_d: float
    excess_cross: float
    z_mean: float
    z_var: float

    @classmethod
    def from_laws(
        cls,
        offspring: OffspringLaw,
        displacement: DisplacementLaw,
        motion: LevySpec,
    ) -> ModelMoments:
        """Evaluate all closed-form moments of the three laws."""
        agg = displacement.aggregate_moments(offspring)
        z_mean, z_var = levy_moments(motion)
        return cls(
            e_n=offspring.mean,
            e_n2=offspring.second_moment,
            e_n_factorial=offspring.factorial_moment,
            e_n_excess=offspring.excess_mean,
            e_n_excess2=offspring.excess_second_moment,
            e_d=displacement.marginal.mean,
            e_d2=displacement.marginal.second_moment,
            sum_d=agg.sum_mean,
            sum_d2=agg.sum_of_squares,
            sq_sum_d=agg.square_of_sum,
            excess_cross=agg.excess_cross,
            z_mean=z_mean,
            z_var=z_var,
        )

    def all_finite(self) -> bool:
        """True when every stored moment is a finite real."""
        return all(math.isfinite(v) for v in vars(self).values())


@dataclass(frozen=True)
class ModelConfig:
    """Full specification of one branching Lévy process.

    Parameters
    ----------
    lifetime_rate : float
        Rate ``lambda`` of the exponential lifetimes, per unit time.
    offspring : OffspringLaw
        Law of the number of children.
    displacement : DisplacementLaw
        Law of the children's offsets from the parent's death position.
    motion : LevySpec
        Motion of each particle during its lifetime.

    Notes
    -----
    Construction never fails on bad parameters; call ``validate`` (or any
    operation that needs a valid model) to check them.

    """

    lifetime_rate: float
    offspring: OffspringLaw
    displacement: DisplacementLaw
    motion: LevySpec = field(default_factory=LevySpec)
    moments: ModelMoments = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "moments",
            ModelMoments.from_laws(self.offspring, self.displacement, self.motion),
        )


@dataclass(frozen=True)
class DerivedConstants:
    """Constants derived from a valid ``ModelConfig``.

    Attributes
    ----------
    lambda_hat : float
        Effective branching rate.
    r : float
        Movement rate.
    kappa : float
        E[(N-1)^2] / E[N-1].
    c1, c2 : float
        Second-moment constants as obtained without the motion variance.
    c1_corr, c2_corr : float
        Second-moment constants including the motion variance.
    q_ext : float
        Extinction probability.
    motion_var : float
        Var(Z_1).
    cross_coeff : float
        Coefficient of E[|T_t| sum(X - r t)] = cross_coeff (e^{2 lambda_hat t} - e^{lambda_hat t}).

    """

    lambda_hat: float
    r: float
    kappa: float
    c1: float
    c2: float
    c1_corr: float
    c2_corr: float
    q_ext: float
    motion_var: float = 0.0
    cross_coeff: float = 0.0


def validate(config: ModelConfig) -> None:
    """Check every invariant of a model configuration.

    Parameters
    ----------
    config : ModelConfig
        Configuration to check.

    Raises
    ------
    InvalidParameter
        When a field is out of range; ``.field`` names it.
    SubcriticalOrCritical
        When E[N] <= 1.

    """
    require_param(
        is_real(config.lifetime_rate) and config.lifetime_rate > 0,
        "model.lambda",
        f"must be > 0, got {config.lifetime_rate!r}",
    )
    require_param(
        isinstance(config.offspring, OffspringLaw),
        "model.offspring",
        f"must be an offspring law, got {config.offspring!r}",
    )
    config.offspring.validate("model.offspring")
    require_param(
        isinstance(config.displacement, DisplacementLaw)
        and isinstance(config.displacement.marginal, Marginal),
        "model.displacement",
        f"must be a displacement law, got {config.displacement!r}",
    )
    config.displacement.validate("model.displacement")
    require_param(
        isinstance(config.motion, LevySpec),
        "model.motion",
        f"must be a LevySpec, got {config.motion!r}",
    )
    config.motion.validate("model.motion")

    if not config.offspring.mean > 1.0:
        raise SubcriticalOrCritical(config.offspring.mean)
    require_param(
        config.moments.all_finite(), "model", "all model moments must be finite"
    )


def aggregate_displacement_moments(
    offspring: OffspringLaw, displacement: DisplacementLaw
) -> tuple[float, float, float]:
    """Return ``(E[sum D], E[sum D^2], E[(sum D)^2])`` for one brood.

    Parameters
    ----------
    offspring : OffspringLaw
        Brood-size law.
    displacement : DisplacementLaw
        Per-child marginal and coupling.

    Returns
    -------
    tuple[float, float, float]
        The three aggregate moments.

    """
    return displacement.aggregate_moments(offspring).as_tuple()


def extinction_probability(offspring: OffspringLaw) -> float:
    """Smallest fixed point of the generating function.

    Iterates the generating function from 0, then refines the last iterate
    with a bracketed root search on ``pgf(s) - s``.

    Parameters
    ----------
    offspring : OffspringLaw
        A supercritical offspring law.

    Returns
    -------
    float
        The extinction probability ``q`` in ``[0, 1)``.

    Raises
    ------
    SubcriticalOrCritical
        If E[N] <= 1.
    NoConvergence
        If the iteration does not settle within the step budget.

    """
    offspring.validate("model.offspring")
    if not offspring.mean > 1.0:
        raise SubcriticalOrCritical(offspring.mean)

    q = 0.0
    for step in range(1, EXTINCTION_MAX_STEPS + 1):
        q_next = offspring.pgf(q)
        if abs(q_next - q) < EXTINCTION_TOL:
            logger.debug(f"extinction_probability converged in {step} steps: {q_next}")
            return _polish_fixed_point(offspring, q_next)
        q = q_next
    raise NoConvergence(EXTINCTION_MAX_STEPS)


def _polish_fixed_point(offspring: OffspringLaw, q: float) -> float:
    """Refine an iterate below the smallest root of ``pgf(s) - s`` with Brent's method."""
    gap = lambda s: offspring.pgf(s) - s  # noqa: E731
    if q == 0.0 or gap(q) <= 0.0:
        return q
    # pgf(s) < s strictly between the root and 1
    upper = q
    for _ in range(EXTINCTION_BRACKET_STEPS):
        upper = 0.5 * (upper + 1.0)
        if gap(upper) < 0.0:
            return brentq(
                gap, q, upper, xtol=EXTINCTION_TOL * 1e-3, rtol=4 * np.finfo(float).eps
            )
    return q


def derived_constants(config: ModelConfig) -> DerivedConstants:
    """Compute the derived constants of a model.

    Parameters
    ----------
    config : ModelConfig
        The model; validated first.

    Returns
    -------
    DerivedConstants
        Rates, second-moment constants (both variants) and extinction
        probability.

    """
    validate(config)
    lam = float(config.lifetime_rate)
    m = config.moments

    lambda_hat = lam * m.e_n_excess
    r = m.z_mean + lam * m.sum_d
    kappa = m.e_n_excess2 / m.e_n_excess
    ratio = m.e_n_excess2 / m.e_n_excess**2

    c1 = ratio * m.sum_d2 + m.sq_sum_d / m.e_n_excess
    c2 = lambda_hat * ratio * m.sum_d2
    c1_corr = c1 + (1.0 + kappa) * m.z_var / lambda_hat
    c2_corr = c2 + kappa * m.z_var

    dc = DerivedConstants(
        lambda_hat=lambda_hat,
        r=r,
        kappa=kappa,
        c1=c1,
        c2=c2,
        c1_corr=c1_corr,
        c2_corr=c2_corr,
        q_ext=extinction_probability(config.offspring),
        motion_var=m.z_var,
        cross_coeff=lam * m.excess_cross / lambda_hat,
    )
    logger.debug(f"derived_constants -> {dc}")
    return dc
