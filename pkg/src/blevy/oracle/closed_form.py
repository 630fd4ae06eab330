"""Closed-form moments of the population and of the centred position sum.

With S_t = sum over live particles of (X_{v,t} - r t):

- E|T_t|      = e^{lambda_hat t}
- E|T_t|^2    = (1 + kappa) e^{2 lambda_hat t} - kappa e^{lambda_hat t}
- E[S_t]      = 0
- E[S_t^2]    = c1 e^{2 lambda_hat t} - c2 t e^{lambda_hat t} - c1 e^{lambda_hat t}
- E[|T_t| S_t] = cross_coeff (e^{2 lambda_hat t} - e^{lambda_hat t})

E[S_t^2] solves y' = lambda_hat y + a e^{2 lambda_hat t} + b e^{lambda_hat t}
with a = lambda_hat c1 and b = -c2. Two (c1, c2) pairs are available: the
one obtained when the motion variance is left out of the one-step expansion
and the one that carries it; they coincide for motions with Var(Z_1) = 0.
"""

from __future__ import annotations

import math
from enum import Enum

from blevy.model.config import DerivedConstants
from blevy.utils.errors import InvalidParameter
from blevy.utils.shared_defaults import FD_STEP, FD_STEP_MAX


class MomentVariant(Enum):
    """Which pair of second-moment constants to use."""

    STATED = "stated"
    MOTION_CORRECTED = "corrected"

    @classmethod
    def for_constants(cls, dc: DerivedConstants) -> MomentVariant:
        """Default choice: the stated pair unless the motion has variance."""
        return cls.STATED if dc.motion_var == 0 else cls.MOTION_CORRECTED

    @classmethod
    def parse(cls, text: str) -> MomentVariant:
        """Parse ``"stated"`` or ``"corrected"``."""
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidParameter(
                "experiment.variant", f"must be 'stated' or 'corrected', got {text!r}"
            ) from None

    @property
    def other(self) -> MomentVariant:
        """The opposite variant."""
        if self is MomentVariant.STATED:
            return MomentVariant.MOTION_CORRECTED
        return MomentVariant.STATED

    def constants(self, dc: DerivedConstants) -> tuple[float, float]:
        """Return ``(c1, c2)`` for this variant."""
        if self is MomentVariant.STATED:
            return dc.c1, dc.c2
        return dc.c1_corr, dc.c2_corr


def _check_time(t: float) -> None:
    if not t >= 0:
        raise InvalidParameter("t", f"must be >= 0, got {t!r}")


def expected_population(dc: DerivedConstants, t: float) -> float:
    """E|T_t| = e^{lambda_hat t}."""
    _check_time(t)
    return math.exp(dc.lambda_hat * t)


def population_second_moment(dc: DerivedConstants, t: float) -> float:
    """E[|T_t|^2] = (1 + kappa) e^{2 lambda_hat t} - kappa e^{lambda_hat t}."""
    _check_time(t)
    growth = math.exp(dc.lambda_hat * t)
    return (1.0 + dc.kappa) * growth * growth - dc.kappa * growth


def centered_sum_mean(t: float) -> float:
    """E[S_t], identically zero."""
    _check_time(t)
    return 0.0


def _second_moment_formula(
    dc: DerivedConstants, t: float, variant: MomentVariant
) -> float:
    # no range check: the finite-difference stencil evaluates slightly below 0
    c1, c2 = variant.constants(dc)
    growth = math.exp(dc.lambda_hat * t)
    return c1 * growth * growth - c2 * t * growth - c1 * growth


def centered_sum_second_moment(
    dc: DerivedConstants, t: float, variant: MomentVariant
) -> float:
    """E[S_t^2] for the chosen pair of constants.

    Parameters
    ----------
    dc : DerivedConstants
        Model constants.
    t : float
        Time, ``>= 0``.
    variant : MomentVariant
        Which ``(c1, c2)`` pair to use.

    Returns
    -------
    float
        ``c1 e^{2 lambda_hat t} - c2 t e^{lambda_hat t} - c1 e^{lambda_hat t}``.

    """
    _check_time(t)
    return _second_moment_formula(dc, t, variant)


def martingale_variance(
    dc: DerivedConstants, t: float, variant: MomentVariant
) -> float:
    """Var(M_t) = e^{-2 lambda_hat t} E[S_t^2] = c1 - c2 t e^{-lambda_hat t} - c1 e^{-lambda_hat t}.

    Increases to ``c1`` as ``t`` grows.
    """
    _check_time(t)
    c1, c2 = variant.constants(dc)
    decay = math.exp(-dc.lambda_hat * t)
    return c1 - c2 * t * decay - c1 * decay


def population_centered_cross_moment(dc: DerivedConstants, t: float) -> float:
    """E[|T_t| S_t] = cross_coeff (e^{2 lambda_hat t} - e^{lambda_hat t})."""
    _check_time(t)
    growth = math.exp(dc.lambda_hat * t)
    return dc.cross_coeff * (growth * growth - growth)


def w_stat_mean(t: float) -> float:
    """E[W_t] = 1."""
    _check_time(t)
    return 1.0


def w_stat_second_moment(dc: DerivedConstants, t: float) -> float:
    """E[W_t^2] = (1 + kappa) - kappa e^{-lambda_hat t}."""
    _check_time(t)
    return (1.0 + dc.kappa) - dc.kappa * math.exp(-dc.lambda_hat * t)


def ode_coefficients(dc: DerivedConstants, variant: MomentVariant) -> tuple[float, float]:
    """Return ``(a, b)`` of the second-moment ODE for ``variant``."""
    c1, c2 = variant.constants(dc)
    return dc.lambda_hat * c1, -c2


def ode_residual(
    dc: DerivedConstants,
    t: float,
    h: float = FD_STEP,
    variant: MomentVariant = MomentVariant.STATED,
) -> float:
    """Central-difference derivative of E[S_t^2] minus the ODE right-hand side.

    Parameters
    ----------
    dc : DerivedConstants
        Model constants.
    t : float
        Time, ``>= 0``.
    h : float, optional
        Finite-difference step, ``0 < h <= 1e-4``.
    variant : MomentVariant, optional
        Which constants (and matching ``a``, ``b``) to use.

    Returns
    -------
    float
        The residual; zero up to truncation and rounding error.

    """
    _check_time(t)
    if not 0 < h <= FD_STEP_MAX:
        raise InvalidParameter("h", f"must lie in (0, {FD_STEP_MAX}], got {h!r}")
    derivative = (
        _second_moment_formula(dc, t + h, variant)
        - _second_moment_formula(dc, t - h, variant)
    ) / (2.0 * h)
    return derivative - ode_rhs(dc, t, variant)


def ode_rhs(dc: DerivedConstants, t: float, variant: MomentVariant) -> float:
    """Right-hand side of the second-moment ODE evaluated on the closed form."""
    a, b = ode_coefficients(dc, variant)
    growth = math.exp(dc.lambda_hat * t)
    return (
        dc.lambda_hat * _second_moment_formula(dc, t, variant)
        + a * growth * growth
        + b * growth
    )
