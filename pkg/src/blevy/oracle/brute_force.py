"""Numerical moment oracle, independent of the closed-form solutions.

Conditioning on what happens to the whole population during a short step
``[0, h]`` (the root either survives and moves, or dies and is replaced by a
displaced brood) closes a linear system for the five moments

    P1 = E|T_t|,  P2 = E|T_t|^2,  m1 = E[S_t],  C = E[|T_t| S_t],  s = E[S_t^2]

where ``S_t`` is the centred position sum. The system is assembled directly
from the model moments, including the ``h Var(Z_1) E|T_t|^2`` motion term,
and integrated with an embedded Runge-Kutta 4(5) scheme.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from blevy.model.config import ModelConfig, validate
from blevy.utils.errors import IntegrationFailed, InvalidParameter
from blevy.utils.logger import setup_logger
from blevy.utils.shared_defaults import MIN_ODE_STEPS

logger = setup_logger("BruteForce", "blevy_oracle.log")

ODE_RTOL = 1e-12
ODE_ATOL = 1e-14


@dataclass(frozen=True)
class MomentTrajectory:
    """The five integrated moments at time ``t``."""

    t: float
    pop_mean: float
    pop_second: float
    centered_mean: float
    cross: float
    centered_second: float


def _moment_system(config: ModelConfig) -> Callable[[float, np.ndarray], np.ndarray]:
    m = config.moments
    lam = float(config.lifetime_rate)
    r = m.z_mean + lam * m.sum_d
    dz = m.z_mean - r
    vz = m.z_var
    e_n = m.e_n
    e_nf = m.e_n_factorial
    sd = m.sum_d
    sd2 = m.sum_d2
    sqd = m.sq_sum_d
    xc = m.excess_cross

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        p1, p2, m1, c, s = y
        return np.array(
            [
                -lam * p1 + lam * e_n * p1,
                -lam * p2 + lam * (e_n * p2 + e_nf * p1 * p1),
                -lam * m1 + dz * p1 + lam * (e_n * m1 + sd * p1),
                -lam * c
                + dz * p2
                + lam * (e_n * c + e_nf * p1 * m1 + sd * p2 + xc * p1 * p1),
                -lam * s
                + 2.0 * dz * c
                + vz * p2
                + lam
                * (
                    e_n * s
                    + e_nf * m1 * m1
                    + 2.0 * sd * c
                    + 2.0 * xc * p1 * m1
                    + sd2 * (p2 - p1 * p1)
                    + sqd * p1 * p1
                ),
            ]
        )

    return rhs


def brute_force_moments(
    config: ModelConfig, t: float, n_steps: int = MIN_ODE_STEPS
) -> MomentTrajectory:
    """Integrate the moment system from 0 to ``t``.

    Parameters
    ----------
    config : ModelConfig
        A valid model.
    t : float
        Final time, ``>= 0``.
    n_steps : int, optional
        Minimum number of integrator steps (the step size is capped at
        ``t / n_steps``); at least 1000.

    Returns
    -------
    MomentTrajectory
        All five moments at ``t``.

    Raises
    ------
    InvalidParameter
        If ``t < 0`` or ``n_steps < 1000``.

    """
    if not t >= 0:
        raise InvalidParameter("t", f"must be >= 0, got {t!r}")
    if isinstance(n_steps, bool) or not isinstance(n_steps, int) or n_steps < MIN_ODE_STEPS:
        raise InvalidParameter(
            "n_steps", f"must be an integer >= {MIN_ODE_STEPS}, got {n_steps!r}"
        )
    validate(config)

    y0 = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
    if t == 0:
        return MomentTrajectory(0.0, 1.0, 1.0, 0.0, 0.0, 0.0)

    sol = solve_ivp(
        _moment_system(config),
        (0.0, float(t)),
        y0,
        method="RK45",
        max_step=float(t) / n_steps,
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
    )
    if not sol.success:
        raise IntegrationFailed(sol.message)
    p1, p2, m1, c, s = (float(v) for v in sol.y[:, -1])
    logger.debug(f"brute_force_moments t={t}: {sol.nfev} evaluations, s={s}")
    return MomentTrajectory(float(t), p1, p2, m1, c, s)


def brute_force_second_moment(
    config: ModelConfig, t: float, n_steps: int = MIN_ODE_STEPS
) -> float:
    """E[S_t^2] from the integrated moment system."""
    return brute_force_moments(config, t, n_steps).centered_second
