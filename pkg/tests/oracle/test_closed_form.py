"""Pytest file for testing `src/blevy/oracle/closed_form.py`."""

from __future__ import annotations

import math

import pytest

from blevy.cli.presets import PRESETS
from blevy.levy.levy import LevySpec
from blevy.model.config import DerivedConstants, ModelConfig, derived_constants
from blevy.model.displacement import DisplacementLaw, GaussianMarginal
from blevy.model.offspring import GeometricOffspring
from blevy.oracle.closed_form import (
    MomentVariant,
    centered_sum_mean,
    centered_sum_second_moment,
    expected_population,
    martingale_variance,
    ode_residual,
    ode_rhs,
    population_centered_cross_moment,
    population_second_moment,
    w_stat_mean,
    w_stat_second_moment,
)
from blevy.utils.errors import InvalidParameter

STATED = MomentVariant.STATED
CORRECTED = MomentVariant.MOTION_CORRECTED
T_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def constants(name: str) -> DerivedConstants:
    """Derived constants of a preset."""
    return derived_constants(PRESETS[name].spec.model)


@pytest.fixture
def generation() -> DerivedConstants:
    """lambda_hat = 1, kappa = 1, c1 = 6, c2 = 2."""
    return constants("generation")


def test_expected_population(generation: DerivedConstants) -> None:
    """E|T_t| = e^{lambda_hat t}."""
    assert expected_population(generation, 0.0) == 1.0
    assert expected_population(generation, 1.0) == pytest.approx(2.718281828)
    dc = derived_constants(ModelConfig(2.0, GeometricOffspring(2.0), PRESETS["null"].spec.model.displacement))
    assert dc.lambda_hat == 2.0
    assert expected_population(dc, 3.0) == pytest.approx(math.exp(6.0))


def test_population_second_moment(generation: DerivedConstants) -> None:
    """E|T_t|^2 = 2 e^{2t} - e^t for binary splitting."""
    assert population_second_moment(generation, 0.0) == 1.0
    assert population_second_moment(generation, 1.0) == pytest.approx(12.0598, abs=1e-4)


def test_centered_sum_mean_is_zero() -> None:
    """E[S_t] = 0."""
    assert [centered_sum_mean(t) for t in (0.0, 1.0, 100.0)] == [0.0, 0.0, 0.0]


def test_centered_sum_second_moment_examples(generation: DerivedConstants) -> None:
    """Unit displacement: 6e^2 - 8e at t = 1; zero at t = 0."""
    assert centered_sum_second_moment(generation, 0.0, STATED) == 0.0
    assert centered_sum_second_moment(generation, 0.0, CORRECTED) == 0.0
    e = math.e
    assert centered_sum_second_moment(generation, 1.0, STATED) == pytest.approx(6 * e**2 - 8 * e)
    assert centered_sum_second_moment(generation, 1.0, STATED) == pytest.approx(22.588, abs=1e-3)


def test_brownian_variants_differ() -> None:
    """Brownian motion only: the stated constants predict 0, the corrected 2e^2 - 3e."""
    dc = constants("brownian-only")
    for t in T_GRID:
        assert centered_sum_second_moment(dc, t, STATED) == 0.0
    e = math.e
    assert centered_sum_second_moment(dc, 1.0, CORRECTED) == pytest.approx(2 * e**2 - 3 * e)
    assert centered_sum_second_moment(dc, 1.0, CORRECTED) == pytest.approx(6.623, abs=1e-3)


def test_martingale_variance(generation: DerivedConstants) -> None:
    """Var(M_t) starts at 0, equals 6 - 14 e^{-4} at t = 4 and tends to c1."""
    assert martingale_variance(generation, 0.0, STATED) == 0.0
    assert martingale_variance(generation, 4.0, STATED) == pytest.approx(6 - 14 * math.exp(-4))
    assert martingale_variance(generation, 4.0, STATED) == pytest.approx(5.7436, abs=1e-4)
    assert abs(martingale_variance(generation, 20.0, STATED) - 6.0) <= 1e-6


def test_martingale_variance_increasing_and_bounded(generation: DerivedConstants) -> None:
    """Var(M_t) increases on the grid and stays below c1."""
    values = [martingale_variance(generation, t, STATED) for t in (0.0, *T_GRID, 8.0)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert all(v <= generation.c1 for v in values)


def test_martingale_variance_matches_second_moment(generation: DerivedConstants) -> None:
    """Var(M_t) = e^{-2 lambda_hat t} E[S_t^2]."""
    for t in T_GRID:
        assert martingale_variance(generation, t, STATED) == pytest.approx(
            math.exp(-2 * t) * centered_sum_second_moment(generation, t, STATED), rel=1e-12
        )


@pytest.mark.parametrize("name", list(PRESETS))
def test_variant_agreement_without_motion_variance(name: str) -> None:
    """Both variants coincide when Var(Z_1) = 0."""
    dc = constants(name)
    if dc.motion_var != 0:
        pytest.skip("motion has variance")
    for t in T_GRID:
        assert centered_sum_second_moment(dc, t, STATED) == pytest.approx(
            centered_sum_second_moment(dc, t, CORRECTED), rel=1e-12, abs=0.0
        )


@pytest.mark.parametrize("name", list(PRESETS))
def test_second_moment_non_negative(name: str) -> None:
    """E[S_t^2] >= 0 for the default variant of every preset."""
    dc = constants(name)
    variant = MomentVariant.for_constants(dc)
    for t in (0.0, *T_GRID):
        assert centered_sum_second_moment(dc, t, variant) >= 0.0


@pytest.mark.parametrize("name", list(PRESETS))
@pytest.mark.parametrize("variant", list(MomentVariant))
def test_ode_self_consistency(name: str, variant: MomentVariant) -> None:
    """The closed form solves its own ODE up to finite-difference error."""
    dc = constants(name)
    for t in T_GRID:
        tol = 1e-6 * (1 + abs(ode_rhs(dc, t, variant)))
        assert abs(ode_residual(dc, t, variant=variant)) <= tol


def test_ode_residual_zero_model() -> None:
    """No displacement and no motion give a residual of exactly 0."""
    dc = constants("null")
    assert ode_residual(dc, 1.0) == 0.0


def test_ode_residual_unit_displacement(generation: DerivedConstants) -> None:
    """Residual at t = 1 with h = 1e-5 is below 1e-5."""
    assert abs(ode_residual(generation, 1.0, h=1e-5)) < 1e-5


def test_ode_residual_subtracts_rhs(generation: DerivedConstants) -> None:
    """Residual plus right-hand side is the central difference of the closed form."""
    t, h = 1.5, 1e-5
    for variant in MomentVariant:
        central = (
            centered_sum_second_moment(generation, t + h, variant)
            - centered_sum_second_moment(generation, t - h, variant)
        ) / (2.0 * h)
        residual = ode_residual(generation, t, h=h, variant=variant)
        total = residual + ode_rhs(generation, t, variant)
        assert total == pytest.approx(central, rel=1e-12)


@pytest.mark.parametrize("name", list(PRESETS))
def test_jensen(name: str) -> None:
    """E|T_t|^2 >= (E|T_t|)^2."""
    dc = constants(name)
    for t in (0.0, *T_GRID):
        assert population_second_moment(dc, t) >= expected_population(dc, t) ** 2 * (1 - 1e-12)


def test_cross_moment_and_w_moments(generation: DerivedConstants) -> None:
    """E[|T| S] = 2 (e^{2t} - e^t); E[W] = 1; E[W^2] = 2 - e^{-t}."""
    assert population_centered_cross_moment(generation, 0.0) == 0.0
    assert population_centered_cross_moment(generation, 1.0) == pytest.approx(
        2 * (math.e**2 - math.e)
    )
    assert w_stat_mean(3.0) == 1.0
    assert w_stat_second_moment(generation, 0.0) == 1.0
    assert w_stat_second_moment(generation, 2.0) == pytest.approx(2 - math.exp(-2))


def test_argument_checks(generation: DerivedConstants) -> None:
    """Negative times and out-of-range steps are rejected."""
    with pytest.raises(InvalidParameter):
        expected_population(generation, -1.0)
    with pytest.raises(InvalidParameter):
        centered_sum_second_moment(generation, -0.5, STATED)
    with pytest.raises(InvalidParameter):
        ode_residual(generation, 1.0, h=0.0)
    with pytest.raises(InvalidParameter):
        ode_residual(generation, 1.0, h=2e-4)


def test_variant_selection() -> None:
    """Default variant follows the motion variance; parsing accepts the CLI names."""
    assert MomentVariant.for_constants(constants("generation")) is STATED
    assert MomentVariant.for_constants(constants("brownian-only")) is CORRECTED
    assert MomentVariant.parse(" Corrected ") is CORRECTED
    assert STATED.other is CORRECTED and CORRECTED.other is STATED
    with pytest.raises(InvalidParameter) as exc:
        MomentVariant.parse("both")
    assert exc.value.field == "experiment.variant"


def test_corrected_constants_general_model() -> None:
    """With motion variance the corrected pair adds (1+kappa) VarZ / lambda_hat and kappa VarZ."""
    config = ModelConfig(
        1.5,
        GeometricOffspring(2.5),
        DisplacementLaw(GaussianMarginal(0.2, 0.4)),
        LevySpec(drift=0.3, diffusion_var=0.8),
    )
    dc = derived_constants(config)
    c1, c2 = CORRECTED.constants(dc)
    assert c1 == pytest.approx(dc.c1 + (1 + dc.kappa) * 0.8 / dc.lambda_hat)
    assert c2 == pytest.approx(dc.c2 + dc.kappa * 0.8)
