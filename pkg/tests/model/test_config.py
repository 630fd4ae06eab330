"""Pytest file for testing `src/blevy/model/config.py`."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blevy.levy.levy import LevySpec
from blevy.model.config import (
    ModelConfig,
    derived_constants,
    extinction_probability,
    validate,
)
from blevy.model.displacement import (
    Coupling,
    DeterministicMarginal,
    DisplacementLaw,
    GaussianMarginal,
    PoissonMarginal,
    ZeroMarginal,
)
from blevy.model.offspring import (
    DeterministicOffspring,
    GeometricOffspring,
    OffspringLaw,
    TwoPointOffspring,
)
from blevy.utils.errors import InvalidParameter, SubcriticalOrCritical

UNIT = DisplacementLaw(DeterministicMarginal(1.0))
ZERO = DisplacementLaw(ZeroMarginal())


def test_validate_canonical_config() -> None:
    """Binary splitting with unit displacement validates."""
    validate(ModelConfig(1.0, DeterministicOffspring(2), UNIT))


def test_validate_rejects_critical() -> None:
    """N = 1 is critical."""
    with pytest.raises(SubcriticalOrCritical) as exc:
        validate(ModelConfig(1.0, DeterministicOffspring(1), UNIT))
    assert exc.value.field == "model.offspring"


def test_validate_rejects_negative_rate() -> None:
    """A negative lifetime rate names model.lambda."""
    with pytest.raises(InvalidParameter) as exc:
        validate(ModelConfig(-1.0, DeterministicOffspring(2), UNIT))
    assert exc.value.field == "model.lambda"


def test_validate_names_motion_field() -> None:
    """A negative diffusion variance names its motion field."""
    config = ModelConfig(1.0, DeterministicOffspring(2), ZERO, LevySpec(diffusion_var=-1.0))
    with pytest.raises(InvalidParameter) as exc:
        validate(config)
    assert exc.value.field == "model.motion.diffusion_var"


def test_generation_constants() -> None:
    """lambda=1, N=2, D=+1 gives lambda_hat=1, r=2, kappa=1, c1=6, c2=2."""
    dc = derived_constants(ModelConfig(1.0, DeterministicOffspring(2), UNIT))
    assert (dc.lambda_hat, dc.r, dc.kappa) == (1.0, 2.0, 1.0)
    assert (dc.c1, dc.c2) == (6.0, 2.0)
    assert (dc.c1_corr, dc.c2_corr) == (6.0, 2.0)
    assert dc.q_ext == 0.0
    assert dc.cross_coeff == 2.0


def test_null_constants() -> None:
    """No displacement and no motion gives r = c1 = c2 = 0."""
    dc = derived_constants(ModelConfig(1.0, DeterministicOffspring(2), ZERO))
    assert (dc.r, dc.c1, dc.c2) == (0.0, 0.0, 0.0)


def test_brownian_constants() -> None:
    """Brownian motion only: the stated pair vanishes, the corrected pair is (2, 1)."""
    dc = derived_constants(
        ModelConfig(1.0, DeterministicOffspring(2), ZERO, LevySpec(diffusion_var=1.0))
    )
    assert (dc.lambda_hat, dc.r) == (1.0, 0.0)
    assert (dc.c1, dc.c2) == (0.0, 0.0)
    assert (dc.c1_corr, dc.c2_corr) == (2.0, 1.0)
    assert dc.motion_var == 1.0


def test_constants_match_ode_coefficients() -> None:
    """c1 = a / lambda_hat and c2 = -b for the ODE coefficients a and b."""
    lam = 2.5
    offspring = GeometricOffspring(3.0)
    displacement = DisplacementLaw(GaussianMarginal(0.3, 1.7), Coupling.IID)
    config = ModelConfig(lam, offspring, displacement)
    dc = derived_constants(config)
    m = config.moments

    kappa = m.e_n_excess2 / m.e_n_excess
    a = lam * (kappa * m.sum_d2 + m.sq_sum_d)
    b = -lam * kappa * m.sum_d2
    assert dc.c1 == pytest.approx(a / dc.lambda_hat, rel=1e-12)
    assert dc.c2 == pytest.approx(-b, rel=1e-12)


def test_derived_constants_deterministic() -> None:
    """Two calls on equal configs agree exactly."""
    make = lambda: ModelConfig(  # noqa: E731
        1.3, TwoPointOffspring(0.3, 3), DisplacementLaw(PoissonMarginal(0.7), Coupling.SHARED)
    )
    assert derived_constants(make()) == derived_constants(make())


def test_extinction_examples() -> None:
    """Known extinction probabilities."""
    assert extinction_probability(DeterministicOffspring(2)) == 0.0
    assert extinction_probability(TwoPointOffspring(0.2, 2)) == pytest.approx(0.25, abs=1e-12)
    assert extinction_probability(GeometricOffspring(2.0)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize(
    ("offspring", "expected"),
    [
        (GeometricOffspring(1.1), 1.0 / 1.1),
        (GeometricOffspring(1.01), 1.0 / 1.01),
        (TwoPointOffspring(0.45, 2), 0.45 / 0.55),
        (TwoPointOffspring(0.495, 2), 0.495 / 0.505),
    ],
)
def test_extinction_near_critical(offspring: OffspringLaw, expected: float) -> None:
    """Slowly converging laws still meet the absolute tolerance of 1e-12."""
    assert extinction_probability(offspring) == pytest.approx(expected, abs=1e-12)


def test_extinction_rejects_subcritical() -> None:
    """Mean at most one has no extinction probability below 1."""
    with pytest.raises(SubcriticalOrCritical):
        extinction_probability(GeometricOffspring(0.5))


@given(st.integers(min_value=2, max_value=8))
def test_no_zero_atom_never_dies(k: int) -> None:
    """Laws without mass at 0 have extinction probability exactly 0."""
    assert extinction_probability(DeterministicOffspring(k)) == 0.0


@given(
    lam=st.floats(min_value=0.1, max_value=5.0),
    mean=st.floats(min_value=1.1, max_value=5.0),
    mu=st.floats(min_value=-2.0, max_value=2.0),
    var=st.floats(min_value=0.0, max_value=3.0),
    diffusion=st.floats(min_value=0.0, max_value=3.0),
    shared=st.booleans(),
)
def test_constant_invariants(
    lam: float, mean: float, mu: float, var: float, diffusion: float, shared: bool
) -> None:
    """lambda_hat > 0, c1, c2 >= 0, corrected constants dominate, equality without motion variance."""
    coupling = Coupling.SHARED if shared else Coupling.IID
    config = ModelConfig(
        lam,
        GeometricOffspring(mean),
        DisplacementLaw(GaussianMarginal(mu, var), coupling),
        LevySpec(diffusion_var=diffusion),
    )
    dc = derived_constants(config)
    assert dc.lambda_hat > 0
    assert dc.c1 >= 0 and dc.c2 >= 0
    assert dc.c1_corr >= dc.c1 and dc.c2_corr >= dc.c2
    assert 0.0 <= dc.q_ext < 1.0
    if diffusion == 0:
        assert (dc.c1_corr, dc.c2_corr) == (dc.c1, dc.c2)
    assert math.isfinite(dc.cross_coeff)
