"""Pytest file for testing `src/blevy/model/offspring.py`."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blevy.model.offspring import DeterministicOffspring, GeometricOffspring, TwoPointOffspring
from blevy.utils.errors import InvalidParameter


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random stream."""
    return np.random.default_rng(20240611)


def test_deterministic_moments() -> None:
    """N = k has E[N] = k, E[N^2] = k^2 and matching excess moments."""
    law = DeterministicOffspring(3)
    assert law.mean == 3.0
    assert law.second_moment == 9.0
    assert law.factorial_moment == 6.0
    assert law.excess_mean == 2.0
    assert law.excess_second_moment == 4.0
    assert law.variance == 0.0


def test_twopoint_moments_and_pgf() -> None:
    """TwoPoint(0.2, 2) has mean 1.6 and P(N=0) = 0.2."""
    law = TwoPointOffspring(0.2, 2)
    assert law.mean == pytest.approx(1.6)
    assert law.second_moment == pytest.approx(3.2)
    assert law.p_zero == pytest.approx(0.2)
    assert law.pgf(1.0) == pytest.approx(1.0)


def test_geometric_moments() -> None:
    """Geometric with mean m has E[N^2] = m + 2 m^2."""
    law = GeometricOffspring(2.0)
    assert law.mean == 2.0
    assert law.second_moment == 10.0
    assert law.success == pytest.approx(1.0 / 3.0)
    assert law.pgf(1.0) == pytest.approx(1.0)
    assert law.p_zero == pytest.approx(1.0 / 3.0)


@pytest.mark.parametrize(
    ("law", "field"),
    [
        (DeterministicOffspring(-1), "model.offspring.k"),
        (DeterministicOffspring(True), "model.offspring.k"),  # type: ignore[arg-type]
        (TwoPointOffspring(1.5, 2), "model.offspring.p0"),
        (TwoPointOffspring(0.2, 1), "model.offspring.k"),
        (GeometricOffspring(0.0), "model.offspring.mean"),
        (GeometricOffspring(math.inf), "model.offspring.mean"),
    ],
)
def test_validate_names_field(law: object, field: str) -> None:
    """Out-of-range parameters raise InvalidParameter naming the field."""
    with pytest.raises(InvalidParameter) as exc:
        law.validate("model.offspring")  # type: ignore[attr-defined]
    assert exc.value.field == field


def test_twopoint_sampler_frequencies(rng: np.random.Generator) -> None:
    """Sampled zero frequency of TwoPoint(0.2, 2) is within 4 SE of 0.2."""
    law = TwoPointOffspring(0.2, 2)
    n = 20_000
    draws = [law.sample(rng) for _ in range(n)]
    assert set(draws) <= {0, 2}
    freq = draws.count(0) / n
    se = math.sqrt(0.2 * 0.8 / n)
    assert abs(freq - 0.2) <= 4 * se


def test_geometric_sampler_mean(rng: np.random.Generator) -> None:
    """Sampled geometric counts start at 0 and average the requested mean."""
    law = GeometricOffspring(2.0)
    n = 20_000
    draws = np.array([law.sample(rng) for _ in range(n)])
    assert draws.min() == 0
    se = math.sqrt(law.variance / n)
    assert abs(draws.mean() - 2.0) <= 4 * se


@given(st.integers(min_value=0, max_value=50))
def test_deterministic_excess_identities(k: int) -> None:
    """E[(N-1)^2] = (k-1)^2 and E[N(N-1)] = k(k-1) for N = k."""
    law = DeterministicOffspring(k)
    assert law.excess_second_moment == (k - 1) ** 2
    assert law.factorial_moment == k * (k - 1)


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=2, max_value=20),
)
def test_twopoint_variance_non_negative(p0: float, k: int) -> None:
    """Every TwoPoint law has non-negative variance."""
    law = TwoPointOffspring(p0, k)
    law.validate("model.offspring")
    assert law.variance >= -1e-9
