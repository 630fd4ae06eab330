"""Pytest file for testing `src/blevy/stats/replicates.py`."""

from __future__ import annotations

import pytest

from blevy.cli.presets import PRESETS
from blevy.levy.levy import LevySpec
from blevy.model.config import ModelConfig
from blevy.sim.simulator import simulate
from blevy.stats.replicates import SEED_MAX, make_stream, run_replicates
from blevy.utils.errors import InvalidParameter

TWOPOINT = PRESETS["twopoint"].spec.model
DIFFUSING = ModelConfig(
    TWOPOINT.lifetime_rate, TWOPOINT.offspring, TWOPOINT.displacement, LevySpec(diffusion_var=0.5)
)
GRID = (0.5, 1.0, 2.0)


def test_single_replicate_matches_simulate() -> None:
    """Replicate 0 is the run drawn from stream (seed, 0)."""
    (result,) = run_replicates(DIFFUSING, GRID, 1, master_seed=42)
    expected = simulate(DIFFUSING, GRID, rng=make_stream(42, 0), seed=(42, 0))
    assert result == expected


def test_streams_are_distinct() -> None:
    """Different indices and different seeds give different streams."""
    a = make_stream(1, 0).random(4).tolist()
    assert a == make_stream(1, 0).random(4).tolist()
    assert a != make_stream(1, 1).random(4).tolist()
    assert a != make_stream(2, 0).random(4).tolist()


def test_reproducible() -> None:
    """Same seed, same list of results."""
    a = run_replicates(DIFFUSING, GRID, 30, master_seed=7)
    b = run_replicates(DIFFUSING, GRID, 30, master_seed=7)
    assert a == b
    assert [r.seed for r in a] == [(7, i) for i in range(30)]


def test_worker_count_does_not_matter() -> None:
    """One worker and two workers produce identical ordered results."""
    serial = run_replicates(DIFFUSING, GRID, 40, master_seed=3, workers=1)
    parallel = run_replicates(DIFFUSING, GRID, 40, master_seed=3, workers=2)
    assert serial == parallel


def test_surviving_replicates() -> None:
    """With ``surviving`` every run is alive at the final checkpoint."""
    results = run_replicates(TWOPOINT, (1.0, 4.0), 50, master_seed=5, surviving=True)
    assert all(r.survived for r in results)
    assert all(r.attempts >= 1 for r in results)


def test_capped_runs_are_kept() -> None:
    """Capped runs stay in the list, flagged."""
    results = run_replicates(PRESETS["generation"].spec.model, (1.0, 12.0), 5, cap=10)
    assert len(results) == 5
    assert all(r.capped for r in results)


@pytest.mark.parametrize("replicates", [0, -1, 2.0, True])
def test_invalid_replicates(replicates: object) -> None:
    """The replicate count must be a positive integer."""
    with pytest.raises(InvalidParameter) as exc:
        run_replicates(TWOPOINT, GRID, replicates)  # type: ignore[arg-type]
    assert exc.value.field == "experiment.replicates"


@pytest.mark.parametrize("seed", [-1, SEED_MAX + 1, 1.5])
def test_invalid_seed(seed: object) -> None:
    """Seeds are unsigned 64-bit integers."""
    with pytest.raises(InvalidParameter) as exc:
        run_replicates(TWOPOINT, GRID, 1, master_seed=seed)  # type: ignore[arg-type]
    assert exc.value.field == "experiment.seed"


def test_invalid_workers() -> None:
    """At least one worker."""
    with pytest.raises(InvalidParameter) as exc:
        run_replicates(TWOPOINT, GRID, 1, workers=0)
    assert exc.value.field == "workers"
