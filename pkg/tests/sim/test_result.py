"""Pytest file for testing `src/blevy/sim/result.py`."""

from __future__ import annotations

import math
from pathlib import Path

import pytest

from blevy.sim.result import RUN_CSV_COLUMNS, CheckpointStats, RunResult, write_run_csv


def test_from_positions() -> None:
    """Observables follow their definitions."""
    s = CheckpointStats.from_positions(2.0, [1.0, 2.0, 6.0], r=1.5, lambda_hat=0.5)
    assert s.pop == 3
    assert s.sum_pos == 9.0
    assert s.centered_sum == 9.0 - 1.5 * 2.0 * 3
    assert s.martingale == math.exp(-1.0) * s.centered_sum
    assert s.w_stat == math.exp(-1.0) * 3
    assert s.mean_dev == pytest.approx(3.0 - 3.0)


def test_empty_population() -> None:
    """An extinct population has no mean deviation."""
    s = CheckpointStats.from_positions(1.0, [], r=2.0, lambda_hat=1.0)
    assert (s.pop, s.sum_pos, s.centered_sum, s.w_stat) == (0, 0.0, 0.0, 0.0)
    assert s.mean_dev is None


def test_compensated_sum() -> None:
    """The position sum is correctly rounded."""
    s = CheckpointStats.from_positions(0.0, [1e16, 1.0, -1e16, 1.0], r=0.0, lambda_hat=1.0)
    assert s.sum_pos == 2.0


def test_survival_flags() -> None:
    """Survival looks at the final checkpoint; capped runs count as surviving."""
    alive = CheckpointStats.from_positions(1.0, [0.0], 0.0, 1.0)
    dead = CheckpointStats.from_positions(2.0, [], 0.0, 1.0)
    assert not RunResult.from_stats([1.0, 2.0], [alive, dead], capped=False).survived
    assert RunResult.from_stats([1.0, 2.0], [alive, None], capped=True).survived


def test_values_and_lookup() -> None:
    """Per-observable columns and lookup by time."""
    a = CheckpointStats.from_positions(1.0, [1.0, 1.0], 1.0, 1.0)
    result = RunResult.from_stats([1.0, 3.0], [a, None], capped=True, seed=(5, 2))
    assert result.values("pop") == [2, None]
    assert result.at(1.0) is a
    assert result.seed_label == "5:2"
    with pytest.raises(KeyError):
        result.values("nonsense")


def test_write_run_csv(tmp_path: Path) -> None:
    """run.csv has a comment line, the header and one row per checkpoint."""
    a = CheckpointStats.from_positions(1.0, [0.5, 1.5], 1.0, 1.0)
    result = RunResult.from_stats([1.0, 2.0], [a, None], capped=True, seed=(0, 1))
    path = write_run_csv(result, tmp_path / "sub" / "run.csv")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# blevy ")
    assert lines[1] == ",".join(RUN_CSV_COLUMNS)
    assert lines[2] == f"1.0,2,2.0,0.0,0.0,{2 * math.exp(-1.0)!r},0.0,true,true,0:1"
    assert lines[3] == "2.0,,,,,,,true,true,0:1"
