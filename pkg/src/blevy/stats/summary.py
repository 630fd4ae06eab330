"""Monte Carlo estimates against the closed-form oracles.

Every cell of a summary compares a sample estimate with an oracle value
through ``z = (estimate - oracle) / std_error``. Capped runs never enter an
estimate. Extinct runs enter every cell except ``mean_dev``, which is
undefined on an empty population.
"""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, replace
from enum import Enum
from pathlib import Path

from blevy.model.config import DerivedConstants
from blevy.oracle import closed_form as cf
from blevy.oracle.closed_form import MomentVariant
from blevy.sim.result import CheckpointStats, RunResult, header_comment
from blevy.utils.errors import InsufficientReplicates
from blevy.utils.logger import setup_logger
from blevy.utils.numeric import format_float, sample_moments
from blevy.utils.shared_defaults import Z_FIRST_MOMENT, Z_SECOND_MOMENT
from blevy.version import __version__

logger = setup_logger("Summary", "blevy_stats.log")

SUMMARY_CSV_COLUMNS = ("t", "observable", "n_eff", "estimate", "se", "oracle", "z", "verdict", "variant")


class Verdict(Enum):
    """Outcome of one cell."""

    PASS = "pass"
    FAIL = "fail"
    INFORMATIONAL = "informational"


def z_verdict(
    estimate: float, std_error: float, oracle: float, threshold: float
) -> tuple[float, Verdict]:
    """Return ``(z_score, verdict)``.

    A zero standard error passes only when the estimate equals the oracle.
    """
    diff = estimate - oracle
    if std_error == 0:
        z = 0.0 if diff == 0 else math.copysign(math.inf, diff)
    else:
        z = diff / std_error
    return z, Verdict.PASS if abs(z) <= threshold else Verdict.FAIL


@dataclass(frozen=True)
class McCell:
    """One (checkpoint, observable) comparison."""

    t: float
    observable: str
    n_effective: int
    estimate: float
    std_error: float
    oracle_value: float | None
    z_score: float | None
    verdict: Verdict
    threshold: float | None
    variant: str = ""

    @classmethod
    def judged(
        cls,
        t: float,
        observable: str,
        n_effective: int,
        estimate: float,
        std_error: float,
        oracle_value: float,
        threshold: float,
        variant: str = "",
    ) -> McCell:
        """Build a cell with its z-score and verdict filled in."""
        z, verdict = z_verdict(estimate, std_error, oracle_value, threshold)
        return cls(
            t, observable, n_effective, estimate, std_error, oracle_value, z, verdict,
            threshold, variant,
        )

    @classmethod
    def informational(
        cls,
        t: float,
        observable: str,
        n_effective: int,
        estimate: float,
        std_error: float,
        oracle_value: float | None = None,
        variant: str = "",
    ) -> McCell:
        """Build a cell that reports without judging."""
        z = None
        if oracle_value is not None and std_error > 0:
            z = (estimate - oracle_value) / std_error
        return cls(
            t, observable, n_effective, estimate, std_error, oracle_value, z,
            Verdict.INFORMATIONAL, None, variant,
        )

    def csv_row(self) -> list[str]:
        """Formatted row, columns as ``SUMMARY_CSV_COLUMNS``."""
        return [
            format_float(self.t),
            self.observable,
            format_float(self.n_effective),
            format_float(self.estimate),
            format_float(self.std_error),
            format_float(self.oracle_value),
            format_float(self.z_score),
            self.verdict.value,
            self.variant,
        ]


@dataclass(frozen=True)
class McSummary:
    """All cells of one experiment plus run counts."""

    cells: tuple[McCell, ...]
    n_total: int
    n_capped: int
    n_extinct: int
    master_seed: int | None

    @property
    def failures(self) -> list[McCell]:
        """Cells with a failing verdict."""
        return [c for c in self.cells if c.verdict is Verdict.FAIL]

    @property
    def all_pass(self) -> bool:
        """True when no cell failed."""
        return not self.failures

    def cell(self, t: float, observable: str, variant: str | None = None) -> McCell:
        """Look up the first cell matching ``t`` and ``observable`` (and ``variant``)."""
        for c in self.cells:
            if c.t == t and c.observable == observable and (
                variant is None or c.variant == variant
            ):
                return c
        raise KeyError((t, observable, variant))

    def with_cells(self, extra: Sequence[McCell]) -> McSummary:
        """Return a copy with ``extra`` appended."""
        return replace(self, cells=self.cells + tuple(extra))

    def to_dict(self) -> dict:
        """JSON-ready form."""
        cells = []
        for c in self.cells:
            d = {k: _json_number(v) for k, v in asdict(c).items()}
            d["verdict"] = c.verdict.value
            cells.append(d)
        return {
            "generator": f"blevy {__version__}",
            "master_seed": self.master_seed,
            "n_total": self.n_total,
            "n_capped": self.n_capped,
            "n_extinct": self.n_extinct,
            "all_pass": self.all_pass,
            "cells": cells,
        }


def _json_number(value: object) -> object:
    """Map non-finite floats to ``None`` (JSON ``null``)."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _column(
    runs: Sequence[RunResult], k: int, value: Callable[[CheckpointStats], float]
) -> list[float]:
    out = []
    for run in runs:
        s = run.stats[k]
        if s is not None:
            out.append(value(s))
    return out


def summarize(
    results: Sequence[RunResult],
    dc: DerivedConstants,
    variant: MomentVariant | None = None,
    z_threshold: float | None = None,
    oracle_scale: float = 1.0,
) -> McSummary:
    """Compare replicate estimates with the closed forms at every checkpoint.

    Parameters
    ----------
    results : Sequence[RunResult]
        Replicates sharing one checkpoint grid.
    dc : DerivedConstants
        Constants of the simulated model.
    variant : MomentVariant, optional
        Second-moment constants to judge against; by default
        ``MomentVariant.for_constants(dc)``. When the other variant predicts
        something different it is reported as an informational row.
    z_threshold : float, optional
        Overrides both the first-moment (4) and second-moment (5) thresholds.
    oracle_scale : float, optional
        Multiplies every oracle value. Only useful to check that the harness
        can fail.

    Returns
    -------
    McSummary
        One cell per (checkpoint, observable) plus run counts.

    Raises
    ------
    InsufficientReplicates
        If fewer than two uncapped runs are available.

    """
    if variant is None:
        variant = MomentVariant.for_constants(dc)
    first = Z_FIRST_MOMENT if z_threshold is None else z_threshold
    second = Z_SECOND_MOMENT if z_threshold is None else z_threshold

    runs = [r for r in results if not r.capped]
    if len(runs) < 2:
        raise InsufficientReplicates(2, len(runs), "uncapped runs")
    n_capped = len(results) - len(runs)
    n_extinct = sum(1 for r in runs if not r.survived)
    if n_capped:
        logger.warning(f"Excluding {n_capped} capped run(s) from every estimate")

    checkpoints = runs[0].checkpoints
    cells: list[McCell] = []
    for k, t in enumerate(checkpoints):

        def judge(
            observable: str,
            values: list[float],
            oracle: float,
            threshold: float,
            tag: str = "",
        ) -> None:
            sm = sample_moments(values)
            cells.append(
                McCell.judged(
                    t, observable, sm.n, sm.mean, sm.std_error, oracle * oracle_scale,
                    threshold, tag,
                )
            )

        pop = _column(runs, k, lambda s: float(s.pop))
        centered = _column(runs, k, lambda s: s.centered_sum)
        mart = _column(runs, k, lambda s: s.martingale)
        w = _column(runs, k, lambda s: s.w_stat)

        judge("pop", pop, cf.expected_population(dc, t), first)
        judge("pop_sq", [p * p for p in pop], cf.population_second_moment(dc, t), second)
        judge("centered_sum", centered, cf.centered_sum_mean(t), first)

        sq = [c * c for c in centered]
        stated = cf.centered_sum_second_moment(dc, t, variant)
        judge("centered_sum_sq", sq, stated, second, variant.value)
        alternative = cf.centered_sum_second_moment(dc, t, variant.other)
        if alternative != stated:
            sm = sample_moments(sq)
            cells.append(
                McCell.informational(
                    t, "centered_sum_sq", sm.n, sm.mean, sm.std_error,
                    alternative * oracle_scale, variant.other.value,
                )
            )

        judge("martingale", mart, 0.0, first)
        sm_m = sample_moments(mart)
        cells.append(
            McCell.judged(
                t,
                "martingale_var",
                sm_m.n,
                sm_m.variance,
                sm_m.variance_std_error,
                cf.martingale_variance(dc, t, variant) * oracle_scale,
                second,
                variant.value,
            )
        )

        judge("w_stat", w, cf.w_stat_mean(t), first)
        judge("w_stat_sq", [x * x for x in w], cf.w_stat_second_moment(dc, t), second)
        judge(
            "pop_x_centered_sum",
            [p * c for p, c in zip(pop, centered)],
            cf.population_centered_cross_moment(dc, t),
            second,
        )

        devs = _column(runs, k, lambda s: s.mean_dev if s.mean_dev is not None else math.nan)
        devs = [d for d in devs if not math.isnan(d)]
        if devs:
            sm_d = sample_moments(devs)
            cells.append(McCell.informational(t, "mean_dev", sm_d.n, sm_d.mean, sm_d.std_error))

    seed = runs[0].seed[0] if runs[0].seed is not None else None
    summary = McSummary(tuple(cells), len(results), n_capped, n_extinct, seed)
    logger.info(
        f"Summarised {len(results)} runs: {len(summary.failures)} failing cell(s)"
    )
    return summary


def write_summary_json(summary: McSummary, path: Path) -> Path:
    """Write ``summary`` as JSON."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        json.dump(summary.to_dict(), fh, indent=2, allow_nan=False)
        fh.write("\n")
    return path


def write_summary_csv(summary: McSummary, path: Path) -> Path:
    """Write ``summary`` as CSV behind a timestamped comment line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(header_comment() + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_CSV_COLUMNS)
        writer.writerows(c.csv_row() for c in summary.cells)
    return path
