"""Martingale increment checks and convergence traces of the empirical mean."""

from __future__ import annotations

import csv
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from blevy.model.config import DerivedConstants
from blevy.oracle.closed_form import MomentVariant, martingale_variance
from blevy.sim.result import RunResult, header_comment
from blevy.stats.summary import McCell, Verdict, z_verdict
from blevy.utils.errors import InsufficientReplicates, InvalidCheckpoints
from blevy.utils.logger import setup_logger
from blevy.utils.numeric import format_float, sample_moments
from blevy.utils.shared_defaults import (
    MIN_CONVERGENCE_CHECKPOINTS,
    MIN_MARTINGALE_REPLICATES,
    Z_FIRST_MOMENT,
    Z_SECOND_MOMENT,
)

logger = setup_logger("Diagnostics", "blevy_stats.log")

TRACE_CSV_COLUMNS = ("run", "t", "pop", "mean_dev", "martingale", "w_stat", "seed")
GAP_CSV_COLUMNS = ("gap", "t_start", "t_end", "median_abs_gap")


# ============================================================
# Martingale increments
# ============================================================
@dataclass(frozen=True)
class IncrementCheck:
    """Diagnostics of ``M_t - M_s`` for one adjacent checkpoint pair.

    Attributes
    ----------
    s, t : float
        The pair of checkpoints.
    n : int
        Runs contributing.
    increment_mean, increment_se, increment_z : float
        Sample mean of the increment, its standard error and z-score
        against 0.
    covariance, covariance_se, covariance_z : float
        Sample covariance of ``(M_s, M_t - M_s)``, its standard error and
        z-score against 0.
    increment_var, increment_var_se : float
        Sample variance of the increment and its standard error.
    variance_gap : float
        ``Var(M_t) - Var(M_s)`` from the closed form.
    variance_gap_z : float
        z-score of ``increment_var`` against ``variance_gap``.
    flagged : bool
        True when any z-score exceeds its threshold.

    """

    s: float
    t: float
    n: int
    increment_mean: float
    increment_se: float
    increment_z: float
    covariance: float
    covariance_se: float
    covariance_z: float
    increment_var: float
    increment_var_se: float
    variance_gap: float
    variance_gap_z: float
    flagged: bool


@dataclass(frozen=True)
class MartingaleReport:
    """Increment checks over every adjacent checkpoint pair."""

    pairs: tuple[IncrementCheck, ...]
    threshold: float
    variance_threshold: float
    variant: MomentVariant

    @property
    def all_pass(self) -> bool:
        """True when no pair is flagged."""
        return not any(p.flagged for p in self.pairs)

    def to_cells(self) -> list[McCell]:
        """Express the checks as summary cells keyed by the later checkpoint."""
        cells = []
        for p in self.pairs:
            _, v_mean = z_verdict(p.increment_mean, p.increment_se, 0.0, self.threshold)
            _, v_cov = z_verdict(p.covariance, p.covariance_se, 0.0, self.threshold)
            _, v_var = z_verdict(
                p.increment_var, p.increment_var_se, p.variance_gap, self.variance_threshold
            )
            cells.extend(
                [
                    McCell(p.t, "martingale_increment", p.n, p.increment_mean,
                           p.increment_se, 0.0, p.increment_z, v_mean, self.threshold),
                    McCell(p.t, "martingale_increment_cov", p.n, p.covariance,
                           p.covariance_se, 0.0, p.covariance_z, v_cov, self.threshold),
                    McCell(p.t, "martingale_increment_var", p.n, p.increment_var,
                           p.increment_var_se, p.variance_gap, p.variance_gap_z, v_var,
                           self.variance_threshold, self.variant.value),
                ]
            )
        return cells


def martingale_diagnostics(
    results: Sequence[RunResult],
    dc: DerivedConstants,
    variant: MomentVariant | None = None,
    z_threshold: float = Z_FIRST_MOMENT,
    min_replicates: int = MIN_MARTINGALE_REPLICATES,
) -> MartingaleReport:
    """Check that the additive martingale has centred, orthogonal increments.

    Parameters
    ----------
    results : Sequence[RunResult]
        Replicates sharing one grid of at least two checkpoints.
    dc : DerivedConstants
        Constants of the simulated model.
    variant : MomentVariant, optional
        Constants used for the variance-gap oracle.
    z_threshold : float, optional
        Threshold for the mean and covariance checks. The variance-gap check
        uses the second-moment threshold.
    min_replicates : int, optional
        Minimum number of uncapped runs.

    Returns
    -------
    MartingaleReport
        One ``IncrementCheck`` per adjacent pair.

    Raises
    ------
    InsufficientReplicates
        If too few uncapped runs are available.
    InvalidCheckpoints
        If the grid has fewer than two points.

    """
    if variant is None:
        variant = MomentVariant.for_constants(dc)
    runs = [r for r in results if not r.capped]
    if len(runs) < max(min_replicates, 2):
        raise InsufficientReplicates(max(min_replicates, 2), len(runs), "uncapped runs")
    grid = runs[0].checkpoints
    if len(grid) < 2:
        raise InvalidCheckpoints("martingale diagnostics need at least 2 checkpoints")

    pairs = []
    for k in range(len(grid) - 1):
        s, t = grid[k], grid[k + 1]
        m_s = [r.stats[k].martingale for r in runs]
        m_t = [r.stats[k + 1].martingale for r in runs]
        inc = [b - a for a, b in zip(m_s, m_t)]

        sm_inc = sample_moments(inc)
        mean_s = math.fsum(m_s) / len(m_s)
        products = [(a - mean_s) * (d - sm_inc.mean) for a, d in zip(m_s, inc)]
        sm_prod = sample_moments(products)
        n = len(products)
        covariance = sm_prod.mean * n / (n - 1)

        gap = martingale_variance(dc, t, variant) - martingale_variance(dc, s, variant)
        z_mean, v_mean = z_verdict(sm_inc.mean, sm_inc.std_error, 0.0, z_threshold)
        z_cov, v_cov = z_verdict(covariance, sm_prod.std_error, 0.0, z_threshold)
        z_var, v_var = z_verdict(
            sm_inc.variance, sm_inc.variance_std_error, gap, Z_SECOND_MOMENT
        )
        flagged = Verdict.FAIL in (v_mean, v_cov, v_var)
        if flagged:
            logger.warning(
                f"Martingale check flagged on ({s}, {t}): "
                f"z_mean={z_mean:.3g}, z_cov={z_cov:.3g}, z_var={z_var:.3g}"
            )
        pairs.append(
            IncrementCheck(
                s=s,
                t=t,
                n=n,
                increment_mean=sm_inc.mean,
                increment_se=sm_inc.std_error,
                increment_z=z_mean,
                covariance=covariance,
                covariance_se=sm_prod.std_error,
                covariance_z=z_cov,
                increment_var=sm_inc.variance,
                increment_var_se=sm_inc.variance_std_error,
                variance_gap=gap,
                variance_gap_z=z_var,
                flagged=flagged,
            )
        )
    return MartingaleReport(tuple(pairs), z_threshold, Z_SECOND_MOMENT, variant)


# ============================================================
# Convergence of the empirical mean
# ============================================================
@dataclass(frozen=True)
class TracePoint:
    """Per-run values at one checkpoint."""

    t: float
    pop: int
    mean_dev: float
    martingale: float
    w_stat: float


@dataclass(frozen=True)
class RunTrace:
    """The trace of one surviving run."""

    seed: tuple[int, int] | None
    points: tuple[TracePoint, ...]

    @property
    def gaps(self) -> list[float]:
        """``|Y_{t_{k+1}} - Y_{t_k}|`` for each adjacent pair."""
        ys = [p.mean_dev for p in self.points]
        return [abs(b - a) for a, b in zip(ys, ys[1:])]


@dataclass(frozen=True)
class ConvergenceReport:
    """Traces plus cross-run gap statistics.

    ``median_gaps``, ``strictly_decreasing`` and ``settled_fraction`` are
    ``None`` when only one run is available.
    """

    checkpoints: tuple[float, ...]
    traces: tuple[RunTrace, ...]
    median_gaps: tuple[float, ...] | None
    strictly_decreasing: bool | None
    settled_fraction: float | None


def convergence_trace(
    results: Sequence[RunResult],
    dc: DerivedConstants,
    min_checkpoints: int = MIN_CONVERGENCE_CHECKPOINTS,
) -> ConvergenceReport:
    """Follow ``Y_t = mean position - r t`` along surviving runs.

    Parameters
    ----------
    results : Sequence[RunResult]
        Runs alive at the final checkpoint, e.g. from ``simulate_surviving``.
        Capped or extinct runs are skipped.
    dc : DerivedConstants
        Constants of the simulated model.
    min_checkpoints : int, optional
        Minimum grid size.

    Returns
    -------
    ConvergenceReport
        Per-run traces, the median absolute gap per checkpoint interval, and
        the fraction of runs whose last gap is below half their first gap.

    Raises
    ------
    InsufficientReplicates
        If no usable run is given.
    InvalidCheckpoints
        If the grid has fewer than ``min_checkpoints`` points.

    """
    runs = [r for r in results if r.survived and not r.capped]
    if not runs:
        raise InsufficientReplicates(1, 0, "surviving uncapped runs")
    grid = runs[0].checkpoints
    if len(grid) < min_checkpoints:
        raise InvalidCheckpoints(
            f"convergence trace needs at least {min_checkpoints} checkpoints, got {len(grid)}"
        )
    if len(runs) < len(results):
        logger.warning(f"Skipping {len(results) - len(runs)} capped or extinct run(s)")

    traces = []
    for run in runs:
        points = []
        for s in run.stats:
            assert s is not None and s.mean_dev is not None
            points.append(TracePoint(s.t, s.pop, s.mean_dev, s.martingale, s.w_stat))
        traces.append(RunTrace(run.seed, tuple(points)))

    if len(traces) < 2:
        return ConvergenceReport(grid, tuple(traces), None, None, None)

    gaps = np.array([tr.gaps for tr in traces])
    medians = tuple(float(m) for m in np.median(gaps, axis=0))
    strictly_decreasing = all(b < a for a, b in zip(medians, medians[1:]))
    settled = float(np.mean(gaps[:, -1] < 0.5 * gaps[:, 0]))
    logger.info(
        f"Convergence over {len(traces)} runs (r={dc.r}): medians={medians}, "
        f"settled fraction={settled}"
    )
    return ConvergenceReport(grid, tuple(traces), medians, strictly_decreasing, settled)


def write_trace_csv(report: ConvergenceReport, path: Path) -> Path:
    """Write one row per (run, checkpoint)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(header_comment() + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_CSV_COLUMNS)
        for i, tr in enumerate(report.traces):
            label = "" if tr.seed is None else f"{tr.seed[0]}:{tr.seed[1]}"
            for p in tr.points:
                writer.writerow(
                    [
                        str(i),
                        format_float(p.t),
                        format_float(p.pop),
                        format_float(p.mean_dev),
                        format_float(p.martingale),
                        format_float(p.w_stat),
                        label,
                    ]
                )
    return path


def write_gap_csv(report: ConvergenceReport, path: Path) -> Path:
    """Write the median absolute gap of every checkpoint interval."""
    path.parent.mkdir(parents=True, exist_ok=True)
    grid = report.checkpoints
    with path.open("w", newline="") as fh:
        fh.write(header_comment() + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GAP_CSV_COLUMNS)
        for k in range(len(grid) - 1):
            median = None if report.median_gaps is None else report.median_gaps[k]
            writer.writerow(
                [str(k), format_float(grid[k]), format_float(grid[k + 1]), format_float(median)]
            )
    return path
