"""Per-checkpoint observables of one simulated run, and the run CSV dump."""

from __future__ import annotations

import csv
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from blevy.base.particle import Particle
from blevy.utils.numeric import format_float
from blevy.version import __version__

RUN_CSV_COLUMNS = (
    "t",
    "pop",
    "sum_pos",
    "centered_sum",
    "martingale",
    "w_stat",
    "mean_dev",
    "survived",
    "capped",
    "seed",
)

OBSERVABLES = ("pop", "sum_pos", "centered_sum", "martingale", "w_stat", "mean_dev")


@dataclass(frozen=True)
class CheckpointStats:
    """Population statistics at one checkpoint time.

    Attributes
    ----------
    t : float
        Checkpoint time.
    pop : int
        Number of live particles.
    sum_pos : float
        Sum of live positions (correctly rounded).
    centered_sum : float
        ``sum_pos - r * t * pop``.
    martingale : float
        ``exp(-lambda_hat t) * centered_sum``.
    w_stat : float
        ``exp(-lambda_hat t) * pop``.
    mean_dev : float | None
        ``sum_pos / pop - r t``; ``None`` when the population is extinct.

    """

    t: float
    pop: int
    sum_pos: float
    centered_sum: float
    martingale: float
    w_stat: float
    mean_dev: float | None

    @classmethod
    def from_positions(
        cls, t: float, positions: Sequence[float], r: float, lambda_hat: float
    ) -> CheckpointStats:
        """Summarise the live positions at time ``t``."""
        pop = len(positions)
        sum_pos = math.fsum(positions)
        centered_sum = sum_pos - r * t * pop
        decay = math.exp(-lambda_hat * t)
        return cls(
            t=t,
            pop=pop,
            sum_pos=sum_pos,
            centered_sum=centered_sum,
            martingale=decay * centered_sum,
            w_stat=decay * pop,
            mean_dev=(sum_pos / pop - r * t) if pop else None,
        )


@dataclass
class GenealogyRecord:
    """Every particle of one run, kept only when asked for.

    Attributes
    ----------
    particles : dict[tuple[int, ...], Particle]
        Every particle ever born, by id.
    brood_sizes : dict[tuple[int, ...], int]
        Offspring count of every particle that died.
    live_at : dict[float, list[tuple[tuple[int, ...], float]]]
        Per checkpoint, the live ids with their true positions.

    """

    particles: dict[tuple[int, ...], Particle] = field(default_factory=dict)
    brood_sizes: dict[tuple[int, ...], int] = field(default_factory=dict)
    live_at: dict[float, list[tuple[tuple[int, ...], float]]] = field(
        default_factory=dict
    )


@dataclass(frozen=True)
class RunResult:
    """Observables of one run at every checkpoint.

    ``stats[k]`` is ``None`` for checkpoints after a capped run stopped.
    """

    checkpoints: tuple[float, ...]
    stats: tuple[CheckpointStats | None, ...]
    survived: bool
    capped: bool
    seed: tuple[int, int] | None = None
    attempts: int = 1
    genealogy: GenealogyRecord | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_stats(
        cls,
        checkpoints: Sequence[float],
        stats: Sequence[CheckpointStats | None],
        capped: bool,
        seed: tuple[int, int] | None = None,
    ) -> RunResult:
        """Assemble a result; a capped run counts as surviving."""
        final = stats[-1] if stats else None
        survived = capped or (final is not None and final.pop > 0)
        return cls(
            checkpoints=tuple(checkpoints),
            stats=tuple(stats),
            survived=survived,
            capped=capped,
            seed=seed,
        )

    def at(self, t: float) -> CheckpointStats | None:
        """Return the statistics recorded at checkpoint ``t``."""
        return self.stats[self.checkpoints.index(t)]

    def values(self, observable: str) -> list[float | int | None]:
        """Return one observable across all checkpoints."""
        if observable not in OBSERVABLES:
            raise KeyError(observable)
        return [None if s is None else getattr(s, observable) for s in self.stats]

    @property
    def seed_label(self) -> str:
        """``master:index`` text of the stream this run used."""
        return "" if self.seed is None else f"{self.seed[0]}:{self.seed[1]}"

    def csv_rows(self) -> list[list[str]]:
        """One formatted row per checkpoint, columns as ``RUN_CSV_COLUMNS``."""
        rows = []
        for t, s in zip(self.checkpoints, self.stats):
            if s is None:
                cells = [""] * 6
            else:
                cells = [
                    format_float(s.pop),
                    format_float(s.sum_pos),
                    format_float(s.centered_sum),
                    format_float(s.martingale),
                    format_float(s.w_stat),
                    format_float(s.mean_dev),
                ]
            rows.append(
                [
                    format_float(float(t)),
                    *cells,
                    format_float(self.survived),
                    format_float(self.capped),
                    self.seed_label,
                ]
            )
        return rows


def header_comment() -> str:
    """Timestamped comment line heading every CSV written by blevy."""
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return f"# blevy {__version__} generated {stamp}"


def write_run_csv(result: RunResult, path: Path) -> Path:
    """Write ``result`` as ``run.csv``-style rows.

    Parameters
    ----------
    result : RunResult
        The run to dump.
    path : Path
        Destination file.

    Returns
    -------
    Path
        The written path.

    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(header_comment() + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_CSV_COLUMNS)
        writer.writerows(result.csv_rows())
    return path
