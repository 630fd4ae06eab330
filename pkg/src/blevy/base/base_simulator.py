"""BaseSimulator: abstract foundation for population simulators.

This class defines:
- the public API (`run`)
- lifecycle hooks (on_start, on_death, on_birth, on_checkpoint, on_finish)
- shared state (model, derived constants, cap, random stream)
- abstract methods for the event loop and the checkpoint sweep
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from blevy.base.particle import Particle
from blevy.model.config import DerivedConstants, ModelConfig, derived_constants
from blevy.sim.result import CheckpointStats, RunResult
from blevy.utils.errors import InvalidCheckpoints, InvalidParameter
from blevy.utils.logger import setup_logger

logger = setup_logger("BaseSimulator", "blevy_base_simulator.log")


def check_checkpoints(checkpoints: Sequence[float]) -> tuple[float, ...]:
    """Return the grid as floats, or raise ``InvalidCheckpoints``.

    The grid must be non-empty, start at a time ``>= 0`` and be strictly
    increasing.
    """
    grid = tuple(float(t) for t in checkpoints)
    if not grid:
        raise InvalidCheckpoints("checkpoint grid is empty")
    if grid[0] < 0:
        raise InvalidCheckpoints(f"first checkpoint must be >= 0, got {grid[0]!r}")
    for a, b in zip(grid, grid[1:]):
        if not b > a:
            raise InvalidCheckpoints(f"checkpoints must strictly increase: {a!r}, {b!r}")
    return grid


class BaseSimulator(ABC):
    """Abstract base class for one-run simulators.

    Variants must implement:
    - _advance_to(t) -> bool
    - _evaluate_checkpoint(t) -> CheckpointStats
    """

    def __init__(
        self,
        config: ModelConfig,
        cap: int,
        rng: np.random.Generator,
        seed: tuple[int, int] | None = None,
        constants: DerivedConstants | None = None,
    ) -> None:
        if isinstance(cap, bool) or not isinstance(cap, int) or cap < 1:
            raise InvalidParameter("experiment.cap", f"must be an integer >= 1, got {cap!r}")
        self.config = config
        self.constants: DerivedConstants = (
            constants if constants is not None else derived_constants(config)
        )
        self.cap = cap
        self.rng = rng
        self.seed = seed

    # --------------------------------------------------------
    # Public API
    # --------------------------------------------------------
    def run(self, checkpoints: Sequence[float]) -> RunResult:
        """Simulate one run and evaluate it at every checkpoint."""
        grid = check_checkpoints(checkpoints)
        logger.debug(f"run() called with {len(grid)} checkpoints, cap={self.cap}")

        self.on_start()

        stats: list[CheckpointStats | None] = []
        capped = False
        for t in grid:
            if not self._advance_to(t):
                capped = True
                break
            stats.append(self._evaluate_checkpoint(t))
        stats.extend([None] * (len(grid) - len(stats)))

        result = RunResult.from_stats(grid, stats, capped, seed=self.seed)
        self.on_finish(result)

        logger.debug(f"run() finished, survived={result.survived}, capped={capped}")
        return result

    # --------------------------------------------------------
    # Hooks (can be overridden by subclasses)
    # --------------------------------------------------------
    def on_start(self) -> None:
        """Start Run Hook."""
        logger.debug("Run started")

    def on_death(self, parent: Particle, brood_size: int) -> None:
        """Particle Death Hook."""

    def on_birth(self, child: Particle) -> None:
        """Particle Birth Hook."""

    def on_checkpoint(self, t: float, live: Sequence[Particle]) -> None:
        """Checkpoint Hook, called after positions are brought up to ``t``."""

    def on_finish(self, result: RunResult) -> None:
        """Finish Run Hook."""
        if result.capped:
            logger.info(f"Run capped at {self.cap} live particles (seed={result.seed_label})")

    # --------------------------------------------------------
    # Required abstract methods
    # --------------------------------------------------------
    @abstractmethod
    def _advance_to(self, t: float) -> bool:
        """Process every death up to and including time ``t``.

        Returns False if the population cap was hit.
        """
        raise NotImplementedError

    @abstractmethod
    def _evaluate_checkpoint(self, t: float) -> CheckpointStats:
        """Bring every live particle to time ``t`` and summarise."""
        raise NotImplementedError
