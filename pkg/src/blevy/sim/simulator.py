"""Event-driven simulation of a branching Lévy process.

Live particles sit in a min-heap keyed by death time. Advancing to a
checkpoint pops every death up to it: the parent's position is brought to
its death time by one motion increment, then its brood is pushed with
offsets and fresh exponential lifetimes. At a checkpoint every live particle
is advanced from its last update time by one increment (vectorised), so no
path is ever stored. Dead particles are dropped unless the genealogy is
retained.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import replace
from typing import override

import numpy as np

from blevy.base.base_simulator import BaseSimulator
from blevy.base.particle import Particle
from blevy.levy.levy import sample_increment, sample_increments
from blevy.model.config import DerivedConstants, ModelConfig
from blevy.sim.result import CheckpointStats, GenealogyRecord, RunResult
from blevy.utils.errors import InvalidParameter, MaxAttemptsExhausted
from blevy.utils.logger import setup_logger
from blevy.utils.shared_defaults import DEFAULT_CAP, DEFAULT_MAX_ATTEMPTS

logger = setup_logger("Simulator", "blevy_simulator.log")


class BranchingLevySimulator(BaseSimulator):
    """Exact population simulator keeping only live particles.

    Key ideas:
    - heap entries are ``(death_time, sequence, particle)``; the sequence
      number breaks ties so particles are never compared
    - positions are stored net of the drift; the drift is added once at
      each checkpoint as ``drift * t``
    - the cap is checked before a brood is pushed
    """

    def __init__(
        self,
        config: ModelConfig,
        cap: int,
        rng: np.random.Generator,
        seed: tuple[int, int] | None = None,
        constants: DerivedConstants | None = None,
    ) -> None:
        super().__init__(config, cap, rng, seed=seed, constants=constants)
        self._drift = float(config.motion.drift)
        self._noise = config.motion.without_drift()
        self._moving = not self._noise.is_zero
        self._lifetime_scale = 1.0 / float(config.lifetime_rate)
        self._heap: list[tuple[float, int, Particle]] = []
        self._seq = 0

    # ------------------------
    # Hooks & lifecycle
    # ------------------------
    @override
    def on_start(self) -> None:
        """Start Run Hook: place the root particle at the origin."""
        super().on_start()
        self._heap = []
        self._seq = 0
        death = float(self.rng.exponential(self._lifetime_scale))
        self._push(Particle((), 0.0, 0.0, death, 0.0, 0.0))

    # ------------------------
    # Core processing helpers
    # ------------------------
    def _push(self, particle: Particle) -> None:
        heapq.heappush(self._heap, (particle.death_time, self._seq, particle))
        self._seq += 1
        self.on_birth(particle)

    @property
    def live(self) -> list[Particle]:
        """Live particles in heap order."""
        return [entry[2] for entry in self._heap]

    @override
    def _advance_to(self, t: float) -> bool:
        heap = self._heap
        rng = self.rng
        offspring = self.config.offspring
        displacement = self.config.displacement

        while heap and heap[0][0] <= t:
            death, _, parent = heapq.heappop(heap)
            if self._moving:
                parent.position += sample_increment(
                    self._noise, death - parent.last_time, rng
                )
            parent.last_time = death

            n = offspring.sample(rng)
            self.on_death(parent, n)
            if len(heap) + n > self.cap:
                return False
            if n == 0:
                continue

            offsets = displacement.sample_children(rng, n)
            lifetimes = rng.exponential(self._lifetime_scale, n).tolist()
            for i in range(n):
                pos = parent.position + offsets[i]
                self._push(
                    Particle(parent.id + (i + 1,), death, pos, death + lifetimes[i], pos, death)
                )
        return True

    @override
    def _evaluate_checkpoint(self, t: float) -> CheckpointStats:
        live = self.live
        if self._moving and live:
            dts = np.fromiter((t - p.last_time for p in live), dtype=float, count=len(live))
            incs = sample_increments(self._noise, dts, self.rng).tolist()
            for p, inc in zip(live, incs):
                p.position += inc
        for p in live:
            p.last_time = t

        drift_t = self._drift * t
        positions = [p.position + drift_t for p in live]
        self.on_checkpoint(t, live)

        stats = CheckpointStats.from_positions(
            t, positions, self.constants.r, self.constants.lambda_hat
        )
        logger.debug(f"checkpoint t={t}: pop={stats.pop}, sum_pos={stats.sum_pos}")
        return stats


class GenealogySimulator(BranchingLevySimulator):
    """Simulator that also keeps every particle ever born.

    The record lets callers check the family-tree rules: child indices run
    from 1 to the parent's brood size, the live set is an antichain, and
    ancestors' lifetimes tile ``[0, t]``.
    """

    @override
    def on_start(self) -> None:
        """Start Run Hook: reset the record before the root is born."""
        self.record = GenealogyRecord()
        super().on_start()

    @override
    def on_birth(self, child: Particle) -> None:
        """Particle Birth Hook."""
        self.record.particles[child.id] = child
        super().on_birth(child)

    @override
    def on_death(self, parent: Particle, brood_size: int) -> None:
        """Particle Death Hook."""
        self.record.brood_sizes[parent.id] = brood_size
        super().on_death(parent, brood_size)

    @override
    def on_checkpoint(self, t: float, live: Sequence[Particle]) -> None:
        """Checkpoint Hook: snapshot ids and true positions."""
        drift_t = self._drift * t
        self.record.live_at[t] = [(p.id, p.position + drift_t) for p in live]
        super().on_checkpoint(t, live)

    @override
    def run(self, checkpoints: Sequence[float]) -> RunResult:
        """Simulate one run and attach the genealogy record."""
        result = super().run(checkpoints)
        return replace(result, genealogy=self.record)


def simulate(
    config: ModelConfig,
    checkpoints: Sequence[float],
    cap: int = DEFAULT_CAP,
    rng: np.random.Generator | None = None,
    *,
    seed: tuple[int, int] | None = None,
    constants: DerivedConstants | None = None,
    retain_genealogy: bool = False,
) -> RunResult:
    """Simulate one run of the process.

    Parameters
    ----------
    config : ModelConfig
        A valid model.
    checkpoints : Sequence[float]
        Strictly increasing evaluation times, the first ``>= 0``.
    cap : int, optional
        Live-population cap; exceeding it stops the run with ``capped=True``.
    rng : np.random.Generator, optional
        Random stream. A fresh unseeded one is used if omitted.
    seed : tuple[int, int], optional
        ``(master_seed, replicate)`` recorded on the result.
    constants : DerivedConstants, optional
        Precomputed constants of ``config``.
    retain_genealogy : bool, optional
        Keep every particle and attach the record to the result.

    Returns
    -------
    RunResult
        Observables at every checkpoint.

    """
    if rng is None:
        rng = np.random.default_rng()
    cls = GenealogySimulator if retain_genealogy else BranchingLevySimulator
    return cls(config, cap, rng, seed=seed, constants=constants).run(checkpoints)


def simulate_surviving(
    config: ModelConfig,
    checkpoints: Sequence[float],
    cap: int = DEFAULT_CAP,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    rng: np.random.Generator | None = None,
    *,
    seed: tuple[int, int] | None = None,
    constants: DerivedConstants | None = None,
) -> RunResult:
    """Rejection-sample a run that is alive at the final checkpoint.

    Parameters
    ----------
    config : ModelConfig
        A valid model.
    checkpoints : Sequence[float]
        Evaluation grid.
    cap : int, optional
        Live-population cap.
    max_attempts : int, optional
        Runs to try before giving up.
    rng : np.random.Generator, optional
        Random stream shared by all attempts.
    seed : tuple[int, int], optional
        Seed record for the result.
    constants : DerivedConstants, optional
        Precomputed constants of ``config``.

    Returns
    -------
    RunResult
        The first surviving run; ``attempts`` counts the runs drawn.

    Raises
    ------
    MaxAttemptsExhausted
        If no attempt survived.

    """
    if isinstance(max_attempts, bool) or not isinstance(max_attempts, int) or max_attempts < 1:
        raise InvalidParameter(
            "experiment.max_attempts", f"must be an integer >= 1, got {max_attempts!r}"
        )
    if rng is None:
        rng = np.random.default_rng()

    for attempt in range(1, max_attempts + 1):
        result = simulate(config, checkpoints, cap, rng, seed=seed, constants=constants)
        if result.survived:
            logger.debug(f"surviving run after {attempt} attempt(s)")
            return replace(result, attempts=attempt)
    raise MaxAttemptsExhausted(max_attempts)
