"""Independent replicate runs with per-replicate random streams.

Replicate ``i`` always draws from the stream spawned from
``SeedSequence(master_seed)`` with spawn key ``(i,)``, whichever worker runs
it, so a list of results depends only on ``master_seed`` and the inputs.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import partial
from multiprocessing import Pool

import numpy as np
from tqdm import tqdm

from blevy.base.base_simulator import check_checkpoints
from blevy.model.config import DerivedConstants, ModelConfig, derived_constants
from blevy.sim.result import RunResult
from blevy.sim.simulator import simulate, simulate_surviving
from blevy.utils.errors import InvalidParameter
from blevy.utils.logger import setup_logger
from blevy.utils.shared_defaults import DEFAULT_CAP, DEFAULT_MAX_ATTEMPTS

logger = setup_logger("Replicates", "blevy_stats.log")

SEED_MAX = 2**64 - 1


def make_stream(master_seed: int, index: int) -> np.random.Generator:
    """Return the random stream of replicate ``index``.

    Parameters
    ----------
    master_seed : int
        Unsigned 64-bit experiment seed.
    index : int
        Replicate index, ``>= 0``.

    Returns
    -------
    np.random.Generator
        A PCG64 generator seeded from ``(master_seed, index)``.

    """
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(seq))


def check_seed(master_seed: int) -> int:
    """Return ``master_seed`` if it is an unsigned 64-bit integer."""
    if (
        isinstance(master_seed, bool)
        or not isinstance(master_seed, int)
        or not 0 <= master_seed <= SEED_MAX
    ):
        raise InvalidParameter(
            "experiment.seed", f"must be an integer in [0, 2**64 - 1], got {master_seed!r}"
        )
    return master_seed


def _run_one(
    index: int,
    *,
    config: ModelConfig,
    checkpoints: tuple[float, ...],
    cap: int,
    master_seed: int,
    constants: DerivedConstants,
    surviving: bool,
    max_attempts: int,
) -> RunResult:
    rng = make_stream(master_seed, index)
    seed = (master_seed, index)
    if surviving:
        return simulate_surviving(
            config, checkpoints, cap, max_attempts, rng, seed=seed, constants=constants
        )
    return simulate(config, checkpoints, cap, rng, seed=seed, constants=constants)


def run_replicates(
    config: ModelConfig,
    checkpoints: Sequence[float],
    replicates: int,
    cap: int = DEFAULT_CAP,
    master_seed: int = 0,
    *,
    workers: int = 1,
    surviving: bool = False,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    progress: bool = False,
) -> list[RunResult]:
    """Run ``replicates`` independent simulations.

    Parameters
    ----------
    config : ModelConfig
        A valid model.
    checkpoints : Sequence[float]
        Evaluation grid shared by every run.
    replicates : int
        Number of runs, ``>= 1``.
    cap : int, optional
        Live-population cap per run.
    master_seed : int, optional
        Experiment seed; replicate ``i`` uses ``make_stream(master_seed, i)``.
    workers : int, optional
        Worker processes. The results do not depend on it.
    surviving : bool, optional
        Rejection-sample runs alive at the final checkpoint.
    max_attempts : int, optional
        Rejection budget per replicate when ``surviving``.
    progress : bool, optional
        Show a ``tqdm`` progress bar.

    Returns
    -------
    list[RunResult]
        One result per replicate, ordered by replicate index. Capped runs are
        kept and flagged.

    """
    if isinstance(replicates, bool) or not isinstance(replicates, int) or replicates < 1:
        raise InvalidParameter(
            "experiment.replicates", f"must be an integer >= 1, got {replicates!r}"
        )
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise InvalidParameter("workers", f"must be an integer >= 1, got {workers!r}")
    check_seed(master_seed)
    grid = check_checkpoints(checkpoints)
    constants = derived_constants(config)

    job = partial(
        _run_one,
        config=config,
        checkpoints=grid,
        cap=cap,
        master_seed=master_seed,
        constants=constants,
        surviving=surviving,
        max_attempts=max_attempts,
    )
    logger.info(
        f"Running {replicates} replicates on {workers} worker(s), seed={master_seed}"
    )

    indices = range(replicates)
    if workers == 1:
        results = [
            job(i)
            for i in tqdm(indices, total=replicates, disable=not progress, desc="replicates")
        ]
    else:
        chunksize = max(1, replicates // (workers * 8))
        with Pool(processes=workers) as pool:
            results = list(
                tqdm(
                    pool.imap(job, indices, chunksize=chunksize),
                    total=replicates,
                    disable=not progress,
                    desc="replicates",
                )
            )

    n_capped = sum(r.capped for r in results)
    if n_capped:
        logger.warning(f"{n_capped} of {replicates} runs hit the cap of {cap}")
    return results
