"""Built-in named experiments."""

from __future__ import annotations

from dataclasses import dataclass

from blevy.cli.config_file import ExperimentSpec
from blevy.levy.levy import LevySpec
from blevy.model.config import ModelConfig
from blevy.model.displacement import (
    DeterministicMarginal,
    DisplacementLaw,
    PoissonMarginal,
    ZeroMarginal,
)
from blevy.model.offspring import DeterministicOffspring, TwoPointOffspring
from blevy.utils.errors import ConfigParseError

BINARY = DeterministicOffspring(2)
NO_DISPLACEMENT = DisplacementLaw(ZeroMarginal())


@dataclass(frozen=True)
class Preset:
    """A named experiment with a one-line description."""

    name: str
    description: str
    spec: ExperimentSpec


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset(
            "generation",
            "binary splitting, every child one step right of its parent: position = generation",
            ExperimentSpec(
                ModelConfig(1.0, BINARY, DisplacementLaw(DeterministicMarginal(1.0))),
                checkpoints=(1.0, 2.0, 4.0),
                replicates=50_000,
            ),
        ),
        Preset(
            "cancer-poisson",
            "binary splitting, Poisson(1) new mutations per child",
            ExperimentSpec(
                ModelConfig(1.0, BINARY, DisplacementLaw(PoissonMarginal(1.0))),
                checkpoints=(2.0, 4.0, 6.0, 8.0, 10.0),
                replicates=200,
            ),
        ),
        Preset(
            "phylo-walk",
            "no displacement at birth, Brownian motion plus Poisson-marked jumps",
            ExperimentSpec(
                ModelConfig(
                    1.0,
                    BINARY,
                    NO_DISPLACEMENT,
                    LevySpec(diffusion_var=0.5, jump_rate=1.0, jump_law=PoissonMarginal(0.5)),
                ),
                checkpoints=(1.0, 2.0, 3.0),
                replicates=20_000,
            ),
        ),
        Preset(
            "brownian-only",
            "binary splitting, standard Brownian motion, no displacement",
            ExperimentSpec(
                ModelConfig(1.0, BINARY, NO_DISPLACEMENT, LevySpec(diffusion_var=1.0)),
                checkpoints=(1.0,),
                replicates=100_000,
            ),
        ),
        Preset(
            "null",
            "binary splitting with no displacement and no motion",
            ExperimentSpec(
                ModelConfig(1.0, BINARY, NO_DISPLACEMENT),
                checkpoints=(1.0, 2.0, 4.0),
                replicates=1_000,
            ),
        ),
        Preset(
            "twopoint",
            "no children with probability 0.2, otherwise two; unit displacement",
            ExperimentSpec(
                ModelConfig(
                    1.0, TwoPointOffspring(0.2, 2), DisplacementLaw(DeterministicMarginal(1.0))
                ),
                checkpoints=(2.0, 4.0, 8.0),
                replicates=100_000,
            ),
        ),
    )
}


def presets() -> list[str]:
    """Names of every built-in experiment."""
    return list(PRESETS)


def get_preset(name: str) -> ExperimentSpec:
    """Return the experiment of preset ``name``."""
    try:
        return PRESETS[name].spec
    except KeyError:
        raise ConfigParseError(
            "--preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None
