"""blevy: branching Lévy processes.

This package simulates a population in which every particle moves as a
jump-diffusion, dies at an exponential rate and is replaced by displaced
offspring, and checks the simulation against exact moment identities:
- model: offspring and displacement laws, derived constants
- sim: event-driven simulator (optionally keeping the genealogy)
- oracle: closed-form moments and an integrated moment-ODE oracle
- stats: seeded replicates, Monte Carlo verdicts, martingale and
  convergence diagnostics
"""

from .levy.levy import LevySpec
from .model.config import (
    DerivedConstants,
    ModelConfig,
    derived_constants,
    extinction_probability,
    validate,
)
from .model.displacement import (
    Coupling,
    DeterministicMarginal,
    DisplacementLaw,
    GaussianMarginal,
    PoissonMarginal,
    ZeroMarginal,
)
from .model.offspring import DeterministicOffspring, GeometricOffspring, TwoPointOffspring
from .oracle.brute_force import brute_force_moments, brute_force_second_moment
from .oracle.closed_form import MomentVariant
from .sim.simulator import simulate, simulate_surviving
from .stats.replicates import run_replicates
from .stats.summary import summarize
from .version import __version__

__all__ = [
    "Coupling",
    "DerivedConstants",
    "DeterministicMarginal",
    "DeterministicOffspring",
    "DisplacementLaw",
    "GaussianMarginal",
    "GeometricOffspring",
    "LevySpec",
    "ModelConfig",
    "MomentVariant",
    "PoissonMarginal",
    "TwoPointOffspring",
    "ZeroMarginal",
    "brute_force_moments",
    "brute_force_second_moment",
    "derived_constants",
    "extinction_probability",
    "run_replicates",
    "simulate",
    "simulate_surviving",
    "summarize",
    "validate",
    "__version__",
]
