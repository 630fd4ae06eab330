"""Shared numeric defaults across all subpackages."""

from __future__ import annotations

# ============================================================
# Simulation
# ============================================================
DEFAULT_CAP = 1_000_000  # live particles before a run is abandoned
DEFAULT_MAX_ATTEMPTS = 10_000  # rejection budget for surviving runs

# ============================================================
# Extinction fixed point
# ============================================================
EXTINCTION_TOL = 1e-12
EXTINCTION_MAX_STEPS = 1_000_000
EXTINCTION_BRACKET_STEPS = 60

# ============================================================
# Oracles
# ============================================================
FD_STEP = 1e-5
FD_STEP_MAX = 1e-4
MIN_ODE_STEPS = 1_000

# ============================================================
# Monte Carlo verdicts
# ============================================================
Z_FIRST_MOMENT = 4.0
Z_SECOND_MOMENT = 5.0
MIN_MARTINGALE_REPLICATES = 1_000
MIN_CONVERGENCE_CHECKPOINTS = 4
