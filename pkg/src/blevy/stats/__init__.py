"""Monte Carlo replicate harness and estimator verdicts."""
