"""Closed-form and numerically integrated moment oracles."""
