"""Event-driven simulation of the branching population."""
