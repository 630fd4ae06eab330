"""Particle record for the event-driven simulator."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(slots=True)
class Particle:
    """One particle, labelled by its Ulam-Harris path.

    Attributes
    ----------
    id : tuple[int, ...]
        Child indices from the root; the root is ``()``. Child ``i`` of
        ``v`` (1-based) is ``v + (i,)``.
    birth_time : float
        Time the particle was born (its parent's death time).
    birth_position : float
        Drift-free position at birth.
    death_time : float
        Time the particle dies; ``death_time - birth_time`` is its lifetime.
    position : float
        Drift-free position at ``last_time``. Every particle alive at time
        ``t`` has drifted for exactly ``t``, so the true position is
        ``position + drift * t``.
    last_time : float
        Last time ``position`` was brought up to date.

    """

    id: tuple[int, ...]
    birth_time: float
    birth_position: float
    death_time: float
    position: float
    last_time: float

    @property
    def generation(self) -> int:
        """Depth in the family tree."""
        return len(self.id)

    def is_ancestor_of(self, other: Particle) -> bool:
        """Strict ancestry: ``self.id`` is a proper prefix of ``other.id``."""
        n = len(self.id)
        return n < len(other.id) and other.id[:n] == self.id

    def alive_at(self, t: float) -> bool:
        """``birth_time <= t < death_time``."""
        return self.birth_time <= t < self.death_time
