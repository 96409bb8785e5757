"""Package-wide exception types."""

from __future__ import annotations


class DomainError(ValueError):
    """Input violates a documented precondition or invariant."""


class ConfigError(DomainError):
    """Experiment configuration is malformed or violates instance constraints."""


class GuardError(RuntimeError):
    """Exploitation requested before the confidence width is defined (eta < 3).

    Callers must treat the round as exploration instead.
    """


class NoRentError(RuntimeError):
    """The instance admits no strategic construction with positive rent."""


class InconsistentHistory(RuntimeError):
    """No normalized reward vector rationalizes the observed choice history.

    Corresponds to a negative cycle in the difference-constraint graph; cannot
    occur for agents that play a fixed reward vector, but replayed external
    data may trigger it.
    """

    def __init__(self, message: str, cycle: tuple[int, ...] = ()):
        super().__init__(message)
        self.cycle = cycle


class SimulationError(RuntimeError):
    """The game loop hit a state it cannot continue from (e.g. failed init)."""
