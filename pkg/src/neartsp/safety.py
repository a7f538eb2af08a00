"""Process-wide counters for shortcut weight checks and tour validations.

Every shortcut step in the solvers runs an explicit "new weight <= old
weight" comparison, and every solver re-validates that its output visits
each vertex exactly once.  The counters below record how many such checks
ran and how many failed, so a test suite can assert both that the checks
are active and that none of them ever tripped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation


@dataclass
class SafetyStats:
    weight_checks: int = 0
    weight_violations: int = 0
    hamiltonicity_checks: int = 0
    hamiltonicity_violations: int = 0

    def reset(self) -> None:
        self.weight_checks = 0
        self.weight_violations = 0
        self.hamiltonicity_checks = 0
        self.hamiltonicity_violations = 0


STATS = SafetyStats()


def check_weight_nonincrease(new: int, old: int, context: str) -> None:
    """Record one weight check; raise if the shortcut increased the weight."""
    STATS.weight_checks += 1
    if new > old:
        STATS.weight_violations += 1
        raise InvariantViolation(
            f"{context}: shortcut increased weight from {old} to {new}"
        )


def check_hamiltonian(order: list[int], n: int, context: str) -> None:
    """Record one tour validation; raise unless order visits 0..n-1 once each."""
    STATS.hamiltonicity_checks += 1
    if sorted(order) != list(range(n)):
        STATS.hamiltonicity_violations += 1
        raise InvariantViolation(f"{context}: output is not a Hamiltonian tour")


def check_visits_each_once(order: list[int], expected: list[int], context: str) -> None:
    """Record one tour validation over an explicit vertex set."""
    STATS.hamiltonicity_checks += 1
    if sorted(order) != sorted(expected):
        STATS.hamiltonicity_violations += 1
        raise InvariantViolation(f"{context}: output does not visit each vertex once")
