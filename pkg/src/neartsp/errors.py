"""Exception taxonomy shared by all neartsp modules."""

from __future__ import annotations


class NearTSPError(Exception):
    """Base class for every error raised by this package."""


class InstanceFormatError(NearTSPError):
    """An instance file or weight matrix does not satisfy the input contract."""


class BudgetExceeded(NearTSPError):
    """A search budget (e.g. for the minimum violating set) was exhausted."""


class CapExceeded(NearTSPError):
    """An input is larger than the hard cap of an exponential-time routine."""


class Disconnected(NearTSPError):
    """No spanning tree exists under the given edge restrictions."""


class InvalidT(NearTSPError):
    """Requested forest tree count is outside 1..|vertices|."""


class OddSet(NearTSPError):
    """A perfect matching was requested on an odd-sized vertex set."""


class NotEulerian(NearTSPError):
    """The multigraph has no closed Eulerian walk."""


class InvalidEndpoints(NearTSPError):
    """Path endpoints are missing from the vertex set or otherwise unusable."""


class NotMetric(NearTSPError):
    """The (sub)instance violates the triangle inequality where it must not."""


class IncompleteCover(NearTSPError):
    """A closed walk does not visit every required vertex."""


class StructureViolated(NearTSPError):
    """A guessed structure failed a consistency check; the guess is skipped."""


class ParityViolated(NearTSPError):
    """A tree holds an odd number of odd-degree vertices; the guess is skipped."""


class GenerationFailed(NearTSPError):
    """A planted-instance generator ran out of retries for the target value."""


class InvariantViolation(NearTSPError):
    """An internal invariant that must hold unconditionally was broken."""
