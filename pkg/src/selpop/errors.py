"""Exception types raised across the package.

Every error carries a short ``kind`` string matching the diagnostic names used
in reports and on the command line (``EmptyPopulation``, ``MissingNullRule``...).
"""

from __future__ import annotations


class SelpopError(Exception):
    kind = "Error"

    def __init__(self, message: str = "", kind: str | None = None):
        if kind is not None:
            self.kind = kind
        super().__init__(f"{self.kind}: {message}" if message else self.kind)


class SpecError(SelpopError):
    """A protocol description violates a structural invariant."""

    kind = "SpecError"


class PopulationError(SelpopError):
    kind = "PopulationError"


class DuplicateKey(PopulationError):
    kind = "DuplicateKey"


class UnknownState(PopulationError):
    kind = "UnknownState"


class EmptyPopulation(PopulationError):
    kind = "EmptyPopulation"


class MissingNullRule(SelpopError):
    kind = "MissingNullRule"


class GuardedProtocolNeedsPredicate(SelpopError):
    kind = "GuardedProtocolNeedsPredicate"


class InvalidState(SelpopError):
    kind = "InvalidState"


class InsufficientData(SelpopError):
    kind = "InsufficientData"


class ModelAssumptionViolated(SelpopError):
    kind = "ModelAssumptionViolated"


class NoCandidate(SelpopError):
    kind = "NoCandidate"


class InvariantBreach(SelpopError):
    kind = "InvariantBreach"


class ConfigError(SelpopError):
    kind = "ConfigError"
