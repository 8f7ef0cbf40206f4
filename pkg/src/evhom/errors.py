from __future__ import annotations


class EvhomError(Exception):
    """Base class for all errors raised by this package."""


class ClassMismatchError(EvhomError, ValueError):
    """A graph is not a member of the class an operation requires."""


class LimitExceededError(EvhomError):
    """An enumeration or search would exceed its configured size limit."""


class NotStrictError(EvhomError, ValueError):
    """A map that must be a strict homomorphism is not one."""


class InvalidSpecError(EvhomError, ValueError):
    """A rearrangement spec fails one of its validity conditions."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid spec")


class ErdError(EvhomError):
    """The EV-system does not belong to its reference class, so AID is undefined."""
