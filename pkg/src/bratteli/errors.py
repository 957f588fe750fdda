"""Shared exception types."""

from __future__ import annotations


class UnresolvedComparison(Exception):
    """Two refinable reals could not be separated within the precision cap.

    Equality of refinable reals is only semi-decidable; callers decide
    whether an unresolved comparison is an error or a value.
    """

    def __init__(self, message: str, *, precision: int | None = None, context=None):
        super().__init__(message)
        self.precision = precision
        self.context = context


class DepthExhausted(Exception):
    """A computation needed more diagram levels than the truncation (or its
    level provider) can supply."""


class SizeGuardExceeded(Exception):
    """A combinatorial enumeration exceeded its configured bound."""


class NoSimplicityWitness(Exception):
    """No telescoping with entrywise-positive incidence blocks was found
    within the requested horizon."""
