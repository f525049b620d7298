"""Exception hierarchy for the exprays package.

Every error raised deliberately by this package derives from
:class:`ExpraysError`, so callers can catch one type at the boundary.
Subclasses are grouped by the stage that raises them: address handling,
combinatorics, numerical ray tracing, and root finding.
"""

from __future__ import annotations


class ExpraysError(Exception):
    """Base class for all errors raised by exprays."""


class PreconditionError(ExpraysError):
    """An argument violates a documented precondition of the operation."""


# ---------------------------------------------------------------------------
# symbolic addresses


class InvalidAddress(ExpraysError):
    """An address string or entry sequence is malformed."""


class AlphabetMismatch(ExpraysError):
    """Two addresses from incompatible symbol alphabets were combined."""


class InvalidBase(ExpraysError):
    """A partition base address does not meet the preconditions."""


class DegreeTooSmall(ExpraysError):
    """The target finite alphabet cannot hold the requested entries."""


# ---------------------------------------------------------------------------
# itineraries and portraits


class BoundaryHit(ExpraysError):
    """A point fell on a partition boundary, so its sector is undefined."""


class BoundaryOrbit(ExpraysError):
    """Some forward image of an address hits the partition boundary."""


class PeriodMismatch(ExpraysError):
    """Periodic-address arguments have incompatible or degenerate periods."""


class PortraitInvariant(ExpraysError):
    """An orbit portrait failed one of its structural invariants."""


class NotSimple(ExpraysError):
    """A closed curve assembled from ray traces intersects itself."""


class SearchExhausted(ExpraysError):
    """A combinatorial search hit its resource bound without an answer."""


class ResourceBound(ExpraysError):
    """An enumeration exceeded its explicit size or time budget."""


# ---------------------------------------------------------------------------
# ray tracing


class BranchCut(ExpraysError):
    """A logarithm pull-back stepped onto the branch cut."""


class Divergence(ExpraysError):
    """A traced orbit or iteration left the trustworthy region."""


class PostsingularCollision(ExpraysError):
    """A traced ray passed too close to the singular orbit."""


# ---------------------------------------------------------------------------
# Newton solvers


class NewtonDivergence(ExpraysError):
    """Newton iteration failed to converge from the given seed."""


class NotPeriodic(ExpraysError):
    """The located point does not actually have the requested period."""


class AttractingContradiction(ExpraysError):
    """The located cycle is attracting, so no ray can land on it."""


class WrongBasin(ExpraysError):
    """Newton converged, but not to the point the ray lands on."""


class SeedDisagreement(ExpraysError):
    """Independent seeds converged to visibly different answers."""
