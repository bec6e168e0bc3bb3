"""Exception and warning types shared across the package.

The three error classes mirror the CLI exit-code contract: bad input (1),
a spectral condition required by the theory failing to hold (2), and a
numerical guard tripping, e.g. a matrix that must be inverted being
singular to working precision (3).
"""

from __future__ import annotations


class NehariError(Exception):
    """Base class for all errors raised by this package."""


class InputError(NehariError, ValueError):
    """Invalid user input: malformed data, violated preconditions."""


class ConditionError(NehariError):
    """A spectral condition (simple top singular value, nonvanishing
    maximizing vectors, ...) required for the requested solve does not hold."""


class NumericalGuardError(NehariError):
    """A runtime numerical guard tripped: singular or ill-conditioned
    matrix where the theory requires invertibility, resolvent evaluated
    too close to a pole, unattainable truncation accuracy."""


class AmbiguousMultiplicityWarning(UserWarning):
    """Eigenvalues sit in the buffer zone of the multiplicity gap test."""


class ZeroRestrictionWarning(UserWarning):
    """The Hankel operator restricted to the chosen subspace is (near) zero."""


class QuadratureWarning(UserWarning):
    """Doubling the quadrature grid changed the result beyond tolerance."""


class NonUniqueMaximizerWarning(UserWarning):
    """Top singular value has multiplicity > 1; a quotient built from one
    maximizing vector is not canonical."""
