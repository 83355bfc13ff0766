"""Exception hierarchy shared by all quatlat modules."""


class QuatlatError(Exception):
    """Base class for all library errors."""


class NotIntegral(QuatlatError):
    """Form coefficients are not integers."""


class NotPositiveDefinite(QuatlatError):
    """Gram matrix fails the positivity test."""


class PrecisionTooLow(QuatlatError):
    """Requested p-adic precision is below the safe minimum."""


class PreconditionViolated(QuatlatError):
    """An operation was called outside its stated domain."""


class ResourceLimit(QuatlatError):
    """An enumeration or recursion exceeded its configured budget."""


class SingularMatrix(QuatlatError):
    """A matrix expected to be invertible has determinant zero."""


class InconsistentSystem(QuatlatError):
    """A linear congruence system admits no solution."""


class NoEscalatorFound(QuatlatError):
    """No anisotropic prime explains the failure pattern."""
