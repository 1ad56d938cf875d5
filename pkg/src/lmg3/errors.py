"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`LMGError`,
which is itself a ``ValueError`` so callers that only care about bad input can
catch the builtin.
"""


class LMGError(ValueError):
    """Base class for all package errors."""


class DomainError(LMGError):
    """Input outside the domain where a quantity is defined."""


class InvalidStateError(LMGError):
    """Matrix is not a valid density operator (or not PSD) within tolerance."""


class UndefinedQuantityError(LMGError):
    """The requested quantity does not exist at this point of parameter space."""


class CrossingError(UndefinedQuantityError):
    """The ground state is degenerate (level crossing); pick a block explicitly."""


class DegenerateMarginalError(UndefinedQuantityError):
    """Mixed-state phase requested where the marginal has degenerate nonzero eigenvalues."""


class MonopoleError(UndefinedQuantityError):
    """Evaluation at (or numerically on top of) an effective monopole, where the gap closes."""


class NearDegeneracyError(UndefinedQuantityError):
    """Perturbative expression requested with an energy gap below tolerance."""


class DiscretizationError(LMGError):
    """A discrete oracle lost resolution (vanishing overlap between neighbours)."""


class OracleInconsistencyError(LMGError):
    """An oracle callback returned a value outside its mathematical range."""


class UsageError(LMGError):
    """Malformed sweep specification or command-line argument."""


class OutputError(LMGError, OSError):
    """A table could not be written to its destination."""
