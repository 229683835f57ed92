"""Exception hierarchy shared by every module."""


class SumContainersError(Exception):
    """Base class for all package errors."""


class DomainError(SumContainersError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(SumContainersError, ValueError):
    """Malformed input such as a bad group spec or mixed-group operands."""


class ConstructionError(SumContainersError, ValueError):
    """A structure could not be built because its invariants are violated."""


class ResourceError(SumContainersError):
    """A configured work or size cap would be exceeded."""


class VerificationError(SumContainersError):
    """A checked inequality or postcondition failed.

    These guard statements that are theorems for valid input, so raising one
    means either the input broke a precondition we could not detect or the
    implementation is wrong.
    """
