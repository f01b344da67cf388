"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input is not a valid distribution, table, state or model."""


class DomainError(ValueError):
    """Argument lies outside the domain where the quantity is defined."""


class UnphysicalError(DomainError):
    """Parameters do not describe a positive semidefinite state."""


class ConsistencyError(RuntimeError):
    """Two independent evaluation routes disagree; indicates a bug."""
