"""Exception types shared across the package."""


class DomainError(ValueError):
    """Parameters outside the regime an operation is defined for."""


class ContractError(ValueError):
    """An argument violates a documented precondition."""


class ResourceError(RuntimeError):
    """A size or time budget would be exceeded."""
