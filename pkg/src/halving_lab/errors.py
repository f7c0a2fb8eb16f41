"""Exception types shared across the package."""


class HalvingLabError(Exception):
    """Base class for all errors raised by halving_lab."""


class InvalidArgumentError(HalvingLabError, ValueError):
    """An argument is outside the domain of the operation."""


class PreconditionViolation(HalvingLabError, ValueError):
    """Inputs are well-formed but violate a documented precondition."""


class ResourceLimitError(HalvingLabError, RuntimeError):
    """The requested computation exceeds a configured budget."""
