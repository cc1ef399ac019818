"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument: wrong shape, out-of-domain value, malformed text."""


class DegenerateInputError(InputError):
    """Data that is well-formed but carries no information (e.g. a constant column)."""


class CapacityError(RuntimeError):
    """Request refused because it would need exponential time or too much memory."""
