"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class ConvergenceError(ArithmeticError):
    """A series failed to converge within its term budget."""

    def __init__(self, message, last_term):
        super().__init__(f"{message} (last term magnitude {last_term:.3e})")
        self.last_term = last_term


class DegenerateDataError(ValueError):
    """Data that cannot be normalized (all zeros, zero signal power, ...)."""
