class NotFoundError(LookupError):
    """A search (threshold r, cutoff k0) hit its ceiling without an answer."""


class ConvergenceError(ArithmeticError):
    """A root solve did not converge within its iteration cap."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class MemoryCapError(MemoryError):
    """A simulation would need more memory than the configured cap."""
