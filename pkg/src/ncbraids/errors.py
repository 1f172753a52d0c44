"""Exception types shared across the package."""


class InvalidPartitionError(ValueError):
    """Input does not describe a valid partition of {1..n}."""


class CapExceededError(ValueError):
    """A resource cap (enumeration size, matrix size, ...) was exceeded."""


class ConvergenceError(RuntimeError):
    """An iterative computation hit its iteration cap before converging.

    Carries the last estimate and iterate so callers can inspect how far
    the iteration got.
    """

    def __init__(self, message: str, estimate: float, iterate=None, iterations: int = 0):
        super().__init__(message)
        self.estimate = estimate
        self.iterate = iterate
        self.iterations = iterations
