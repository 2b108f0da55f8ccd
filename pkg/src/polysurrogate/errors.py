"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument: dimension mismatch, out-of-range parameter, bad file."""


class SolverError(RuntimeError):
    """A numerical solver failed to converge or certify its answer.

    ``best`` holds the best iterate found so far and ``gap`` the last
    optimality gap, so callers can decide whether to accept it anyway.
    """

    def __init__(self, message, best=None, gap=None):
        super().__init__(message)
        self.best = best
        self.gap = gap


class ConsistencyError(ValueError):
    """Pairwise comparison reports contradict each other."""


class TrainingError(RuntimeError):
    """Stochastic training diverged; ``trace`` holds the partial trace."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
