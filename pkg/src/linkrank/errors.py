"""Exception hierarchy shared across linkrank."""


class LinkRankError(Exception):
    """Base class for all linkrank failures."""


class EdgeListParseError(LinkRankError, ValueError):
    """Malformed edge-list text."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphValidationError(LinkRankError, ValueError):
    """Structurally illegal graph: self-loops, duplicate edges, dangling pages."""


class DimensionError(LinkRankError, ValueError):
    """Vector length does not match the matrix dimension."""


class NonConvergenceError(LinkRankError):
    """Power iteration ended without converging; carries the trace."""

    def __init__(self, trace):
        self.trace = trace
        super().__init__(f"power iteration did not converge: {trace.verdict}")


class EstimatorError(LinkRankError):
    """A spectral estimator or root finder failed to settle."""

    def __init__(self, message, best=None, residuals=None):
        self.best = best
        self.residuals = residuals
        super().__init__(message)


class ExactModeCapError(LinkRankError):
    """Matrix too large for exact characteristic-polynomial work."""
