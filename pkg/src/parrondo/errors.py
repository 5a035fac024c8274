"""Exception hierarchy shared by all modules.

Input/validation problems and numerical failures are kept on separate
branches so the CLI can map them to distinct exit codes.
"""


class ParrondoError(Exception):
    """Base class for every error raised by this package."""


class InvalidProbability(ParrondoError):
    """A probability entry lies outside [0, 1]."""

    def __init__(self, index, value):
        self.index = index
        self.value = value
        where = "value" if index is None else f"entry {index}"
        super().__init__(f"{where} {value!r} is not a probability in [0, 1]")


class DegenerateGame(ParrondoError):
    """An operation needed strictly interior win probabilities."""


class PeriodMismatch(ParrondoError):
    """Games combined in one schedule must share a spatial period."""


class WeightCountMismatch(ParrondoError):
    """A stochastic mixture needs one weight per residue."""


class DegenerateDistribution(ParrondoError):
    """A step distribution is missing one of its extremal steps."""


class InvalidKernel(ParrondoError):
    """An environment kernel failed validation."""


class ConvergenceFailure(ParrondoError):
    """The polynomial root finder stalled; carries the final residual."""

    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"root refinement stalled, residual {residual:.3e}")


class ReducibleResidueChain(ParrondoError):
    """The residue chain is not irreducible, so no stationary law exists."""


class InconclusiveSimulation(ParrondoError):
    """A Monte Carlo confidence interval straddles zero."""


class UnknownFigure(ParrondoError):
    """Requested built-in family id does not exist."""


class SweepEvaluationError(ParrondoError):
    """A grid evaluation failed; message names the offending grid point."""


#: Errors that signal a numerical failure rather than bad input (CLI exit 2).
NUMERICAL_ERRORS = (ConvergenceFailure, InconclusiveSimulation)
