"""Composition, classification, and parameter sweeps for periodic games of chance.

A game of spatial period N plays a win probability per capital residue; a
composite walk arises by mixing games stochastically or cycling them
deterministically.  The monodromy-matrix spectrum of the (rescaled) walk
classifies it as winning, fair, or losing, and a sweep engine traces the
fairness structure of built-in parameter families, including compositions
of individually losing games that win.
"""

from .classify import DEFAULT_TOL, SpectralReport, classify_kernel, classify_schedule, fairness_c
from .errors import (
    ConvergenceFailure,
    DegenerateDistribution,
    DegenerateGame,
    InconclusiveSimulation,
    InvalidKernel,
    InvalidProbability,
    ParrondoError,
    PeriodMismatch,
    ReducibleResidueChain,
    SweepEvaluationError,
    UnknownFigure,
    WeightCountMismatch,
)
from .games import (
    Classification,
    PeriodicGame,
    Probability,
    fair_completion,
    fairness_constant,
    fairness_constant_exact,
    log_fairness,
    losing_family_p2,
    validate_game,
)
from .kernels import (
    CompositionSchedule,
    DeterministicSchedule,
    EnvironmentKernel,
    StepDistribution,
    StochasticSchedule,
    collapse_iid,
    compose_cycle,
    lift,
    mean_step,
    mix,
    rescale,
)
from .simulate import DriftEstimate, agreement_check, long_run_velocity, simulate
from .spectral import (
    Spectrum,
    build_A,
    char_poly,
    double_root_at_one,
    eigen_magnitudes,
    kernel_char_poly,
    monodromy,
    polynomial_roots,
)
from .sweep import (
    Crossing,
    CrossingScan,
    Family,
    SweepRow,
    TraceResult,
    axis_points,
    count_sign_changes,
    figure_family,
    sweep_grid,
    trace_fairness,
)

__version__ = "0.1.0"
