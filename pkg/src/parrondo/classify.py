"""Winning/fair/losing verdicts: the single authority.

A kernel is first rescaled onto its true sublattice, its monodromy spectrum
computed, and the walk classified by the sign of

    ln_c = d_R + d_{R+1},

the sum of the two middle log-magnitudes of the ascending list (1-based
positions R and R+1, taken after rescaling).  Fair is a tolerance band
around 0, not exact equality: a floating-point spectrum cannot certify
exact recurrence.

Stochastic schedules never touch the matrices for the verdict itself: the
mixture is a nearest-neighbour game, so ln_c comes from the exact rational
product formula and lands on 0.0 exactly for exactly-fair mixtures.  The
spectrum is still attached to the report for inspection.  Deterministic
schedules always go through the spectral route, which keeps this module's
verdicts independent of the game-level product formula that tests and the
sweep module use as a cross-check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from .games import Classification, PeriodicGame, fairness_constant, log_fairness
from .kernels import (
    CompositionSchedule,
    EnvironmentKernel,
    StochasticSchedule,
    compose_cycle,
    lift,
    mix,
    rescale,
)
from .spectral import double_root_from_char_poly, kernel_spectrum

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SpectralReport:
    """Classification outcome plus the spectrum it came from."""

    d: tuple[float, ...]
    R: int
    L: int
    ln_c: float
    verdict: Classification
    method: str
    tolerance: float
    double_root: Optional[bool] = None

    def to_json(self) -> str:
        return json.dumps({
            "verdict": self.verdict.value,
            "ln_c": self.ln_c,
            "d": list(self.d),
            "R": self.R,
            "L": self.L,
            "method": self.method,
            "double_root_flag": self.double_root,
        })


def _verdict(ln_c: float, tol: float) -> Classification:
    if ln_c > tol:
        return Classification.WINNING
    if ln_c < -tol:
        return Classification.LOSING
    return Classification.FAIR


def _corroborate(coeffs, ln_c: float, tol: float) -> Optional[bool]:
    # Near the fair band, additionally check the double-root-at-1 signature
    # of recurrence; the polynomial tolerance is scaled to coefficient size.
    if abs(ln_c) > 10 * tol:
        return None
    scale = max(1.0, float(max(abs(float(c)) for c in coeffs)))
    return double_root_from_char_poly(coeffs, tol * scale)


def classify_kernel(kernel: EnvironmentKernel, tol: float = DEFAULT_TOL) -> SpectralReport:
    """Classify a walk by the spectrum of its (rescaled) monodromy matrix."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    rescaled, _ = rescale(kernel)
    spectrum, coeffs = kernel_spectrum(rescaled)
    d = tuple(math.log(v) for v in spectrum.magnitudes)
    ln_c = d[rescaled.R - 1] + d[rescaled.R]
    return SpectralReport(
        d=d,
        R=rescaled.R,
        L=rescaled.L,
        ln_c=ln_c,
        verdict=_verdict(ln_c, tol),
        method="Spectral",
        tolerance=tol,
        double_root=_corroborate(coeffs, ln_c, tol),
    )


def classify_schedule(schedule: CompositionSchedule, tol: float = DEFAULT_TOL) -> SpectralReport:
    """Classify a composition: exact closed form for mixtures, spectral for cycles."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(schedule, StochasticSchedule):
        mixed = mix(schedule.first, schedule.second, schedule.weights)
        ln_c = log_fairness(mixed)
        spectrum, coeffs = kernel_spectrum(lift(mixed))
        return SpectralReport(
            d=tuple(math.log(v) for v in spectrum.magnitudes),
            R=1,
            L=1,
            ln_c=ln_c,
            verdict=_verdict(ln_c, tol),
            method="ClosedForm",
            tolerance=tol,
            double_root=_corroborate(coeffs, ln_c, tol),
        )
    return classify_kernel(compose_cycle(schedule.games, schedule.phase), tol)


def fairness_c(game: PeriodicGame) -> float:
    """Fairness constant of a nearest-neighbour game (alias used by sweeps)."""
    return fairness_constant(game)
