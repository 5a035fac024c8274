"""Environment kernels: the per-residue step law a composite walk runs on.

Two composition clocks exist.  A stochastic mixture flips a residue-dependent
coin between two games at every step, which stays a nearest-neighbour game.
A deterministic cycle plays T games in a fixed order; sampling the walk every
T steps yields a time-homogeneous walk with steps up to +-T whose exact step
law per start residue is computed here by dynamic programming over offsets.

Conventions that matter downstream:

* Residue 0 of a kernel is the walk's start residue.  ``compose_cycle`` takes
  an explicit ``phase`` (the start position mod N) and shifts the residue
  labels so this holds; the verdict of a deterministic composition genuinely
  depends on it.
* Offsets with probability zero are pruned, and ``rescale`` divides all
  offsets by their gcd (remapping residues) whenever the walk lives on a
  sublattice, so R and L always reflect the true support.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import InvalidKernel, PeriodMismatch, WeightCountMismatch
from .games import PeriodicGame, Probability, ProbabilityLike, require_interior, validate_game

SUM_TOL = 1e-12
IID_TOL = 1e-12


@dataclass(frozen=True)
class StepDistribution:
    """Map from integer step offset to its probability, kept in ascending offset order."""

    probs: dict[int, float]

    def __post_init__(self):
        ordered = {int(o): float(p) for o, p in sorted(self.probs.items())}
        object.__setattr__(self, "probs", ordered)

    @property
    def max_up(self) -> int:
        return max(self.probs)

    @property
    def max_down(self) -> int:
        return -min(self.probs)

    def validate(self, R: int, L: int) -> None:
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > SUM_TOL:
            raise InvalidKernel(f"step probabilities sum to {total!r}, not 1")
        for o, p in self.probs.items():
            if p < 0:
                raise InvalidKernel(f"negative probability {p!r} at offset {o}")
            if not -L <= o <= R:
                raise InvalidKernel(f"offset {o} outside [-{L}, {R}]")
        if self.probs.get(R, 0.0) <= 0 or self.probs.get(-L, 0.0) <= 0:
            raise InvalidKernel(f"extremal offsets -{L} and +{R} must both have positive probability")


def mean_step(dist: StepDistribution) -> float:
    """Expected displacement of one step."""
    return math.fsum(o * p for o, p in dist.probs.items())


@dataclass(frozen=True)
class EnvironmentKernel:
    """N-periodic environment: one step distribution per residue, shared step bounds R, L."""

    period: int
    steps: tuple[StepDistribution, ...]
    R: int
    L: int

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.period < 1 or len(self.steps) != self.period:
            raise InvalidKernel(f"period {self.period} does not match {len(self.steps)} distributions")
        if self.R < 1 or self.L < 1:
            raise InvalidKernel("step bounds R and L must both be at least 1")
        for dist in self.steps:
            dist.validate(self.R, self.L)

    def to_json(self) -> str:
        return json.dumps({
            "period": self.period,
            "R": self.R,
            "L": self.L,
            "steps": [{str(o): f"{p:.17g}" for o, p in d.probs.items()} for d in self.steps],
        })

    @classmethod
    def from_json(cls, text: str) -> "EnvironmentKernel":
        obj = json.loads(text)
        steps = tuple(
            StepDistribution({int(o): float(Probability.of(p).frac) for o, p in entry.items()})
            for entry in obj["steps"]
        )
        return cls(int(obj["period"]), steps, int(obj["R"]), int(obj["L"]))


@dataclass(frozen=True)
class DeterministicSchedule:
    """Play ``games`` cyclically in order, starting at a position == phase (mod N)."""

    games: tuple[PeriodicGame, ...]
    phase: int = 0

    def __post_init__(self):
        object.__setattr__(self, "games", tuple(self.games))
        if not self.games:
            raise PeriodMismatch("a cycle needs at least one game")
        n = self.games[0].period
        if any(g.period != n for g in self.games):
            raise PeriodMismatch("all games in a cycle must share one spatial period")
        if not 0 <= self.phase < n:
            raise InvalidKernel(f"phase {self.phase} outside residue range [0, {n})")


@dataclass(frozen=True)
class StochasticSchedule:
    """Per step, play ``first`` with probability weights[residue], else ``second``."""

    first: PeriodicGame
    second: PeriodicGame
    weights: tuple[Probability, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Probability.of(w) for w in self.weights))
        if self.first.period != self.second.period:
            raise PeriodMismatch("mixed games must share one spatial period")
        if len(self.weights) != self.first.period:
            raise WeightCountMismatch(
                f"{len(self.weights)} weights for period {self.first.period}")


CompositionSchedule = Union[DeterministicSchedule, StochasticSchedule]


def mix(first: PeriodicGame, second: PeriodicGame,
        weights: Sequence[ProbabilityLike]) -> PeriodicGame:
    """Residue-wise mixture: rho_i = g_i * p_i + (1 - g_i) * q_i, exactly."""
    if first.period != second.period:
        raise PeriodMismatch(f"periods {first.period} and {second.period} differ")
    ws = tuple(Probability.of(w) for w in weights)
    if len(ws) != first.period:
        raise WeightCountMismatch(f"{len(ws)} weights for period {first.period}")
    validate_game(first)
    validate_game(second)
    for i, g in enumerate(ws):
        if not g.is_valid:
            raise WeightCountMismatch(f"weight {i} is {g.value!r}, not in [0, 1]")
    mixed = []
    for p, q, g in zip(first.probs, second.probs, ws):
        f = g.frac * p.frac + (1 - g.frac) * q.frac
        mixed.append(Probability(float(f), f))
    return PeriodicGame(tuple(mixed))


def lift(game: PeriodicGame) -> EnvironmentKernel:
    """The nearest-neighbour kernel of a single game: steps {+1: p_i, -1: 1 - p_i}."""
    require_interior(game)
    steps = tuple(StepDistribution({-1: 1.0 - p.value, 1: p.value}) for p in game.probs)
    return EnvironmentKernel(game.period, steps, 1, 1)


def _cycle_distribution(games: Sequence[PeriodicGame], start: int, n: int) -> dict[int, float]:
    # Dense DP over offsets, accumulated in ascending offset order so the
    # result is bit-reproducible.
    t_total = len(games)
    width = 2 * t_total + 1
    cur = [0.0] * width
    cur[t_total] = 1.0
    for game in games:
        new = [0.0] * width
        for i in range(width):
            w = cur[i]
            if w == 0.0:
                continue
            p = game.probs[(start + i - t_total) % n].value
            new[i - 1] += w * (1.0 - p)
            new[i + 1] += w * p
        cur = new
    return {i - t_total: cur[i] for i in range(width) if cur[i] > 0.0}


def compose_cycle(games: Iterable[PeriodicGame], phase: int = 0) -> EnvironmentKernel:
    """Kernel of the derived chain sampled once per T-game cycle.

    Residue s of the result is the exact T-step path law started at a
    position congruent to phase + s (mod N); residue 0 is the start.
    """
    schedule = DeterministicSchedule(tuple(games), phase)
    for g in schedule.games:
        require_interior(g)
    n = schedule.games[0].period
    t_total = len(schedule.games)
    steps = tuple(
        StepDistribution(_cycle_distribution(schedule.games, (phase + s) % n, n))
        for s in range(n)
    )
    return EnvironmentKernel(n, steps, t_total, t_total)


def rescale(kernel: EnvironmentKernel) -> tuple[EnvironmentKernel, int]:
    """Divide all offsets by their gcd and remap residues along the sublattice.

    Returns ``(kernel, 1)`` unchanged when the gcd is 1.  Otherwise position u
    of the rescaled walk corresponds to position s*u of the original (relative
    to its start), so the new period is N / gcd(N, s) and residue u maps back
    to original residue (s*u) mod N.  Recurrence/transience of the rescaled
    walk equals that of the original restricted to its start sublattice.
    """
    s = 0
    for dist in kernel.steps:
        for o, p in dist.probs.items():
            if o != 0 and p > 0:
                s = math.gcd(s, abs(o))
    if s <= 1:
        return kernel, 1
    n_new = kernel.period // math.gcd(kernel.period, s)
    steps = tuple(
        StepDistribution({o // s: p for o, p in kernel.steps[(s * u) % kernel.period].probs.items()})
        for u in range(n_new)
    )
    return EnvironmentKernel(n_new, steps, kernel.R // s, kernel.L // s), s


def collapse_iid(kernel: EnvironmentKernel) -> Optional[StepDistribution]:
    """The shared step law if every residue has the same one (within 1e-12), else None."""
    base = kernel.steps[0]
    support = set(base.probs)
    for dist in kernel.steps[1:]:
        support |= set(dist.probs)
    for dist in kernel.steps[1:]:
        for o in support:
            if abs(dist.probs.get(o, 0.0) - base.probs.get(o, 0.0)) > IID_TOL:
                return None
    return base
