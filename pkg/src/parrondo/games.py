"""Periodic simple games and their fairness algebra.

A game of spatial period N is a vector of win probabilities (p_0, ..., p_{N-1});
the walker at position x wins +1 with probability p_{x mod N} and loses -1
otherwise.  For such nearest-neighbour walks the product

    c = prod_i p_i / (1 - p_i)

decides everything: the game is losing, fair, or winning as c < 1, c = 1,
or c > 1.

Probabilities carry an exact rational alongside their double value (every
float is a dyadic rational, and text input like "0.675" or "5/8" parses
exactly), so completion and mixture identities hold exactly instead of to
round-off.  The kernel/spectral pipeline downstream works in doubles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DegenerateGame, InvalidProbability


class Classification(Enum):
    LOSING = "Losing"
    FAIR = "Fair"
    WINNING = "Winning"

    def __str__(self):
        return self.value


ProbabilityLike = Union["Probability", Fraction, int, float, str]


@dataclass(frozen=True)
class Probability:
    """A win probability: double value plus the exact rational it came from.

    Construction does not range-check so that malformed games can be built
    and then reported precisely by :func:`validate_game`.
    """

    value: float
    frac: Fraction

    @classmethod
    def of(cls, x: ProbabilityLike) -> "Probability":
        if isinstance(x, Probability):
            return x
        if isinstance(x, str):
            frac = Fraction(x.strip())
        elif isinstance(x, (Fraction, int)):
            frac = Fraction(x)
        else:
            v = float(x)
            if not math.isfinite(v):
                raise InvalidProbability(None, x)
            frac = Fraction(v)
        return cls(float(frac), frac)

    @property
    def is_valid(self) -> bool:
        return 0 <= self.frac <= 1

    @property
    def is_interior(self) -> bool:
        return 0 < self.frac < 1

    def complement(self) -> "Probability":
        f = 1 - self.frac
        return Probability(float(f), f)

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"Probability({self.value!r})"


def as_probability(x: ProbabilityLike) -> Probability:
    return Probability.of(x)


@dataclass(frozen=True)
class PeriodicGame:
    """Spatial-period-N vector of win probabilities."""

    probs: tuple[Probability, ...]

    @classmethod
    def of(cls, *entries: ProbabilityLike) -> "PeriodicGame":
        if len(entries) == 1 and isinstance(entries[0], (list, tuple)):
            entries = tuple(entries[0])
        return cls(tuple(Probability.of(e) for e in entries))

    @property
    def period(self) -> int:
        return len(self.probs)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(p.value for p in self.probs)

    def mirrored(self) -> "PeriodicGame":
        """The game with every entry replaced by its complement 1 - p_i."""
        return PeriodicGame(tuple(p.complement() for p in self.probs))

    def to_json(self) -> str:
        return json.dumps({"period": self.period,
                           "p": [f"{p.value:.17g}" for p in self.probs]})

    @classmethod
    def from_json(cls, text: str) -> "PeriodicGame":
        obj = json.loads(text)
        game = cls.of(*obj["p"])
        if obj.get("period") not in (None, game.period):
            raise InvalidProbability(None, f"period {obj['period']} != {game.period} entries")
        return game


def validate_game(game: PeriodicGame) -> None:
    """Check N >= 1 and every entry in [0, 1]; raise InvalidProbability(index)."""
    if game.period < 1:
        raise InvalidProbability(None, "empty game")
    for i, p in enumerate(game.probs):
        if not p.is_valid:
            raise InvalidProbability(i, p.value)


def require_interior(game: PeriodicGame) -> None:
    validate_game(game)
    for p in game.probs:
        if not p.is_interior:
            raise DegenerateGame(f"win probability {p.value} is not strictly inside (0, 1)")


def fairness_constant_exact(game: PeriodicGame) -> Fraction:
    """Exact rational prod_i p_i / (1 - p_i)."""
    require_interior(game)
    c = Fraction(1)
    for p in game.probs:
        c *= p.frac / (1 - p.frac)
    return c


def fairness_constant(game: PeriodicGame) -> float:
    """prod_i p_i / (1 - p_i); <1 losing, =1 fair, >1 winning."""
    return float(fairness_constant_exact(game))


def log_fairness(game: PeriodicGame) -> float:
    """ln of the fairness constant, exactly 0.0 when the constant is exactly 1."""
    c = fairness_constant_exact(game)
    if c == 1:
        return 0.0
    return math.log(c.numerator) - math.log(c.denominator)


def _completion_head(tail: Sequence[Probability]) -> Fraction:
    """Head probability B/(A+B) balancing a tail; total on [0,1] tails."""
    a = Fraction(1)
    b = Fraction(1)
    for t in tail:
        a *= t.frac
        b *= 1 - t.frac
    if a + b == 0:
        raise DegenerateGame("tail mixes certain wins and certain losses")
    return b / (a + b)


def fair_completion(tail: Iterable[ProbabilityLike]) -> Probability:
    """Solve prod p_i/(1-p_i) = 1 for the head entry given the tail.

    With A = prod tail_i and B = prod (1 - tail_i) the head is B/(A+B), so the
    completed game (head, *tail) has fairness constant exactly 1.
    """
    probs = tuple(Probability.of(t) for t in tail)
    for t in probs:
        if not t.is_interior:
            raise DegenerateGame(f"tail entry {t.value} is not strictly inside (0, 1)")
    f = _completion_head(probs)
    return Probability(float(f), f)


def losing_family_p2(p: ProbabilityLike, scale: ProbabilityLike) -> Probability:
    """Third entry scale*(1-p)^2/((1-p)^2 + p^2) making (p, p, .) losing.

    This is the fair completion of (p, p) damped by `scale`; for any
    0 < scale < 1 the completed game's fairness constant is
    scale*p^2 / ((1-scale)*(1-p)^2 + p^2) < scale < 1.
    """
    prob = Probability.of(p)
    s = Probability.of(scale)
    if not prob.is_interior:
        raise DegenerateGame(f"base probability {prob.value} is not strictly inside (0, 1)")
    if not s.is_interior:
        raise DegenerateGame(f"scale {s.value} must lie strictly inside (0, 1)")
    q = 1 - prob.frac
    f = s.frac * q * q / (q * q + prob.frac * prob.frac)
    return Probability(float(f), f)
