"""Direct trust of a provider computed by one device from its rating window."""

from __future__ import annotations

from dataclasses import dataclass

from .window import TrustWindow

UNCERTAIN = 0.5


class NoRatingsError(ValueError):
    """The window holds no ratings, so the factor is undefined."""


@dataclass(frozen=True)
class TrustParams:
    beta: float = 7.0
    reward_exp: float = 1.5
    penalty_exp: float = 0.25
    high_threshold: float = 0.7
    low_threshold: float = 0.3

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if not 0.0 <= self.reward_exp <= 2.0:
            raise ValueError("reward_exp must lie in [0, 2]")
        if not 0.0 <= self.penalty_exp <= 2.0:
            raise ValueError("penalty_exp must lie in [0, 2]")


@dataclass(frozen=True)
class TrustFactors:
    t_tr: float
    w_t: float
    t_intermediate: float
    highvalues: int
    lowvalues: int
    reward: float
    penalty: float
    direct_trust: float


def trust_score_factor(window: TrustWindow) -> float:
    values = [r.value for r in window.ratings()]
    if not values:
        raise NoRatingsError("empty window")
    return sum(values) / len(values)


def time_weight_factor(window: TrustWindow, t_tr: float) -> float:
    """Mean positional slot weight of the window's ratings.

    A rating in the j-th closed slot (oldest is 1) of an m-slot window
    weighs j/m.  Below a mean rating of 0.5 the complement is returned so
    that old low ratings drift up toward the uncertain zone.
    """
    m = len(window.slots)
    n = 0
    acc = 0.0
    for j, slot in enumerate(window.slots, start=1):
        n += slot.count
        acc += slot.count * j
    if n == 0:
        raise NoRatingsError("empty window")
    mean = acc / (n * m)
    return mean if t_tr >= 0.5 else 1.0 - mean


def intermediate_trust(t_tr: float, w_t: float, beta: float) -> float:
    b2 = beta * beta
    denom = b2 * w_t + t_tr
    if denom == 0.0:
        return 0.0
    if w_t == t_tr:
        return t_tr
    return (1.0 + b2) * w_t * t_tr / denom


def reward_factor(highvalues: int, r: float) -> float:
    return 1.0 - 1.0 / (highvalues + 2) ** r


def penalty_factor(lowvalues: int, e: float) -> float:
    return 1.0 / (lowvalues + 1) ** e


def direct_trust(window: TrustWindow, params: TrustParams = TrustParams()) -> TrustFactors:
    values = [r.value for r in window.ratings()]
    if not values:
        return TrustFactors(
            t_tr=UNCERTAIN, w_t=UNCERTAIN, t_intermediate=UNCERTAIN,
            highvalues=0, lowvalues=0, reward=1.0, penalty=1.0,
            direct_trust=UNCERTAIN,
        )
    t_tr = sum(values) / len(values)
    w_t = time_weight_factor(window, t_tr)
    t_int = intermediate_trust(t_tr, w_t, params.beta)
    high = sum(1 for v in values if v > params.high_threshold)
    low = sum(1 for v in values if v < params.low_threshold)
    reward = reward_factor(high, params.reward_exp)
    penalty = penalty_factor(low, params.penalty_exp)
    return TrustFactors(
        t_tr=t_tr, w_t=w_t, t_intermediate=t_int,
        highvalues=high, lowvalues=low, reward=reward, penalty=penalty,
        direct_trust=reward * penalty * t_int,
    )
