"""Service-provider and rater behaviour models.

Providers decide whether a service is delivered on time; devices turn that
into a rating and, when dishonest, distort the direct trust they report.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

HONEST_DELAY_P = 0.05
MALICIOUS_DELAY_P = 0.95

ON_TIME_BAND = (0.8, 1.0)
DELAYED_BAND = (0.0, 0.2)
BAD_MOUTH_BAND = (0.0, 0.25)
BALLOT_BAND = (0.75, 1.0)


class SpKind(str, enum.Enum):
    HONEST = "honest"
    MALICIOUS = "malicious"
    ONOFF_SCHEDULE = "onoff_schedule"
    ONOFF_RANDOM = "onoff_random"


class RaterKind(str, enum.Enum):
    HONEST = "honest"
    BAD_MOUTHING = "bad_mouthing"
    BALLOT_STUFFING = "ballot_stuffing"
    BAD_MOUTHING_ONOFF = "bad_mouthing_onoff"


class Quality(str, enum.Enum):
    ON_TIME = "on_time"
    DELAYED = "delayed"


@dataclass(frozen=True)
class OnOffSchedule:
    on_seconds: float
    off_seconds: float
    starts_on: bool = True

    def __post_init__(self):
        if self.on_seconds <= 0 or self.off_seconds <= 0:
            raise ValueError("on/off periods must be positive")

    @property
    def period(self) -> float:
        return self.on_seconds + self.off_seconds

    def is_on(self, time: float) -> bool:
        phase = time % self.period
        if self.starts_on:
            return phase < self.on_seconds
        return phase >= self.off_seconds


@dataclass(frozen=True)
class SpBehavior:
    """How a provider serves.

    For ``ONOFF_SCHEDULE`` the ON phase delays with probability
    ``random_bad_fraction`` when given, otherwise like a malicious provider.
    For ``ONOFF_RANDOM`` every service is delayed with that probability.
    """

    kind: SpKind = SpKind.HONEST
    schedule: OnOffSchedule | None = None
    random_bad_fraction: float | None = None

    def __post_init__(self):
        if self.kind == SpKind.ONOFF_SCHEDULE and self.schedule is None:
            raise ValueError("onoff_schedule needs a schedule")
        if self.kind == SpKind.ONOFF_RANDOM and self.random_bad_fraction is None:
            raise ValueError("onoff_random needs random_bad_fraction")
        f = self.random_bad_fraction
        if f is not None and not 0.0 <= f <= 1.0:
            raise ValueError("random_bad_fraction must lie in [0, 1]")

    def delay_probability(self, time: float) -> float:
        if self.kind == SpKind.HONEST:
            return HONEST_DELAY_P
        if self.kind == SpKind.MALICIOUS:
            return MALICIOUS_DELAY_P
        if self.kind == SpKind.ONOFF_RANDOM:
            return self.random_bad_fraction
        if not self.schedule.is_on(time):
            return HONEST_DELAY_P
        if self.random_bad_fraction is not None:
            return self.random_bad_fraction
        return MALICIOUS_DELAY_P


@dataclass(frozen=True)
class RaterBehavior:
    kind: RaterKind = RaterKind.HONEST
    # (honest_seconds, attack_seconds), honest phase first
    onoff_cycle: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind == RaterKind.BAD_MOUTHING_ONOFF:
            if self.onoff_cycle is None:
                raise ValueError("bad_mouthing_onoff needs onoff_cycle")
            if min(self.onoff_cycle) <= 0:
                raise ValueError("cycle periods must be positive")

    @property
    def is_malicious(self) -> bool:
        return self.kind != RaterKind.HONEST

    def attacking(self, time: float) -> bool:
        if self.kind == RaterKind.HONEST:
            return False
        if self.kind == RaterKind.BAD_MOUTHING_ONOFF:
            honest_s, attack_s = self.onoff_cycle
            return time % (honest_s + attack_s) >= honest_s
        return True


def sp_service_quality(behavior: SpBehavior, time: float, rng: np.random.Generator) -> Quality:
    p = behavior.delay_probability(time)
    return Quality.DELAYED if rng.random() < p else Quality.ON_TIME


def rate_service(quality: Quality, rng: np.random.Generator) -> float:
    lo, hi = ON_TIME_BAND if quality == Quality.ON_TIME else DELAYED_BAND
    return float(rng.uniform(lo, hi))


def report_direct_trust(behavior: RaterBehavior, true_dt: float, time: float, rng: np.random.Generator) -> float:
    if not behavior.attacking(time):
        return true_dt
    if behavior.kind == RaterKind.BALLOT_STUFFING:
        lo, hi = BALLOT_BAND
    else:
        lo, hi = BAD_MOUTH_BAND
    return float(rng.uniform(lo, hi))


_ONOFF_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*(on|off)\s*-\s*(\d+(?:\.\d+)?)\s*(on|off)\s*$", re.I)
_RANDOM_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)%\s*-\s*(\d+(?:\.\d+)?)%\s*$")


def parse_on_off(text: str) -> SpBehavior:
    """Parse ``"30on-70off"``, ``"70off-30on"`` or ``"50%-50%"``."""
    m = _ONOFF_RE.match(text)
    if m:
        a, sa, b, sb = float(m[1]), m[2].lower(), float(m[3]), m[4].lower()
        if sa == sb:
            raise ValueError(f"on_off {text!r} needs one on and one off phase")
        on, off = (a, b) if sa == "on" else (b, a)
        return SpBehavior(SpKind.ONOFF_SCHEDULE, OnOffSchedule(on, off, starts_on=sa == "on"))
    m = _RANDOM_RE.match(text)
    if m:
        bad, good = float(m[1]), float(m[2])
        if abs(bad + good - 100.0) > 1e-9:
            raise ValueError(f"on_off {text!r} percentages must sum to 100")
        return SpBehavior(SpKind.ONOFF_RANDOM, random_bad_fraction=bad / 100.0)
    raise ValueError(f"cannot parse on_off {text!r}")
