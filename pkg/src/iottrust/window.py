"""Per-(device, provider) rating window with transaction-bounded length.

A window is a list of closed time slots plus the slot currently being
filled.  When a slot's duration elapses it is appended to the window and
whole oldest slots are dropped while the window holds more than
``max_rating`` ratings and dropping would still leave at least
``min_rating`` of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class SlotBoundaryError(ValueError):
    """A rating was timestamped outside the slot it was offered to."""


@dataclass(frozen=True)
class TrustRating:
    value: float
    timestamp: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"rating value {self.value} outside [0, 1]")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp {self.timestamp}")


@dataclass
class TimeSlot:
    start_time: float
    ratings: list[TrustRating] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.ratings)


@dataclass(frozen=True)
class WindowConfig:
    slot_duration: float = 20.0
    max_rating: int = 20
    min_rating: int = 5

    def __post_init__(self):
        if self.slot_duration <= 0:
            raise ValueError("slot_duration must be positive")
        if not self.max_rating >= self.min_rating >= 1:
            raise ValueError("need max_rating >= min_rating >= 1")


@dataclass
class TrustWindow:
    config: WindowConfig = field(default_factory=WindowConfig)
    slots: list[TimeSlot] = field(default_factory=list)
    current_slot: TimeSlot = field(default_factory=lambda: TimeSlot(0.0))

    def ratings(self) -> list[TrustRating]:
        """Ratings in the closed slots, oldest first."""
        return [r for s in self.slots for r in s.ratings]


def record_rating(window: TrustWindow, rating: TrustRating) -> TrustWindow:
    slot = window.current_slot
    end = slot.start_time + window.config.slot_duration
    if not slot.start_time <= rating.timestamp < end:
        raise SlotBoundaryError(
            f"rating at t={rating.timestamp} outside current slot "
            f"[{slot.start_time}, {end})"
        )
    if slot.ratings and rating.timestamp < slot.ratings[-1].timestamp:
        raise SlotBoundaryError("ratings must arrive in timestamp order")
    slot.ratings.append(rating)
    return window


def transaction_count(window: TrustWindow) -> int:
    """Ratings held in closed slots plus the in-progress slot."""
    return sum(s.count for s in window.slots) + window.current_slot.count


def close_slot_and_adjust(window: TrustWindow, next_start: float) -> TrustWindow:
    cfg = window.config
    window.slots.append(window.current_slot)
    window.current_slot = TimeSlot(next_start)

    cnt = transaction_count(window)
    if cnt > cfg.max_rating:
        n_cnt = cnt - window.slots[0].count
        while n_cnt >= cfg.min_rating and cnt > cfg.max_rating:
            window.slots.pop(0)
            cnt = transaction_count(window)
            # the freshly appended slot is never popped: n_cnt would be 0 < min_rating
            n_cnt = cnt - window.slots[0].count
    return window
