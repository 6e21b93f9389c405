"""Time-instant event lists shared by every detector."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

VOP_CANDIDATE = "vop_candidate"
VOP_CORRECTED = "vop_corrected"
PHONE_BOUNDARY = "phone_boundary"
GROUND_TRUTH = "vop_actual"
GCI = "gci"

KINDS = (VOP_CANDIDATE, VOP_CORRECTED, PHONE_BOUNDARY, GROUND_TRUTH, GCI)


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class EventList:
    """Sorted event times in seconds, tagged with a kind.

    ``source_times`` optionally records, per event, the time the event was
    derived from (e.g. the CWT candidate a corrected VOP was snapped from).
    """

    times: np.ndarray
    kind: str = VOP_CANDIDATE
    source_times: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        times = _frozen(self.times)
        object.__setattr__(self, "times", times)
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if not np.all(np.isfinite(times)):
            raise ValueError("event times must be finite")
        if times.size and times[0] < 0:
            raise ValueError("event times must be >= 0")
        if np.any(np.diff(times) < 0):
            raise ValueError("event times must be sorted")
        if self.source_times is not None:
            src = _frozen(self.source_times)
            if src.shape != times.shape:
                raise ValueError("source_times must align with times")
            object.__setattr__(self, "source_times", src)

    def __len__(self) -> int:
        return int(self.times.size)

    def __iter__(self):
        return iter(self.times.tolist())

    @classmethod
    def empty(cls, kind: str = VOP_CANDIDATE) -> "EventList":
        return cls(np.zeros(0), kind)

    def with_kind(self, kind: str) -> "EventList":
        return EventList(self.times, kind, self.source_times)

    def __eq__(self, other):
        if not isinstance(other, EventList):
            return NotImplemented
        if self.kind != other.kind or not np.array_equal(self.times, other.times):
            return False
        if (self.source_times is None) != (other.source_times is None):
            return False
        return self.source_times is None or np.array_equal(
            self.source_times, other.source_times
        )

    __hash__ = None
