"""Two-stage VOP detection: CWT candidates moved onto STM phone boundaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Signal
from .cwt import WaveletConfig, detect_vops_cwt
from .events import VOP_CORRECTED, EventList
from .stm import StmConfig, detect_phone_boundaries

_EPS = 1e-9


@dataclass(frozen=True)
class FusionConfig:
    max_snap_window: float = 0.060
    dedupe: bool = True

    def __post_init__(self):
        if self.max_snap_window <= 0:
            raise ValueError("max_snap_window must be positive")


def snap_vops(vops: EventList, boundaries: EventList,
              config: FusionConfig = FusionConfig()) -> EventList:
    """Move each VOP back to the closest boundary at or before it.

    Boundaries more than ``max_snap_window`` seconds earlier are ignored and
    the VOP is kept where it is. With ``dedupe``, VOPs landing on the same
    boundary collapse into one event. ``source_times`` of the result holds
    the original candidate time of each event (carried over when ``vops``
    already has provenance, so re-snapping is the identity).
    """
    b = boundaries.times
    origins = vops.source_times if vops.source_times is not None else vops.times
    out_times, sources = [], []
    used = set()
    for t, origin in zip(vops.times, origins):
        j = int(np.searchsorted(b, t, side="right")) - 1
        if j >= 0 and t - b[j] <= config.max_snap_window + _EPS:
            if config.dedupe and j in used:
                continue
            used.add(j)
            out_times.append(b[j])
        else:
            out_times.append(t)
        sources.append(origin)
    order = np.argsort(out_times, kind="stable")
    return EventList(np.asarray(out_times)[order], VOP_CORRECTED,
                     np.asarray(sources)[order])


def detect_vops(signal: Signal, wavelet_cfg: WaveletConfig = WaveletConfig(),
                stm_cfg: StmConfig = StmConfig(),
                fusion_cfg: FusionConfig = FusionConfig()) -> EventList:
    """End-to-end proposed detector."""
    candidates = detect_vops_cwt(signal, wavelet_cfg)
    boundaries = detect_phone_boundaries(signal, stm_cfg)
    return snap_vops(candidates, boundaries, fusion_cfg)
