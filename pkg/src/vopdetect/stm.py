"""Stage 2 evidence: spectral transition measure (STM) and phone boundaries.

Features are 13 MFCCs (c0..c12) plus their first and second regression
deltas. The STM at frame ``g`` is the mean over all 39 feature tracks of the
squared regression slope

    r_i(g) = sum_{n=-I..I} n * f_i(g + n) / sum_{n=-I..I} n**2

with the first/last frame replicated ``I`` times at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft

from . import dsp
from .corpus import Signal
from .dsp import Contour
from .events import PHONE_BOUNDARY, EventList

NUM_FEATURES = 39


@dataclass(frozen=True)
class MfccConfig:
    frame_len: float = 0.025
    hop: float = 0.010
    nfft: int = 512
    num_filters: int = 26
    num_ceps: int = 13
    fmin: float = 0.0
    fmax: Optional[float] = None
    log_floor: float = 1e-10
    delta_width: int = 2

    def __post_init__(self):
        if not 0 < self.hop <= self.frame_len:
            raise ValueError("need 0 < hop <= frame_len")
        if not 0 < self.num_ceps <= self.num_filters:
            raise ValueError("need 0 < num_ceps <= num_filters")
        if self.log_floor <= 0 or self.delta_width < 1:
            raise ValueError("log_floor must be positive and delta_width >= 1")


@dataclass(frozen=True)
class StmConfig:
    regression_half_width: int = 2
    smooth_window: float = 0.020
    threshold_fraction: float = 0.12
    # absolute floor on smoothed STM peaks (squared log-energy slope per frame);
    # stops stationary input from reporting rounding-level ripple as boundaries
    min_peak_value: float = 0.2
    mfcc: MfccConfig = MfccConfig()

    def __post_init__(self):
        if self.regression_half_width < 1:
            raise ValueError("regression_half_width must be >= 1")
        if not 0 < self.threshold_fraction < 1:
            raise ValueError("threshold_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class FeatureSequence:
    frames: np.ndarray
    hop: float = 0.010
    frame_len: float = 0.025
    origin: float = 0.0125

    def __post_init__(self):
        frames = np.array(self.frames, dtype=float)
        if frames.ndim != 2:
            raise ValueError("feature frames must be a 2-D array")
        if not np.all(np.isfinite(frames)):
            raise ValueError("feature frames must be finite")
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return int(self.frames.shape[0])


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m) / 2595.0) - 1.0)


def mel_filterbank(num_filters: int, nfft: int, rate: int, fmin: float = 0.0,
                   fmax: Optional[float] = None) -> np.ndarray:
    """Triangular filters on the HTK mel scale, shape ``(num_filters, nfft//2+1)``."""
    fmax = rate / 2 if fmax is None else fmax
    edges = mel_to_hz(np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), num_filters + 2))
    bins = np.arange(nfft // 2 + 1) * rate / nfft
    lower, centre, upper = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    rising = (bins - lower) / (centre - lower)
    falling = (upper - bins) / (upper - centre)
    return np.clip(np.minimum(rising, falling), 0.0, None)


def regression_deltas(track: np.ndarray, half_width: int = 2) -> np.ndarray:
    """Regression slope along axis 0 with edge-frame replication."""
    track = np.asarray(track, dtype=float)
    n = np.arange(-half_width, half_width + 1)
    pad = [(half_width, half_width)] + [(0, 0)] * (track.ndim - 1)
    padded = np.pad(track, pad, mode="edge")
    length = track.shape[0]
    out = np.zeros_like(track)
    # pairing +k with -k keeps constant and even-symmetric input exactly zero
    for k in range(1, half_width + 1):
        out += k * (padded[half_width + k:half_width + k + length]
                    - padded[half_width - k:half_width - k + length])
    return out / np.sum(n * n)


def mfcc_39(signal: Signal, config: MfccConfig = MfccConfig()) -> FeatureSequence:
    frames = dsp.frame_signal(signal, config.frame_len, config.hop)
    window = np.hamming(frames.shape[1])
    power = np.abs(np.fft.rfft(frames * window, n=config.nfft)) ** 2
    fb = mel_filterbank(config.num_filters, config.nfft, signal.sample_rate,
                        config.fmin, config.fmax)
    log_mel = np.log(np.maximum(power @ fb.T, config.log_floor))
    static = scipy.fft.dct(log_mel, type=2, norm="ortho", axis=1)[:, :config.num_ceps]
    delta = regression_deltas(static, config.delta_width)
    delta2 = regression_deltas(delta, config.delta_width)
    return FeatureSequence(np.hstack([static, delta, delta2]), config.hop,
                           config.frame_len, config.frame_len / 2)


def regression_rate(features: FeatureSequence, g: int, i: int, half_width: int = 2) -> float:
    """Slope of feature track ``i`` around frame ``g`` (edges replicated)."""
    track = features.frames[:, i]
    last = track.size - 1
    num = sum(n * (track[min(g + n, last)] - track[max(g - n, 0)])
              for n in range(1, half_width + 1))
    den = sum(n * n for n in range(-half_width, half_width + 1))
    return float(num / den)


def stm_contour(features: FeatureSequence, config: StmConfig = StmConfig()) -> Contour:
    half = config.regression_half_width
    if len(features) < 2 * half + 1:
        raise ValueError(f"need at least {2 * half + 1} feature frames")
    rates = regression_deltas(features.frames, half)
    return Contour(np.mean(rates**2, axis=1), features.hop, features.origin)


@dataclass(frozen=True)
class StmAnalysis:
    features: FeatureSequence
    stm: Contour
    smoothed: Contour


def analyse(signal: Signal, config: StmConfig = StmConfig()) -> StmAnalysis:
    peak = np.max(np.abs(signal.samples)) if len(signal) else 0.0
    if peak > 0:
        signal = Signal(signal.samples / peak, signal.sample_rate)
    feats = mfcc_39(signal, config.mfcc)
    stm = stm_contour(feats, config)
    return StmAnalysis(feats, stm, dsp.mean_smooth(stm, config.smooth_window))


def select_boundaries(smoothed: Contour, threshold_fraction: float = 0.12,
                      min_peak_value: float = 0.0) -> EventList:
    peaks = dsp.pick_peaks(smoothed, threshold_fraction)
    peaks = peaks[smoothed.values[peaks] >= min_peak_value]
    return EventList(smoothed.times[peaks], PHONE_BOUNDARY)


def detect_phone_boundaries(signal: Signal, config: StmConfig = StmConfig()) -> EventList:
    if signal.duration < 0.1:
        raise ValueError("signal shorter than 100 ms")
    return select_boundaries(analyse(signal, config).smoothed, config.threshold_fraction,
                             config.min_peak_value)
