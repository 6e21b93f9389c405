"""Stage 1: VOP candidates from the across-scale mean of CWT coefficients.

Scales are measured in samples. At scale ``q`` the wavelet row is

    C(p, q) = q**-0.5 * sum_t x[t] * psi((t - p) / q)

with a real mother wavelet ``psi`` (both supported wavelets are even, so the
correlation is computed as an FFT convolution). The rows are averaged into a
mean-signal, framed into an average-absolute-magnitude (AAM) contour,
smoothed and peak-picked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.signal

from . import dsp
from .corpus import Signal
from .dsp import Contour
from .events import VOP_CANDIDATE, EventList

MORLET = "real-morlet"
MEXICAN_HAT = "mexican-hat"

MORLET_W0 = 5.0
# truncation of the wavelet support, in units of the scale
SUPPORT = 8.0


def morlet(t: np.ndarray) -> np.ndarray:
    """Real Morlet: cosine-modulated Gaussian with the zero-mean correction."""
    return (np.cos(MORLET_W0 * t) - np.exp(-0.5 * MORLET_W0**2)) * np.exp(-0.5 * t**2)


def mexican_hat(t: np.ndarray) -> np.ndarray:
    return (1.0 - t**2) * np.exp(-0.5 * t**2)


WAVELETS = {MORLET: morlet, MEXICAN_HAT: mexican_hat}
# angular frequency (rad per unit t) at which each wavelet's spectrum peaks
CENTER_OMEGA = {MORLET: MORLET_W0, MEXICAN_HAT: np.sqrt(2.0)}


def scale_for_frequency(freq: float, rate: int, mother: str = MORLET) -> float:
    return CENTER_OMEGA[mother] * rate / (2 * np.pi * freq)


def frequency_for_scale(scale: float, rate: int, mother: str = MORLET) -> float:
    return CENTER_OMEGA[mother] * rate / (2 * np.pi * scale)


def default_scales(rate: int, mother: str = MORLET, num: int = 16,
                   fmin: float = 100.0, fmax: float = 1000.0) -> tuple:
    """``num`` log-spaced scales whose centre frequencies span fmin..fmax Hz."""
    lo = scale_for_frequency(fmax, rate, mother)
    hi = scale_for_frequency(fmin, rate, mother)
    return tuple(np.geomspace(lo, hi, num).tolist())


@dataclass(frozen=True)
class WaveletConfig:
    mother: str = MORLET
    scales: Optional[tuple] = None
    num_scales: int = 16
    fmin: float = 100.0
    fmax: float = 1000.0
    frame_len: float = 0.020
    hop: float = 0.010
    smooth_window: float = 0.040
    threshold_fraction: float = 0.15
    min_peak_gap: float = 0.050

    def __post_init__(self):
        if self.mother not in WAVELETS:
            raise ValueError(f"unknown mother wavelet {self.mother!r}")
        if self.scales is not None:
            s = np.asarray(self.scales, dtype=float)
            if s.size == 0 or np.any(s <= 0) or np.any(np.diff(s) <= 0):
                raise ValueError("scales must be non-empty, positive and strictly increasing")
            object.__setattr__(self, "scales", tuple(s.tolist()))
        if self.num_scales < 1 or not 0 < self.fmin < self.fmax:
            raise ValueError("need num_scales >= 1 and 0 < fmin < fmax")
        if not 0 < self.threshold_fraction < 1:
            raise ValueError("threshold_fraction must lie in (0, 1)")

    def resolved_scales(self, rate: int) -> tuple:
        if self.scales is not None:
            return self.scales
        return default_scales(rate, self.mother, self.num_scales, self.fmin, self.fmax)


@dataclass(frozen=True)
class CwtMatrix:
    coefficients: np.ndarray
    scales: tuple
    rate: int


@dataclass(frozen=True)
class CwtAnalysis:
    """Intermediate products of the stage-1 pipeline (for export and plots)."""

    mean_signal: np.ndarray
    aam: Contour
    smoothed: Contour
    peaks: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))


def wavelet_kernel(scale: float, mother: str = MORLET) -> np.ndarray:
    half = int(np.ceil(SUPPORT * scale))
    t = np.arange(-half, half + 1) / scale
    return WAVELETS[mother](t) / np.sqrt(scale)


def cwt(signal: Signal, config: WaveletConfig = WaveletConfig()) -> CwtMatrix:
    x = signal.samples
    if x.size == 0:
        raise ValueError("empty signal")
    scales = config.resolved_scales(signal.sample_rate)
    rows = np.empty((len(scales), x.size))
    for i, q in enumerate(scales):
        k = wavelet_kernel(q, config.mother)
        # zero-padded full convolution, then the centred slice
        full = scipy.signal.fftconvolve(x, k[::-1], mode="full")
        half = k.size // 2
        rows[i] = full[half:half + x.size]
    return CwtMatrix(rows, scales, signal.sample_rate)


def mean_signal(matrix: CwtMatrix) -> np.ndarray:
    coeffs = np.asarray(matrix.coefficients)
    if coeffs.size == 0:
        raise ValueError("empty CWT matrix")
    return coeffs.mean(axis=0)


def aam_contour(ms: np.ndarray, rate: int, frame_len: float = 0.020,
                hop: float = 0.010) -> Contour:
    """Per-frame mean of ``|mean-signal|``."""
    frames = dsp.frame_signal(Signal(ms, rate), frame_len, hop)
    return Contour(np.abs(frames).mean(axis=1), hop, frame_len / 2)


def _normalised(signal: Signal) -> Signal:
    # thresholds are all relative, so the input level is fixed up front
    peak = np.max(np.abs(signal.samples)) if len(signal) else 0.0
    return Signal(signal.samples / peak, signal.sample_rate) if peak > 0 else signal


def analyse(signal: Signal, config: WaveletConfig = WaveletConfig()) -> CwtAnalysis:
    """Run steps up to the smoothed AAM contour and its raw local peaks."""
    signal = _normalised(signal)
    ms = mean_signal(cwt(signal, config))
    aam = aam_contour(ms, signal.sample_rate, config.frame_len, config.hop)
    smoothed = dsp.mean_smooth(aam, config.smooth_window)
    return CwtAnalysis(ms, aam, smoothed, dsp.find_local_peaks(smoothed))


def select_vops(smoothed: Contour, threshold_fraction: float = 0.15,
                min_peak_gap: float = 0.050) -> EventList:
    peaks = dsp.pick_peaks(smoothed, threshold_fraction, min_peak_gap)
    return EventList(smoothed.times[peaks], VOP_CANDIDATE)


def detect_vops_cwt(signal: Signal, config: WaveletConfig = WaveletConfig()) -> EventList:
    if signal.duration < 0.1:
        raise ValueError("signal shorter than 100 ms")
    smoothed = analyse(signal, config).smoothed
    return select_vops(smoothed, config.threshold_fraction, config.min_peak_gap)
