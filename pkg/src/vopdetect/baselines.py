"""Reference VOP detectors used for comparison tables.

``detect_vops_comb_esm`` fuses three frame-level evidences (excitation
source, spectral peaks, modulation spectrum). ``detect_vops_se_gci`` tracks
500-2500 Hz energy in short windows around glottal closure instants found
by zero-frequency filtering. Both finish with the same enhancement chain:
smoothing, first-order difference, first-order Gaussian difference (FOGD)
and thresholded peak picking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.signal

from . import dsp
from .corpus import Signal
from .dsp import Contour
from .events import GCI, VOP_CANDIDATE, EventList
from .stm import mel_filterbank


@dataclass(frozen=True)
class BaselineConfig:
    lp_order: int = 10
    spectral_band: tuple = (500.0, 2500.0)
    gci_region_fraction: float = 0.30
    smooth_window: float = 0.050
    fogd_size: float = 0.100
    evidence_weights: tuple = (1.0, 1.0, 1.0)
    frame_len: float = 0.020
    hop: float = 0.010
    num_spectral_peaks: int = 10
    modulation_band: tuple = (4.0, 16.0)
    threshold_fraction: float = 0.15
    min_peak_gap: float = 0.050

    def __post_init__(self):
        lo, hi = self.spectral_band
        if not 0 < lo < hi:
            raise ValueError("spectral_band must satisfy 0 < low < high")
        if not 0 < self.gci_region_fraction <= 1:
            raise ValueError("gci_region_fraction must lie in (0, 1]")
        if len(self.evidence_weights) != 3:
            raise ValueError("evidence_weights needs three entries")
        object.__setattr__(self, "spectral_band", tuple(map(float, self.spectral_band)))
        object.__setattr__(self, "evidence_weights", tuple(map(float, self.evidence_weights)))
        object.__setattr__(self, "modulation_band", tuple(map(float, self.modulation_band)))

    def check_rate(self, rate: int) -> None:
        if self.spectral_band[1] >= rate / 2:
            raise ValueError("spectral_band upper edge must be below Nyquist")


def _normalised(signal: Signal) -> Signal:
    peak = np.max(np.abs(signal.samples)) if len(signal) else 0.0
    return Signal(signal.samples / peak, signal.sample_rate) if peak > 0 else signal


def _frame_contour(values: np.ndarray, cfg: BaselineConfig) -> Contour:
    return Contour(values, cfg.hop, cfg.frame_len / 2)


# -- excitation source ------------------------------------------------------

def lpc(frame: np.ndarray, order: int) -> np.ndarray:
    """Autocorrelation-method LP coefficients ``[1, a1, ..., ap]``."""
    w = frame * np.hamming(frame.size)
    r = np.correlate(w, w, mode="full")[w.size - 1:w.size + order]
    if r[0] <= 0:
        return np.concatenate(([1.0], np.zeros(order)))
    r = r.copy()
    r[0] *= 1.0 + 1e-9
    a = scipy.linalg.solve_toeplitz(r[:order], -r[1:order + 1])
    return np.concatenate(([1.0], a))


def lp_residual(signal: Signal, order: int = 10, frame_len: float = 0.020,
                hop: float = 0.010) -> np.ndarray:
    """Inverse-filter each hop-long block with the LP fit of its analysis frame."""
    x = signal.samples
    n = int(round(frame_len * signal.sample_rate))
    step = int(round(hop * signal.sample_rate))
    res = np.zeros_like(x)
    for start in range(0, x.size, step):
        centre = start + step // 2
        lo = max(0, min(centre - n // 2, x.size - n))
        a = lpc(x[lo:lo + n], order)
        seg_lo = max(0, start - order)
        seg = x[seg_lo:start + step]
        res[start:start + step] = scipy.signal.lfilter(a, [1.0], seg)[start - seg_lo:]
    return res


def hilbert_envelope(x: np.ndarray) -> np.ndarray:
    return np.abs(scipy.signal.hilbert(x))


def excitation_evidence(signal: Signal, cfg: BaselineConfig = BaselineConfig()) -> Contour:
    """Smoothed frame energy of the Hilbert envelope of the LP residual."""
    he = hilbert_envelope(lp_residual(signal, cfg.lp_order, cfg.frame_len, cfg.hop))
    frames = dsp.frame_signal(Signal(he, signal.sample_rate), cfg.frame_len, cfg.hop)
    energy = np.mean(frames**2, axis=1)
    return dsp.mean_smooth(_frame_contour(energy, cfg), cfg.smooth_window)


# -- spectral peaks ---------------------------------------------------------

def _power_spectra(signal: Signal, cfg: BaselineConfig, nfft: int = 512) -> np.ndarray:
    frames = dsp.frame_signal(signal, cfg.frame_len, cfg.hop)
    return np.abs(np.fft.rfft(frames * np.hamming(frames.shape[1]), n=nfft)) ** 2


def spectral_peaks_evidence(signal: Signal, cfg: BaselineConfig = BaselineConfig()) -> Contour:
    """Smoothed per-frame energy of the largest DFT peaks."""
    spectra = _power_spectra(signal, cfg)
    values = np.zeros(spectra.shape[0])
    for i, s in enumerate(spectra):
        idx, _ = scipy.signal.find_peaks(s)
        if idx.size:
            values[i] = np.sum(np.sort(s[idx])[-cfg.num_spectral_peaks:])
    return dsp.mean_smooth(_frame_contour(values, cfg), cfg.smooth_window)


# -- modulation spectrum ----------------------------------------------------

def modulation_spectrum_evidence(signal: Signal, cfg: BaselineConfig = BaselineConfig(),
                                 num_bands: int = 18) -> Contour:
    """Energy of the summed, cube-root-compressed subband envelopes in the
    modulation band (4-16 Hz by default)."""
    if signal.duration < 0.25:
        raise ValueError("modulation evidence needs at least 250 ms")
    spectra = _power_spectra(signal, cfg)
    fb = mel_filterbank(num_bands, 512, signal.sample_rate)
    envelopes = np.cbrt(spectra @ fb.T)
    lo, hi = cfg.modulation_band
    sos = scipy.signal.butter(2, [lo, hi], btype="bandpass", fs=1.0 / cfg.hop, output="sos")
    band = scipy.signal.sosfiltfilt(sos, envelopes.sum(axis=1))
    return dsp.mean_smooth(_frame_contour(band**2, cfg), cfg.smooth_window)


def _pick_positive(enhanced: Contour, cfg: BaselineConfig) -> EventList:
    """Positive peaks above the relative threshold, merged to the minimum gap."""
    positive = enhanced.with_values(np.clip(enhanced.values, 0.0, None))
    peaks = dsp.pick_peaks(positive, cfg.threshold_fraction, cfg.min_peak_gap)
    return EventList(positive.times[peaks], VOP_CANDIDATE)


def _rising(c: Contour) -> Contour:
    """Half-wave rectified first-order difference: only rising evidence counts."""
    d = dsp.first_order_diff(c)
    return d.with_values(np.clip(d.values, 0.0, None))


def _unit_max(c: Contour) -> Contour:
    m = np.max(c.values) if len(c) else 0.0
    return c.with_values(c.values / m) if m > 0 else c


def comb_esm_evidence(signal: Signal, cfg: BaselineConfig = BaselineConfig()) -> list:
    """The three evidence contours, each scaled to a maximum of 1."""
    signal = _normalised(signal)
    cfg.check_rate(signal.sample_rate)
    return [
        _unit_max(excitation_evidence(signal, cfg)),
        _unit_max(spectral_peaks_evidence(signal, cfg)),
        _unit_max(modulation_spectrum_evidence(signal, cfg)),
    ]


def detect_vops_comb_esm(signal: Signal, cfg: BaselineConfig = BaselineConfig()) -> EventList:
    evidences = comb_esm_evidence(signal, cfg)
    diffs = [_rising(e) for e in evidences]
    combined = sum(w * d.values for w, d in zip(cfg.evidence_weights, diffs))
    return _pick_positive(dsp.fogd_convolve(diffs[0].with_values(combined), cfg.fogd_size), cfg)


# -- glottal closure instants -----------------------------------------------

PITCH_RANGE = (0.0025, 0.015)  # seconds, i.e. roughly 66-400 Hz


def mean_pitch_period(x: np.ndarray, rate: int) -> float:
    """Utterance-level pitch period (s) from the autocorrelation peak."""
    lo, hi = (int(round(p * rate)) for p in PITCH_RANGE)
    if x.size <= hi or not np.any(x):
        return 0.008
    ac = scipy.signal.fftconvolve(x, x[::-1], mode="full")[x.size - 1:]
    return (lo + int(np.argmax(ac[lo:hi + 1]))) / rate


def _remove_trend(y: np.ndarray, width: int, passes: int = 3) -> np.ndarray:
    half = width // 2
    idx = np.arange(y.size)
    lo = np.clip(idx - half, 0, y.size)
    hi = np.clip(idx + half + 1, 0, y.size)
    for _ in range(passes):
        csum = np.concatenate(([0.0], np.cumsum(y)))
        y = y - (csum[hi] - csum[lo]) / (hi - lo)
    return y


def zero_frequency_signal(signal: Signal, period: float | None = None) -> np.ndarray:
    """Differenced input through two cascaded zero-frequency resonators,
    then local-mean trend removal over one pitch period."""
    x = signal.samples
    if period is None:
        period = mean_pitch_period(x, signal.sample_rate)
    dx = np.diff(x, prepend=x[:1])
    y = scipy.signal.lfilter([1.0], [1.0, -2.0, 1.0], dx)
    y = scipy.signal.lfilter([1.0], [1.0, -2.0, 1.0], y)
    width = int(round(period * signal.sample_rate)) | 1
    return _remove_trend(y, width)


def voicing_mask(signal: Signal, frame_len: float = 0.030, hop: float = 0.010,
                 min_corr: float = 0.5, min_energy_db: float = -30.0):
    """Per-frame voicing decision from the normalised autocorrelation peak
    within the pitch range. Returns ``(frame_centres, voiced)``."""
    rate = signal.sample_rate
    x = signal.samples
    n = int(round(frame_len * rate))
    if x.size < n:
        return np.zeros(0), np.zeros(0, dtype=bool)
    frames = dsp.frame_signal(signal, frame_len, hop)
    lo, hi = (int(round(p * rate)) for p in PITCH_RANGE)
    hi = min(hi, n - 1)
    energy = np.sum(frames**2, axis=1)
    voiced = np.zeros(frames.shape[0], dtype=bool)
    floor = np.max(energy) * 10 ** (min_energy_db / 10) if energy.size else 0.0
    for i, f in enumerate(frames):
        if energy[i] <= 0 or energy[i] < floor:
            continue
        f = f - f.mean()
        cs = np.concatenate(([0.0], np.cumsum(f**2)))
        best = 0.0
        ac = np.correlate(f, f, mode="full")[n - 1:]
        for lag in range(lo, hi + 1):
            # energies of the overlapping head and tail parts
            e1 = cs[n - lag]
            e2 = cs[n] - cs[lag]
            if e1 > 0 and e2 > 0:
                best = max(best, ac[lag] / np.sqrt(e1 * e2))
        voiced[i] = best >= min_corr
    centres = np.arange(frames.shape[0]) * hop + frame_len / 2
    return centres, voiced


def detect_gcis(signal: Signal) -> EventList:
    """Positive-going zero crossings of the zero-frequency filtered signal,
    restricted to voiced frames.

    Positive-going crossings mark closures for negative-going excitation, the
    usual polarity of glottal closures in speech recorded with positive
    pressure up. Crossings within 1.5 pitch periods of either end are
    dropped.
    """
    if signal.duration < 0.1:
        raise ValueError("signal shorter than 100 ms")
    signal = _normalised(signal)
    period = mean_pitch_period(signal.samples, signal.sample_rate)
    z = zero_frequency_signal(signal, period)
    idx = np.flatnonzero((z[:-1] < 0) & (z[1:] >= 0)) + 1
    # each of the three trend-removal passes is one-sided within half a
    # period of either end, so crossings there are biased
    edge = int(round(1.5 * period * signal.sample_rate))
    idx = idx[(idx >= edge) & (idx < z.size - edge)]
    centres, voiced = voicing_mask(signal)
    if idx.size == 0 or not voiced.any():
        return EventList.empty(GCI)
    t = idx / signal.sample_rate
    hop = centres[1] - centres[0] if centres.size > 1 else 0.01
    frame = np.clip(np.round((t - centres[0]) / hop).astype(int), 0, centres.size - 1)
    return EventList(t[voiced[frame]], GCI)


# -- SE-GCI -----------------------------------------------------------------

MAX_GCI_GAP = 0.020


def gci_band_energy(signal: Signal, gcis: EventList, cfg: BaselineConfig = BaselineConfig()):
    """Per-GCI mean band energy over ``gci_region_fraction`` of the cycle centred on it."""
    x, rate = signal.samples, signal.sample_rate
    t = gcis.times
    lo_hz, hi_hz = cfg.spectral_band
    values = np.zeros(t.size)
    for i, g in enumerate(t):
        if t.size == 1:
            cycle = 0.008
        elif i + 1 < t.size and t[i + 1] - g <= MAX_GCI_GAP:
            cycle = t[i + 1] - g
        else:
            cycle = g - t[i - 1] if i > 0 and g - t[i - 1] <= MAX_GCI_GAP else 0.008
        half = max(1, int(round(0.5 * cfg.gci_region_fraction * cycle * rate)))
        c = int(round(g * rate))
        seg = x[max(0, c - half):c + half + 1]
        if seg.size < 2:
            continue
        spec = np.abs(np.fft.rfft(seg * np.hanning(seg.size + 2)[1:-1], n=512)) ** 2
        freqs = np.fft.rfftfreq(512, 1.0 / rate)
        values[i] = np.sum(spec[(freqs >= lo_hz) & (freqs <= hi_hz)]) / seg.size
    return values


def se_gci_evidence(signal: Signal, gcis: EventList, cfg: BaselineConfig = BaselineConfig()) -> Contour:
    """GCI-anchored band energy interpolated onto the frame grid (zero between voiced runs)."""
    values = gci_band_energy(signal, gcis, cfg)
    n = int((len(signal) - int(round(cfg.frame_len * signal.sample_rate)))
            // int(round(cfg.hop * signal.sample_rate))) + 1
    grid = cfg.frame_len / 2 + cfg.hop * np.arange(max(n, 1))
    out = np.zeros(grid.size)
    t = gcis.times
    if t.size:
        breaks = np.flatnonzero(np.diff(t) > MAX_GCI_GAP) + 1
        for run_t, run_v in zip(np.split(t, breaks), np.split(values, breaks)):
            inside = (grid >= run_t[0]) & (grid <= run_t[-1])
            if run_t.size == 1:
                inside = np.abs(grid - run_t[0]) <= cfg.hop / 2
            out[inside] = np.interp(grid[inside], run_t, run_v)
    return Contour(out, cfg.hop, cfg.frame_len / 2)


def detect_vops_se_gci(signal: Signal, cfg: BaselineConfig = BaselineConfig()) -> EventList:
    signal = _normalised(signal)
    cfg.check_rate(signal.sample_rate)
    gcis = detect_gcis(signal)
    if len(gcis) == 0:
        return EventList.empty()
    evidence = dsp.mean_smooth(se_gci_evidence(signal, gcis, cfg), cfg.smooth_window)
    vops = _pick_positive(dsp.fogd_convolve(_rising(evidence), cfg.fogd_size), cfg)
    # only report onsets backed by nearby glottal activity
    g = gcis.times
    j = np.searchsorted(g, vops.times)
    near = np.array([
        min(abs(g[k] - t) for k in (jj - 1, jj) if 0 <= k < g.size) <= 0.050
        for t, jj in zip(vops.times, j)
    ], dtype=bool)
    return EventList(vops.times[near], VOP_CANDIDATE)
