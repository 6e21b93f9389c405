"""Frame-level numeric kernels shared by the detectors.

Peak sets are plain sorted ``int`` arrays of frame indices into a
:class:`Contour`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.ndimage

from .corpus import Signal

_EPS = 1e-9


@dataclass(frozen=True)
class Contour:
    """Frame-rate sequence; frame ``i`` is centred at ``origin + i * hop`` seconds."""

    values: np.ndarray
    hop: float
    origin: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if self.hop <= 0:
            raise ValueError("hop must be positive")
        if not np.all(np.isfinite(values)):
            raise ValueError("contour values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def times(self) -> np.ndarray:
        return self.origin + self.hop * np.arange(self.values.size)

    def with_values(self, values) -> "Contour":
        return replace(self, values=values)


def frames_per(duration: float, hop: float) -> int:
    """Odd frame count spanning ``duration`` (rounded, then bumped up to odd)."""
    n = max(1, int(round(duration / hop)))
    return n if n % 2 else n + 1


def frame_signal(signal: Signal, frame_len: float, hop: float) -> np.ndarray:
    """Split into overlapping frames, dropping the trailing partial frame.

    Returns an array of shape ``(num_frames, frame_samples)``.
    """
    if hop <= 0 or frame_len < hop:
        raise ValueError("need frame_len >= hop > 0")
    n = int(round(frame_len * signal.sample_rate))
    step = int(round(hop * signal.sample_rate))
    x = signal.samples
    if x.size < n:
        raise ValueError(
            f"signal too short: {x.size} samples < one {n}-sample frame"
        )
    count = (x.size - n) // step + 1
    return np.lib.stride_tricks.sliding_window_view(x, n)[::step][:count]


def mean_smooth(contour: Contour, window: float) -> Contour:
    """Centred moving average; edge frames average only the frames available."""
    if window < contour.hop - _EPS:
        raise ValueError("smoothing window shorter than the contour hop")
    width = frames_per(window, contour.hop)
    v = contour.values
    if width == 1 or v.size == 0:
        return contour
    half = width // 2
    csum = np.concatenate(([0.0], np.cumsum(v)))
    idx = np.arange(v.size)
    lo = np.clip(idx - half, 0, v.size)
    hi = np.clip(idx + half + 1, 0, v.size)
    return contour.with_values((csum[hi] - csum[lo]) / (hi - lo))


def find_local_peaks(contour: Contour) -> np.ndarray:
    """Strict local maxima; a flat-topped maximum reports its leftmost index."""
    v = contour.values
    peaks = []
    i = 1
    n = v.size
    while i < n - 1:
        if v[i] > v[i - 1]:
            j = i
            while j + 1 < n and v[j + 1] == v[i]:
                j += 1
            if j + 1 < n and v[j + 1] < v[i]:
                peaks.append(i)
            i = j + 1
        else:
            i += 1
    return np.array(peaks, dtype=int)


def threshold_peaks(peaks: np.ndarray, contour: Contour, fraction: float) -> np.ndarray:
    """Keep peaks whose value is at least ``fraction`` of the contour maximum."""
    if not 0 < fraction < 1:
        raise ValueError("threshold fraction must lie in (0, 1)")
    peaks = np.asarray(peaks, dtype=int)
    if peaks.size == 0:
        return peaks
    level = fraction * np.max(contour.values)
    return peaks[contour.values[peaks] >= level]


def merge_close_peaks(peaks: np.ndarray, contour: Contour, min_gap: float) -> np.ndarray:
    """Drop the smaller of any two consecutive peaks closer than ``min_gap`` seconds.

    Violations are resolved left to right; on equal values the right-hand peak
    goes.
    """
    if min_gap <= 0:
        raise ValueError("min_gap must be positive")
    gap_frames = min_gap / contour.hop - _EPS
    v = contour.values
    kept: list[int] = []
    for p in np.asarray(peaks, dtype=int):
        if kept and p - kept[-1] < gap_frames:
            if v[p] > v[kept[-1]]:
                kept[-1] = p
            continue
        kept.append(int(p))
    return np.array(kept, dtype=int)


def pick_peaks(contour: Contour, fraction: float, min_gap: float | None = None) -> np.ndarray:
    """Local peaks, then threshold, then (optionally) close-peak merging."""
    if contour.values.size < 3 or not np.max(contour.values) > 0:
        return np.zeros(0, dtype=int)
    peaks = threshold_peaks(find_local_peaks(contour), contour, fraction)
    if min_gap is not None:
        peaks = merge_close_peaks(peaks, contour, min_gap)
    return peaks


def fogd_kernel(op_size: float, hop: float) -> np.ndarray:
    """First derivative of a Gaussian, sigma = op_size / 6, sampled at ``hop``."""
    n = frames_per(op_size, hop)
    half = n // 2
    sigma = op_size / 6.0
    t = np.arange(-half, half + 1) * hop
    g = -t / sigma**2 * np.exp(-0.5 * (t / sigma) ** 2)
    g /= np.sum(np.abs(g))
    # exact antisymmetry so the kernel sums to zero
    g[: half] = -g[: half:-1]
    g[half] = 0.0
    return g


def fogd_convolve(contour: Contour, op_size: float) -> Contour:
    """Convolve with :func:`fogd_kernel`; edges are padded by replication.

    A rising edge in the input gives a positive lobe in the output.
    """
    if op_size < 2 * contour.hop - _EPS:
        raise ValueError("FOGD operator must span at least two frames")
    k = fogd_kernel(op_size, contour.hop)
    out = scipy.ndimage.convolve1d(contour.values, k, mode="nearest")
    return contour.with_values(out)


def first_order_diff(contour: Contour) -> Contour:
    """``out[i] = v[i+1] - v[i]``; the result sits half a hop later."""
    v = contour.values
    if v.size < 2:
        raise ValueError("first-order difference needs at least two frames")
    return Contour(np.diff(v), contour.hop, contour.origin + contour.hop / 2)
