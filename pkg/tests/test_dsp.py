import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vopdetect import dsp
from vopdetect.corpus import Signal
from vopdetect.dsp import Contour

HOP = 0.01
RATE = 16000


def _c(values, hop=HOP):
    return Contour(np.asarray(values, dtype=float), hop)


# -- framing -----------------------------------------------------------------

def test_frame_count_one_second():
    frames = dsp.frame_signal(Signal(np.zeros(16000), RATE), 0.02, 0.01)
    assert frames.shape == ((16000 - 320) // 160 + 1, 320) == (99, 320)


def test_single_frame_when_frame_equals_length():
    frames = dsp.frame_signal(Signal(np.arange(320.0), RATE), 0.02, 0.02)
    assert frames.shape == (1, 320)


def test_too_short():
    with pytest.raises(ValueError, match="too short"):
        dsp.frame_signal(Signal(np.zeros(100), RATE), 0.02, 0.01)


def test_frames_per_is_odd():
    assert dsp.frames_per(0.04, 0.01) == 5
    assert dsp.frames_per(0.02, 0.01) == 3
    assert dsp.frames_per(0.01, 0.01) == 1


# -- smoothing ---------------------------------------------------------------

def test_smooth_constant():
    out = dsp.mean_smooth(_c(np.full(20, 3.5)), 0.05)
    np.testing.assert_allclose(out.values, 3.5)


def test_smooth_window_equal_hop_is_identity():
    x = np.random.default_rng(0).normal(size=30)
    np.testing.assert_allclose(dsp.mean_smooth(_c(x), HOP).values, x)


def test_smooth_impulse():
    out = dsp.mean_smooth(_c([0, 0, 1, 0, 0]), 0.03)
    np.testing.assert_allclose(out.values, [0, 1 / 3, 1 / 3, 1 / 3, 0])


def test_smooth_edges_use_available_frames():
    out = dsp.mean_smooth(_c([3, 0, 0, 0, 0]), 0.03)
    assert out.values[0] == pytest.approx(1.5)


def test_smooth_rejects_short_window():
    with pytest.raises(ValueError):
        dsp.mean_smooth(_c([1, 2, 3]), 0.005)


def test_smooth_keeps_hop_and_origin():
    c = Contour(np.arange(10.0), 0.02, 0.013)
    out = dsp.mean_smooth(c, 0.06)
    assert (out.hop, out.origin) == (0.02, 0.013)


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=40), st.integers(1, 6))
def test_smooth_conserves_mass_of_padded_input(body, half):
    window = (2 * half + 1) * HOP
    # edge windows shrink, so keep the mass at least 2*half frames from either end
    x = np.concatenate([np.zeros(2 * half), body, np.zeros(2 * half)])
    out = dsp.mean_smooth(_c(x), window)
    assert out.values.sum() == pytest.approx(x.sum(), abs=1e-9)


# -- peaks -------------------------------------------------------------------

def _peak_oracle(v):
    """Collapse equal runs, then keep runs strictly above both neighbours."""
    out = []
    i = 0
    n = len(v)
    while i < n:
        j = i
        while j + 1 < n and v[j + 1] == v[i]:
            j += 1
        if i > 0 and j < n - 1 and v[i - 1] < v[i] and v[j + 1] < v[i]:
            out.append(i)
        i = j + 1
    return out


def test_local_peaks_simple():
    assert list(dsp.find_local_peaks(_c([0, 1, 0, 2, 0]))) == [1, 3]


def test_local_peaks_monotone():
    assert list(dsp.find_local_peaks(_c(np.arange(10.0)))) == []


def test_local_peaks_plateau_leftmost():
    assert list(dsp.find_local_peaks(_c([0, 2, 2, 0]))) == [1]


@given(st.lists(st.integers(0, 4), min_size=3, max_size=40))
def test_local_peaks_match_oracle(values):
    assert list(dsp.find_local_peaks(_c(values))) == _peak_oracle(values)


def test_threshold_example():
    c = _c([0, 10, 0, 1, 0])
    kept = dsp.threshold_peaks(np.array([1, 3]), c, 0.15)
    assert list(kept) == [1]


def test_threshold_tiny_fraction_keeps_all():
    c = _c([0, 10, 0, 1, 0])
    assert list(dsp.threshold_peaks(np.array([1, 3]), c, 1e-9)) == [1, 3]


def test_threshold_equal_values_all_kept():
    c = _c([0, 2, 0, 2, 0, 2, 0])
    assert list(dsp.threshold_peaks(np.array([1, 3, 5]), c, 0.99)) == [1, 3, 5]


@given(st.lists(st.floats(0, 50), min_size=3, max_size=40), st.floats(0.01, 0.99))
def test_threshold_property(values, frac):
    c = _c(values)
    kept = dsp.threshold_peaks(dsp.find_local_peaks(c), c, frac)
    assert np.all(c.values[kept] >= frac * c.values.max())


def _merge_oracle(peaks, values, gap_frames):
    """Repeatedly remove the smaller of the first too-close consecutive pair."""
    peaks = list(peaks)
    while True:
        for k in range(len(peaks) - 1):
            a, b = peaks[k], peaks[k + 1]
            if b - a < gap_frames:
                drop = b if values[a] >= values[b] else a
                peaks.remove(drop)
                break
        else:
            return peaks


def test_merge_keeps_larger():
    # 30 ms apart, values 2 and 5
    c = _c([0, 2, 0, 0, 5, 0])
    assert list(dsp.merge_close_peaks(np.array([1, 4]), c, 0.05)) == [4]


def test_merge_far_apart_kept():
    v = np.zeros(10)
    v[[1, 7]] = [1, 2]
    assert list(dsp.merge_close_peaks(np.array([1, 7]), _c(v), 0.05)) == [1, 7]


def test_merge_three_peaks():
    v = np.zeros(10)
    v[[0, 3, 6]] = [1, 3, 2]
    assert list(dsp.merge_close_peaks(np.array([0, 3, 6]), _c(v), 0.05)) == [3]


def test_merge_tie_drops_right():
    v = np.zeros(10)
    v[[2, 4]] = [1, 1]
    assert list(dsp.merge_close_peaks(np.array([2, 4]), _c(v), 0.05)) == [2]


@given(st.lists(st.integers(0, 80), min_size=0, max_size=15, unique=True),
       st.lists(st.integers(0, 5), min_size=81, max_size=81),
       st.integers(1, 8))
def test_merge_matches_oracle(peaks, values, gap_frames):
    peaks = np.array(sorted(peaks), dtype=int)
    c = _c(np.array(values, dtype=float))
    got = dsp.merge_close_peaks(peaks, c, gap_frames * HOP)
    assert list(got) == _merge_oracle(peaks, values, gap_frames)
    assert np.all(np.diff(got) >= gap_frames)


# -- FOGD and differences ----------------------------------------------------

def test_fogd_kernel_sums_to_zero_and_is_antisymmetric():
    k = dsp.fogd_kernel(0.1, HOP)
    assert abs(k.sum()) <= 1e-12
    np.testing.assert_array_equal(k, -k[::-1])


def test_fogd_constant_is_zero():
    out = dsp.fogd_convolve(_c(np.full(40, 2.0)), 0.1)
    np.testing.assert_allclose(out.values, 0.0, atol=1e-12)


def test_fogd_step_matches_direct_sum():
    x = np.r_[np.zeros(50), np.ones(50)]
    k = dsp.fogd_kernel(0.1, HOP)
    h = len(k) // 2
    direct = np.array([
        sum(k[m] * x[min(max(n - (m - h), 0), len(x) - 1)] for m in range(len(k)))
        for n in range(len(x))
    ])
    out = dsp.fogd_convolve(_c(x), 0.1).values
    np.testing.assert_allclose(out, direct, atol=1e-12)
    # a single positive lobe centred on the step
    assert np.all(out >= -1e-12)
    assert np.argmax(out) in (49, 50)
    np.testing.assert_allclose(out[:50], out[50:][::-1], atol=1e-12)


def test_first_order_diff_examples():
    np.testing.assert_allclose(dsp.first_order_diff(_c([1, 1, 1])).values, [0, 0])
    np.testing.assert_allclose(dsp.first_order_diff(_c([0, 2, 1])).values, [2, -1])
    np.testing.assert_allclose(dsp.first_order_diff(_c(0.7 * np.arange(9))).values, 0.7)


def test_first_order_diff_single_frame():
    with pytest.raises(ValueError):
        dsp.first_order_diff(_c([1.0]))


@pytest.mark.parametrize("op", [
    lambda c: dsp.mean_smooth(c, 0.05),
    dsp.first_order_diff,
    lambda c: dsp.fogd_convolve(c, 0.1),
])
def test_kernels_are_linear(op, rng):
    x = rng.normal(size=64)
    a = 3.7
    np.testing.assert_allclose(op(_c(a * x)).values, a * op(_c(x)).values, rtol=1e-9, atol=1e-12)


@given(st.lists(st.floats(0, 1), min_size=3, max_size=120), st.floats(0.05, 0.5))
def test_pick_peaks_properties(values, frac):
    c = _c(values)
    picked = dsp.pick_peaks(c, frac, 0.05)
    if len(picked):
        assert np.all(np.diff(picked) * HOP >= 0.05 - 1e-9)
        assert np.all(c.values[picked] >= frac * c.values.max())
