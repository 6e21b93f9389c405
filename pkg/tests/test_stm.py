import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vopdetect.corpus import Signal
from vopdetect.stm import (
    FeatureSequence,
    MfccConfig,
    StmConfig,
    analyse,
    detect_phone_boundaries,
    hz_to_mel,
    mel_filterbank,
    mel_to_hz,
    mfcc_39,
    regression_deltas,
    regression_rate,
    stm_contour,
)

RATE = 16000
I = 2


def lstsq_slopes(frames, half_width=I):
    """Least-squares slope of each track over a (2I+1)-frame window, via the
    normal equations of y = a + b*n with replicated edge frames."""
    n = np.arange(-half_width, half_width + 1)
    design = np.column_stack([np.ones_like(n), n]).astype(float)
    gram_inv = np.linalg.inv(design.T @ design)
    last = frames.shape[0] - 1
    out = np.empty_like(frames)
    for g in range(frames.shape[0]):
        idx = np.clip(g + n, 0, last)
        coef = gram_inv @ design.T @ frames[idx]
        out[g] = coef[1]
    return out


def _fs(frames):
    return FeatureSequence(np.asarray(frames, dtype=float))


def _tone(freq, dur, amp=0.5, phase=0.0):
    t = np.arange(int(round(dur * RATE))) / RATE
    return amp * np.sin(2 * np.pi * freq * t + phase)


def _with_floor(x, seed=0):
    return x + 1e-3 * np.random.default_rng(seed).uniform(-1, 1, x.size)


# -- mel helpers -------------------------------------------------------------

def test_mel_round_trip():
    f = np.array([0.0, 100.0, 1000.0, 7999.0])
    np.testing.assert_allclose(mel_to_hz(hz_to_mel(f)), f)
    assert hz_to_mel(1000.0) == pytest.approx(1000.0, abs=0.1)


def test_filterbank_shape_and_coverage():
    fb = mel_filterbank(26, 512, RATE)
    assert fb.shape == (26, 257)
    assert np.all(fb >= 0)
    assert np.all(fb.max(axis=1) > 0)


# -- MFCC --------------------------------------------------------------------

def test_frame_count_one_second():
    feats = mfcc_39(Signal(_tone(440, 1.0), RATE))
    assert feats.frames.shape == ((16000 - 400) // 160 + 1, 39) == (98, 39)
    assert feats.hop == 0.01 and feats.frame_len == 0.025


def test_silence_constant_static_zero_deltas():
    feats = mfcc_39(Signal(np.zeros(RATE // 2), RATE)).frames
    np.testing.assert_allclose(feats[:, :13], np.broadcast_to(feats[0, :13], (len(feats), 13)), atol=1e-9)
    np.testing.assert_allclose(feats[:, 13:], 0.0, atol=1e-9)


def test_too_short_signal():
    with pytest.raises(ValueError):
        mfcc_39(Signal(np.zeros(300), RATE))


def test_delta_of_ramp_is_slope():
    c = 0.7
    track = c * np.arange(20.0)
    d = regression_deltas(track, I)
    np.testing.assert_allclose(d[I:-I], c)


# -- regression rate ---------------------------------------------------------

def test_rate_constant_track():
    f = _fs(np.full((9, 39), 4.2))
    assert regression_rate(f, 4, 0, I) == 0.0


def test_rate_ramp():
    frames = np.zeros((9, 39))
    frames[:, 5] = 3 * np.arange(9)
    assert regression_rate(_fs(frames), 4, 5, I) == pytest.approx(3.0)


def test_rate_symmetric_bump():
    frames = np.zeros((5, 39))
    frames[:, 0] = [0, 0, 1, 0, 0]
    assert regression_rate(_fs(frames), 2, 0, I) == 0.0


@given(st.floats(-50, 50), st.floats(-5, 5))
def test_rate_exact_on_affine_tracks(a, b):
    frames = np.zeros((11, 39))
    frames[:, 7] = a + b * np.arange(11)
    assert regression_rate(_fs(frames), 5, 7, I) == pytest.approx(b, abs=1e-9)


# -- STM contour -------------------------------------------------------------

def test_stm_constant_features():
    np.testing.assert_array_equal(stm_contour(_fs(np.ones((10, 39)))).values, 0.0)


def test_stm_ramps_give_square_of_slope():
    c = 0.3
    frames = np.tile(c * np.arange(12.0)[:, None], (1, 39))
    values = stm_contour(_fs(frames)).values
    np.testing.assert_allclose(values[I:-I], c * c)


def test_stm_matches_lstsq_oracle(rng):
    frames = rng.normal(size=(10, 39))
    oracle = np.mean(lstsq_slopes(frames) ** 2, axis=1)
    np.testing.assert_allclose(stm_contour(_fs(frames)).values, oracle, rtol=0, atol=1e-9)


def test_stm_matches_regression_rate(rng):
    f = _fs(rng.normal(size=(8, 39)))
    expected = [np.mean([regression_rate(f, g, i, I) ** 2 for i in range(39)]) for g in range(8)]
    np.testing.assert_allclose(stm_contour(f).values, expected, atol=1e-12)


def test_stm_too_few_frames():
    with pytest.raises(ValueError):
        stm_contour(_fs(np.zeros((4, 39))))


def test_stm_keeps_hop_and_origin():
    f = FeatureSequence(np.zeros((6, 39)), hop=0.01, frame_len=0.025, origin=0.0125)
    c = stm_contour(f)
    assert (c.hop, c.origin) == (0.01, 0.0125)


@given(st.integers(0, 38), st.floats(-100, 100))
def test_stm_translation_invariant(i, offset):
    frames = np.random.default_rng(i).normal(size=(12, 39))
    shifted = frames.copy()
    shifted[:, i] += offset
    a = stm_contour(_fs(frames)).values
    b = stm_contour(_fs(shifted)).values
    np.testing.assert_allclose(a, b, atol=1e-9)
    assert np.all(a >= 0)


# -- boundaries --------------------------------------------------------------

def test_stationary_tone_near_empty():
    events = detect_phone_boundaries(Signal(_with_floor(_tone(220, 0.8)), RATE))
    assert len(events) <= 1


def test_two_tones_single_boundary():
    x = _with_floor(np.concatenate([_tone(300, 0.3), _tone(1500, 0.3)]))
    events = detect_phone_boundaries(Signal(x, RATE))
    assert len(events) == 1
    assert abs(events.times[0] - 0.3) <= 0.03


@pytest.mark.parametrize("k", [1, 3, 7])
def test_shift_covariance(k):
    def boundary(first_len):
        x = _with_floor(np.concatenate([_tone(300, first_len), _tone(1500, 0.3)]))
        return detect_phone_boundaries(Signal(x, RATE)).times

    base = boundary(0.3)
    moved = boundary(0.3 + k * 0.01)
    assert len(base) == len(moved) == 1
    assert abs((moved[0] - base[0]) - k * 0.01) <= 0.01 + 1e-9


def test_boundaries_gain_invariant():
    x = _with_floor(np.concatenate([_tone(300, 0.3), _tone(1500, 0.3)]))
    s = Signal(x, RATE)
    assert detect_phone_boundaries(s) == detect_phone_boundaries(s.scaled(0.25))


def test_analyse_is_consistent_with_detector():
    x = _with_floor(np.concatenate([_tone(300, 0.3), _tone(1500, 0.3)]))
    a = analyse(Signal(x, RATE))
    assert len(a.stm) == len(a.smoothed) == len(a.features)


def test_config_validation():
    with pytest.raises(ValueError):
        StmConfig(regression_half_width=0)
    with pytest.raises(ValueError):
        StmConfig(threshold_fraction=0.0)
    with pytest.raises(ValueError):
        MfccConfig(num_ceps=30, num_filters=26)
