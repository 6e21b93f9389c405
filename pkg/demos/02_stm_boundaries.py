"""Spectral transition measure and phone boundaries.

39-dimensional MFCC features (static, delta, delta-delta) are differentiated
with a 5-frame regression; the mean squared slope peaks where the spectrum
changes. Two tones joined at 0.3 s give exactly one boundary.
"""

import numpy as np

from vopdetect.corpus import Signal
from vopdetect.stm import analyse, detect_phone_boundaries, mfcc_39

RATE = 16000
t = np.arange(int(0.3 * RATE)) / RATE
x = np.r_[0.5 * np.sin(2 * np.pi * 300 * t), 0.5 * np.sin(2 * np.pi * 1500 * t)]
x += 1e-3 * np.random.default_rng(0).uniform(-1, 1, x.size)
signal = Signal(x, RATE)

feats = mfcc_39(signal)
print("features:", feats.frames.shape, "(frames x 39)")

a = analyse(signal)
k = int(np.argmax(a.smoothed.values))
print(f"smoothed STM peaks at {a.smoothed.times[k]:.3f} s with value {a.smoothed.values[k]:.2f}")
print(f"median STM away from the junction: {np.median(a.stm.values):.4f}")

print("boundaries:", np.round(detect_phone_boundaries(signal).times, 3))

tone = Signal(0.5 * np.sin(2 * np.pi * 220 * np.arange(RATE) / RATE)
              + 1e-3 * np.random.default_rng(1).uniform(-1, 1, RATE), RATE)
print("boundaries in a stationary tone:", detect_phone_boundaries(tone).times)
