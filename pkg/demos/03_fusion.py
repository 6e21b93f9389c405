"""Stage 2: snapping CWT candidates back to STM boundaries.

CWT peaks tend to sit a few tens of milliseconds after the true onset,
because the vowel energy builds up gradually. Each candidate is moved to the
latest phone boundary at or before it (within 60 ms). Candidates sharing a
boundary collapse into one.
"""

import numpy as np

from vopdetect.cwt import detect_vops_cwt
from vopdetect.events import PHONE_BOUNDARY, EventList
from vopdetect.fusion import FusionConfig, detect_vops, snap_vops
from vopdetect.stm import detect_phone_boundaries
from vopdetect.synth import random_utterance, synthesize

# the rule on hand-made lists
vops = EventList([1.000, 1.010, 2.000])
bounds = EventList([0.990, 1.020, 1.900], PHONE_BOUNDARY)
out = snap_vops(vops, bounds)
print("candidates", vops.times, "-> corrected", out.times, "from", out.source_times)
print("without dedupe:", snap_vops(vops, bounds, FusionConfig(dedupe=False)).times)

# and on a synthetic utterance
signal, truth, _ = synthesize(random_utterance(np.random.default_rng(2)))
candidates = detect_vops_cwt(signal)
boundaries = detect_phone_boundaries(signal)
corrected = detect_vops(signal)
print("\ntruth      ", np.round(truth.times, 3))
print("CWT        ", np.round(candidates.times, 3))
print("boundaries ", np.round(boundaries.times, 3))
print("corrected  ", np.round(corrected.times, 3))
