"""The two reference detectors.

COMB-ESM combines three evidences (LP-residual excitation, DFT peak energy
and 4-16 Hz envelope modulation). SE-GCI measures 500-2500 Hz energy around
glottal closure instants found by zero-frequency filtering. Both emphasise
rises in their evidence with a first-order Gaussian difference operator.
"""

import numpy as np

from vopdetect.baselines import (
    comb_esm_evidence,
    detect_gcis,
    detect_vops_comb_esm,
    detect_vops_se_gci,
)
from vopdetect.synth import SegmentSpec, synthesize

signal, truth, _ = synthesize([
    SegmentSpec("silence", 0.15),
    SegmentSpec("noise", 0.2, amplitude=0.08, seed=11),
    SegmentSpec("harmonic", 0.3, amplitude=0.6, f0=130.0, decay=0.1),
    SegmentSpec("silence", 0.1),
])
print(f"true VOP at {truth.times[0]:.3f} s")

for name, ev in zip(("excitation", "spectral peaks", "modulation"), comb_esm_evidence(signal)):
    print(f"  {name:15s} evidence peaks at {ev.times[np.argmax(ev.values)]:.3f} s")

gcis = detect_gcis(signal)
print(f"{len(gcis)} GCIs, median spacing {1000 * np.median(np.diff(gcis.times)):.2f} ms "
      f"(f0 130 Hz -> {1000 / 130:.2f} ms)")

print("COMB-ESM:", np.round(detect_vops_comb_esm(signal).times, 3))
print("SE-GCI:  ", np.round(detect_vops_se_gci(signal).times, 3))
