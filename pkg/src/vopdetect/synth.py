"""Deterministic synthetic utterances with exact ground truth.

A "vowel" is a harmonic complex (8 harmonics, 1/k roll-off), a "fricative"
is seeded uniform noise, a "glide" is a sinusoidal chirp. Adjacent segments
are joined with 5 ms raised-cosine cross-fades centred on the boundary, so
boundary times are exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import (
    CorpusItem,
    PhoneSegment,
    Signal,
    derive_ground_truth_vops,
    serialize_phone_annotation,
    write_manifest,
    write_waveform,
)
from .events import EventList

SILENCE = "silence"
NOISE = "noise"
HARMONIC = "harmonic"
CHIRP = "chirp"

LABELS = {SILENCE: "h#", NOISE: "s", HARMONIC: "aa", CHIRP: "w"}
SYNTH_VOWELS = frozenset({LABELS[HARMONIC]})

CROSSFADE = 0.005
NUM_HARMONICS = 8


@dataclass(frozen=True)
class SegmentSpec:
    kind: str
    duration: float
    amplitude: float = 0.5
    f0: float = 120.0
    seed: int = 0
    # time constant (s) of an exponential amplitude decay; 0 keeps it flat
    decay: float = 0.0

    def __post_init__(self):
        if self.kind not in LABELS:
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if self.duration <= 0:
            raise ValueError("segment duration must be positive")
        if not 0 <= self.amplitude <= 1:
            raise ValueError("amplitude must lie in [0, 1]")


def _source(spec: SegmentSpec, t: np.ndarray, rate: int) -> np.ndarray:
    """Segment waveform over local times ``t`` (0 at the segment start)."""
    if spec.kind == SILENCE:
        return np.zeros_like(t)
    if spec.kind == NOISE:
        rng = np.random.default_rng(spec.seed)
        return spec.amplitude * rng.uniform(-1.0, 1.0, t.size)
    if spec.kind == HARMONIC:
        k = np.arange(1, NUM_HARMONICS + 1)
        k = k[k * spec.f0 < rate / 2]
        wave = np.sin(2 * np.pi * spec.f0 * np.outer(t, k)) @ (1.0 / k)
        wave *= spec.amplitude / np.max(np.abs(wave))
        if spec.decay > 0:
            wave *= np.exp(-np.clip(t, 0, None) / spec.decay)
        return wave
    # chirp: linear sweep f0 -> 3 f0 over the segment
    rate_hz = 2 * spec.f0 / spec.duration
    return spec.amplitude * np.sin(2 * np.pi * (spec.f0 * t + 0.5 * rate_hz * t**2))


def synthesize(specs: Sequence[SegmentSpec], rate: int = 16000,
               floor: float = 1e-3, floor_seed: int = 0):
    """Build ``(signal, ground_truth_vops, phone_segments)`` from segment specs.

    A VOP is placed wherever a harmonic segment follows a non-harmonic one
    (or opens the utterance). ``floor`` is the amplitude of seeded uniform
    background noise added everywhere (about -60 dBFS by default, like a
    quiet recording room); pass 0 for digital silence.
    """
    if not specs:
        raise ValueError("need at least one segment")
    bounds = np.round(np.cumsum([0.0] + [s.duration for s in specs]) * rate).astype(int)
    n = int(bounds[-1])
    half = int(round(CROSSFADE * rate / 2))
    x = np.zeros(n)
    segments = []
    for i, spec in enumerate(specs):
        start, end = int(bounds[i]), int(bounds[i + 1])
        lo = max(0, start - half) if i > 0 else 0
        hi = min(n, end + half) if i < len(specs) - 1 else n
        idx = np.arange(lo, hi)
        w = np.ones(idx.size)
        if i > 0 and half:
            ramp = idx < start + half
            w[ramp] = np.sin(0.5 * np.pi * (idx[ramp] - (start - half) + 0.5) / (2 * half)) ** 2
        if i < len(specs) - 1 and half:
            ramp = idx >= end - half
            w[ramp] = np.cos(0.5 * np.pi * (idx[ramp] - (end - half) + 0.5) / (2 * half)) ** 2
        x[lo:hi] += w * _source(spec, (idx - start) / rate, rate)
        segments.append(PhoneSegment(start, end, LABELS[spec.kind]))
    if floor > 0:
        x += floor * np.random.default_rng(floor_seed).uniform(-1.0, 1.0, n)
    truth = derive_ground_truth_vops(segments, SYNTH_VOWELS, rate)
    return Signal(x, rate), truth, segments


def random_utterance(rng: np.random.Generator, num_syllables: int | None = None):
    """A plausible consonant-vowel sequence drawn from ``rng``."""
    if num_syllables is None:
        num_syllables = int(rng.integers(2, 6))
    specs = [SegmentSpec(SILENCE, float(rng.uniform(0.15, 0.3)))]
    for _ in range(num_syllables):
        onset = rng.choice([SILENCE, NOISE, NOISE, CHIRP])
        if onset == NOISE:
            specs.append(SegmentSpec(NOISE, float(rng.uniform(0.06, 0.15)),
                                     float(rng.uniform(0.02, 0.08)),
                                     seed=int(rng.integers(2**31))))
        elif onset == CHIRP:
            specs.append(SegmentSpec(CHIRP, float(rng.uniform(0.05, 0.08)),
                                     float(rng.uniform(0.03, 0.06)),
                                     f0=float(rng.uniform(200, 400))))
        else:
            specs.append(SegmentSpec(SILENCE, float(rng.uniform(0.06, 0.12))))
        specs.append(SegmentSpec(HARMONIC, float(rng.uniform(0.15, 0.3)),
                                 float(rng.uniform(0.4, 0.9)),
                                 f0=float(rng.uniform(90, 220)),
                                 decay=float(rng.uniform(0.08, 0.15))))
    specs.append(SegmentSpec(SILENCE, float(rng.uniform(0.1, 0.2))))
    return specs


def random_corpus(num_items: int, seed: int = 0, rate: int = 16000):
    """``num_items`` synthetic utterances as ``(id, signal, truth, segments)``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(num_items):
        specs = random_utterance(rng)
        signal, truth, segments = synthesize(specs, rate, floor_seed=int(rng.integers(2**31)))
        out.append((f"synth{i:03d}", signal, truth, segments))
    return out


def write_corpus(directory, num_items: int, seed: int = 0, rate: int = 16000,
                 modes: Sequence[str] = ("read",)) -> str:
    """Persist a synthetic corpus as WAV + ``.PHN`` + ``manifest.csv``.

    Items cycle through ``modes``. Returns the manifest path.
    """
    os.makedirs(directory, exist_ok=True)
    items = []
    for i, (item_id, signal, _, segments) in enumerate(random_corpus(num_items, seed, rate)):
        wav = os.path.join(directory, f"{item_id}.wav")
        phn = os.path.join(directory, f"{item_id}.phn")
        write_waveform(wav, signal)
        with open(phn, "w", encoding="utf-8") as f:
            f.write(serialize_phone_annotation(segments))
        items.append(CorpusItem(item_id, wav, phn, modes[i % len(modes)]))
    manifest = os.path.join(directory, "manifest.csv")
    write_manifest(manifest, items)
    return manifest


def truth_of(segments, rate: int = 16000) -> EventList:
    return derive_ground_truth_vops(segments, SYNTH_VOWELS, rate)
