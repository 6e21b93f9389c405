"""Waveform and annotation loading.

Annotations use the TIMIT ``.PHN`` layout: one ``start end label`` line per
phone, with start/end given as sample indices. Manifests are CSV files with
an ``id,audio,annotation,mode`` header; relative paths are resolved against
the manifest's directory and ``annotation`` may be left blank.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.io.wavfile
import scipy.signal

from .events import GROUND_TRUTH, EventList

#: TIMIT monophthongs and diphthongs (incl. reduced and r-coloured vowels).
TIMIT_VOWELS = frozenset(
    "iy ih eh ey ae aa aw ay ah ao oy ow uh uw ux er ax ix axr ax-h".split()
)

MANIFEST_FIELDS = ("id", "audio", "annotation", "mode")


class CorpusError(ValueError):
    """Raised for malformed audio, annotation or manifest input."""


@dataclass(frozen=True)
class Signal:
    """Mono waveform with its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1:
            raise CorpusError("signal must be mono (1-D)")
        if not np.all(np.isfinite(samples)):
            raise CorpusError("signal contains NaN or Inf")
        if int(self.sample_rate) <= 0:
            raise CorpusError("sample_rate must be positive")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def scaled(self, gain: float) -> "Signal":
        return Signal(self.samples * gain, self.sample_rate)


@dataclass(frozen=True)
class PhoneSegment:
    start: int
    end: int
    label: str


@dataclass(frozen=True)
class CorpusItem:
    id: str
    audio_path: str
    annotation_path: Optional[str] = None
    mode_tag: str = "read"


def _to_float(data: np.ndarray) -> np.ndarray:
    if data.dtype == np.uint8:
        return (data.astype(float) - 128.0) / 128.0
    if np.issubdtype(data.dtype, np.integer):
        return data.astype(float) / float(-np.iinfo(data.dtype).min)
    if np.issubdtype(data.dtype, np.floating):
        return data.astype(float)
    raise CorpusError(f"unsupported sample encoding {data.dtype}")


def _read_wav(path) -> tuple[int, np.ndarray]:
    try:
        rate, data = scipy.io.wavfile.read(path)
    except FileNotFoundError:
        raise
    except (ValueError, OSError) as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    if data.ndim > 1:
        if data.shape[1] != 1:
            raise CorpusError(f"{path}: multi-channel input ({data.shape[1]} channels)")
        data = data[:, 0]
    return int(rate), _to_float(data)


def load_waveform(path, target_rate: int = 16000) -> Signal:
    """Read a mono WAV file, resample to ``target_rate`` and peak-normalise.

    Resampling uses a polyphase FIR (``scipy.signal.resample_poly``). An
    all-zero file is returned unscaled.
    """
    rate, samples = _read_wav(path)
    if rate != target_rate:
        g = gcd(int(rate), int(target_rate))
        samples = scipy.signal.resample_poly(samples, target_rate // g, rate // g)
    peak = np.max(np.abs(samples)) if samples.size else 0.0
    if peak > 0:
        samples = samples / peak
    return Signal(samples, target_rate)


def write_waveform(path, signal: Signal) -> None:
    """Write ``signal`` as 16-bit PCM, clipping to [-1, 1]."""
    pcm = np.round(np.clip(signal.samples, -1.0, 1.0) * 32767).astype(np.int16)
    scipy.io.wavfile.write(path, signal.sample_rate, pcm)


def parse_phone_annotation(text_body: str) -> list[PhoneSegment]:
    segments = []
    for lineno, line in enumerate(text_body.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 3:
            raise CorpusError(f"line {lineno}: expected 'start end label'")
        try:
            start, end = int(parts[0]), int(parts[1])
        except ValueError:
            raise CorpusError(f"line {lineno}: non-integer sample index") from None
        if start < 0 or start >= end:
            raise CorpusError(f"line {lineno}: start >= end ({start} {end})")
        segments.append(PhoneSegment(start, end, " ".join(parts[2:])))
    segments.sort(key=lambda s: s.start)
    for prev, cur in zip(segments, segments[1:]):
        if cur.start < prev.end:
            raise CorpusError(
                f"overlapping segments {prev.label!r} and {cur.label!r} at {cur.start}"
            )
    return segments


def serialize_phone_annotation(segments: Iterable[PhoneSegment]) -> str:
    return "".join(f"{s.start} {s.end} {s.label}\n" for s in segments)


def read_phone_annotation(path) -> list[PhoneSegment]:
    with open(path, encoding="utf-8") as f:
        return parse_phone_annotation(f.read())


def derive_ground_truth_vops(
    segments: Sequence[PhoneSegment],
    vowels: Iterable[str] = TIMIT_VOWELS,
    rate: int = 16000,
) -> EventList:
    """One VOP at the start of every run of consecutive vowel segments."""
    vowels = frozenset(vowels)
    times = []
    prev_is_vowel = False
    for seg in segments:
        is_vowel = seg.label in vowels
        if is_vowel and not prev_is_vowel:
            times.append(seg.start / rate)
        prev_is_vowel = is_vowel
    return EventList(np.array(times), GROUND_TRUTH)


def load_manifest(path, require_audio: bool = True) -> list[CorpusItem]:
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.normpath(os.path.join(base, p))

    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(row for row in f if row.strip() and not row.startswith("#"))
        if reader.fieldnames is None or not {"id", "audio"} <= set(reader.fieldnames):
            raise CorpusError(f"{path}: manifest needs at least 'id' and 'audio' columns")
        items = []
        seen = set()
        for row in reader:
            item_id = (row.get("id") or "").strip()
            if not item_id:
                raise CorpusError(f"{path}: row without id")
            if item_id in seen:
                raise CorpusError(f"{path}: duplicate id {item_id!r}")
            seen.add(item_id)
            audio = resolve(row["audio"].strip())
            if require_audio and not os.path.isfile(audio):
                raise CorpusError(f"{path}: audio for {item_id!r} not found: {audio}")
            ann = (row.get("annotation") or "").strip()
            mode = (row.get("mode") or "").strip() or "read"
            items.append(CorpusItem(item_id, audio, resolve(ann) if ann else None, mode))
    return items


def write_manifest(path, items: Sequence[CorpusItem]) -> None:
    base = os.path.dirname(os.path.abspath(path))

    def rel(p):
        return os.path.relpath(p, base) if p else ""

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MANIFEST_FIELDS)
        for item in items:
            writer.writerow(
                [item.id, rel(item.audio_path), rel(item.annotation_path), item.mode_tag]
            )


def load_item(item: CorpusItem, target_rate: int = 16000,
              vowels: Iterable[str] = TIMIT_VOWELS) -> tuple[Signal, EventList]:
    """Waveform plus ground-truth VOPs (annotation indices use the file's own rate)."""
    if item.annotation_path is None:
        raise CorpusError(f"item {item.id!r} has no annotation")
    native_rate, _ = _read_wav(item.audio_path)
    signal = load_waveform(item.audio_path, target_rate)
    segments = read_phone_annotation(item.annotation_path)
    return signal, derive_ground_truth_vops(segments, vowels, native_rate)
