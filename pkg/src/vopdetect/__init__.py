"""Vowel onset point detection.

The proposed detector runs in two stages: peaks of the average absolute
magnitude of the CWT mean-signal give VOP candidates, and each candidate is
then snapped back to the nearest preceding phone boundary found by the
spectral transition measure. Two baseline detectors and an evaluation
harness are included.
"""

from .baselines import BaselineConfig, detect_gcis, detect_vops_comb_esm, detect_vops_se_gci
from .config import METHODS, RunConfig, load_config, make_detector
from .corpus import (
    TIMIT_VOWELS,
    CorpusError,
    CorpusItem,
    PhoneSegment,
    Signal,
    derive_ground_truth_vops,
    load_item,
    load_manifest,
    load_waveform,
    parse_phone_annotation,
)
from .cwt import WaveletConfig, detect_vops_cwt
from .dsp import Contour
from .evaluation import EvalReport, compute_report, evaluate, match_events
from .events import EventList
from .fusion import FusionConfig, detect_vops, snap_vops
from .stm import MfccConfig, StmConfig, detect_phone_boundaries, stm_contour

__version__ = "0.1.0"

__all__ = [
    "BaselineConfig", "Contour", "CorpusError", "CorpusItem", "EvalReport", "EventList",
    "FusionConfig", "METHODS", "MfccConfig", "PhoneSegment", "RunConfig", "Signal",
    "StmConfig", "TIMIT_VOWELS", "WaveletConfig", "compute_report",
    "derive_ground_truth_vops", "detect_gcis", "detect_phone_boundaries", "detect_vops",
    "detect_vops_comb_esm", "detect_vops_cwt", "detect_vops_se_gci", "evaluate",
    "load_config", "load_item", "load_manifest", "load_waveform", "make_detector",
    "match_events", "parse_phone_annotation", "snap_vops", "stm_contour",
]
