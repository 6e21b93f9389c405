"""Scoring detected events against ground truth.

Metrics follow the usual VOP conventions:

* IR@tol -- percentage of actual events matched within ``tol``
* AD     -- mean |actual - detected| (ms) over pairs matched at the widest tolerance
* MR     -- 100 - IR at the widest tolerance
* SR     -- unmatched detections at the widest tolerance per 100 actual events

Counts are pooled over the whole corpus before the percentages are taken.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .events import EventList

DEFAULT_TOLERANCES = (0.010, 0.020, 0.030, 0.040)
REPORT_COLUMNS = ("method", "IR@10", "IR@20", "IR@30", "IR@40", "AD_ms", "MR", "SR")


@dataclass(frozen=True)
class MatchResult:
    pairs: list
    misses: list
    spurious: list
    tolerance: float

    @property
    def deviations(self) -> np.ndarray:
        return np.array([abs(a - d) for a, d in self.pairs])


def _times(events) -> np.ndarray:
    return np.asarray(events.times if isinstance(events, EventList) else events, dtype=float)


def match_events(actual, detected, tolerance: float) -> MatchResult:
    """One-to-one matching of detected to actual events within ``tolerance``.

    Among all valid matchings the one with the most pairs is chosen, and
    among those the one with the smallest total deviation.
    """
    a = _times(actual)
    d = _times(detected)
    pairs_idx: list[tuple[int, int]] = []
    if a.size and d.size:
        dist = np.abs(a[:, None] - d[None, :])
        valid = dist <= tolerance + 1e-12
        if valid.any():
            # a large reward per valid pair makes cardinality dominate deviation
            reward = tolerance * (min(a.size, d.size) + 1) + 1.0
            cost = np.where(valid, dist - reward, 0.0)
            rows, cols = linear_sum_assignment(cost)
            pairs_idx = sorted((int(r), int(c)) for r, c in zip(rows, cols) if valid[r, c])
    used_a = {r for r, _ in pairs_idx}
    used_d = {c for _, c in pairs_idx}
    return MatchResult(
        pairs=[(float(a[r]), float(d[c])) for r, c in pairs_idx],
        misses=[float(x) for i, x in enumerate(a) if i not in used_a],
        spurious=[float(x) for j, x in enumerate(d) if j not in used_d],
        tolerance=tolerance,
    )


@dataclass
class EvalReport:
    method: str
    ir_at: dict
    avg_deviation: float
    missed_rate: float
    spurious_rate: float
    utterance_count: int
    num_actual: int
    num_detected: int
    num_matched: int
    pooling: str = "corpus"
    extra: dict = field(default_factory=dict)

    def row(self) -> list:
        irs = [self.ir_at.get(ms, float("nan")) for ms in (10, 20, 30, 40)]
        return [self.method, *irs, self.avg_deviation, self.missed_rate, self.spurious_rate]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ir_at"] = {str(k): v for k, v in self.ir_at.items()}
        return d


def compute_report(pairs: Sequence[tuple], tolerances: Sequence[float] = DEFAULT_TOLERANCES,
                   method: str = "") -> EvalReport:
    """Pool ``(actual, detected)`` event pairs, one per utterance, into a report."""
    if not pairs:
        raise ValueError("cannot report on an empty corpus")
    tolerances = sorted(tolerances)
    widest = tolerances[-1]
    matched = {tol: 0 for tol in tolerances}
    deviations = []
    n_actual = n_detected = n_spurious = 0
    for actual, detected in pairs:
        a, d = _times(actual), _times(detected)
        n_actual += a.size
        n_detected += d.size
        for tol in tolerances:
            res = match_events(a, d, tol)
            matched[tol] += len(res.pairs)
            if tol == widest:
                deviations.extend(res.deviations.tolist())
                n_spurious += len(res.spurious)

    def pct(x):
        return 100.0 * x / n_actual if n_actual else 0.0

    ir = {int(round(tol * 1000)): pct(matched[tol]) for tol in tolerances}
    return EvalReport(
        method=method,
        ir_at=ir,
        avg_deviation=1000.0 * float(np.mean(deviations)) if deviations else 0.0,
        missed_rate=100.0 - ir[int(round(widest * 1000))] if n_actual else 0.0,
        spurious_rate=pct(n_spurious),
        utterance_count=len(pairs),
        num_actual=n_actual,
        num_detected=n_detected,
        num_matched=matched[widest],
    )


def run_detector(detector: Callable, signals: Sequence, threads: int = 1) -> list:
    """Apply ``detector`` to every signal; results keep input order."""
    if threads <= 1:
        return [detector(s) for s in signals]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(detector, signals))


def evaluate(detector: Callable, corpus: Sequence[tuple], method: str = "",
             tolerances: Sequence[float] = DEFAULT_TOLERANCES, threads: int = 1) -> EvalReport:
    """Score ``detector`` on ``(signal, actual_events)`` pairs."""
    detected = run_detector(detector, [s for s, _ in corpus], threads)
    return compute_report([(truth, det) for (_, truth), det in zip(corpus, detected)],
                          tolerances, method)


def threshold_sweep(corpus: Sequence[tuple], config=None,
                    fractions: Iterable[float] = (0.11, 0.13, 0.15, 0.17, 0.19),
                    tolerance: float = 0.040, threads: int = 1) -> list:
    """Miss and spurious rates of the CWT detector at several thresholds.

    Returns ``(fraction, miss_percent, spurious_percent)`` rows.
    """
    from .cwt import WaveletConfig, analyse, select_vops

    config = config or WaveletConfig()
    contours = run_detector(lambda s: analyse(s, config).smoothed,
                            [s for s, _ in corpus], threads)
    rows = []
    for frac in fractions:
        pairs = [(truth, select_vops(c, frac, config.min_peak_gap))
                 for (_, truth), c in zip(corpus, contours)]
        rep = compute_report(pairs, [tolerance])
        rows.append((float(frac), rep.missed_rate, rep.spurious_rate))
    return rows


def mode_split_report(corpus: Sequence[tuple], detectors: Mapping[str, Callable],
                      tolerances: Sequence[float] = DEFAULT_TOLERANCES,
                      threads: int = 1) -> dict:
    """One report per ``(method, mode)`` for ``(mode, signal, actual)`` items."""
    modes: dict[str, list] = {}
    for mode, signal, truth in corpus:
        modes.setdefault(mode, []).append((signal, truth))
    return {
        (name, mode): evaluate(det, items, name, tolerances, threads)
        for name, det in detectors.items()
        for mode, items in modes.items()
    }


def _fmt(v) -> str:
    return v if isinstance(v, str) else f"{v:.1f}"


def format_table(reports: Iterable[EvalReport], modes: Sequence[str] | None = None) -> str:
    """Aligned text table in the fixed column order (plus a mode column if given)."""
    header = list(REPORT_COLUMNS)
    rows = [[_fmt(v) for v in r.row()] for r in reports]
    if modes is not None:
        header = ["mode"] + header
        rows = [[m] + r for m, r in zip(modes, rows)]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def format_csv(reports: Iterable[EvalReport], modes: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(REPORT_COLUMNS)
    rows = [[r.method] + [f"{v:.4f}" for v in r.row()[1:]] for r in reports]
    if modes is not None:
        header = ["mode"] + header
        rows = [[m] + r for m, r in zip(modes, rows)]
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def format_json(reports: Iterable[EvalReport], modes: Sequence[str] | None = None) -> str:
    out = []
    for i, r in enumerate(reports):
        d = r.to_dict()
        if modes is not None:
            d["mode"] = modes[i]
        out.append(d)
    return json.dumps(out, indent=2, sort_keys=True) + "\n"
