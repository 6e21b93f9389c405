"""``vopdetect`` command line.

Exit status: 0 on success, 1 on I/O or data errors, 2 on usage or config
errors.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import cwt, evaluation, export, stm
from .config import METHODS, ConfigError, dump_config, load_config, make_detector
from .corpus import TIMIT_VOWELS, CorpusError, load_item, load_manifest, load_waveform
from .fusion import snap_vops

EXIT_IO = 1
EXIT_USAGE = 2


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _events_text(events, fmt: str) -> str:
    return export.events_json(events) if fmt == "json" else export.events_csv(events)


def _parse_list(text: str, cast=float) -> list:
    try:
        return [cast(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse list {text!r}") from None


def cmd_detect(args) -> int:
    cfg = load_config(args.config)
    signal = load_waveform(args.audio, cfg.sample_rate)
    events = make_detector(args.method, cfg)(signal)
    _write(_events_text(events, args.format), args.out)
    return 0


def cmd_boundaries(args) -> int:
    cfg = load_config(args.config)
    signal = load_waveform(args.audio, cfg.sample_rate)
    _write(_events_text(stm.detect_phone_boundaries(signal, cfg.stm), args.format), args.out)
    return 0


def _load_corpus(manifest: str, cfg, vowels):
    items = load_manifest(manifest)
    missing = [it.id for it in items if it.annotation_path is None]
    if missing:
        raise CorpusError(f"items without annotation: {', '.join(missing)}")
    return [(it.mode_tag, *load_item(it, cfg.sample_rate, vowels)) for it in items]


def _vowels(args):
    if args.vowels is None:
        return TIMIT_VOWELS
    return frozenset(_parse_list(args.vowels, str))


def cmd_eval(args) -> int:
    cfg = load_config(args.config)
    tolerances = cfg.tolerances
    if args.tolerances:
        tolerances = tuple(ms / 1000.0 for ms in _parse_list(args.tolerances))
    methods = list(METHODS) if "all" in args.method else args.method
    corpus = _load_corpus(args.manifest, cfg, _vowels(args))
    detectors = {m: make_detector(m, cfg) for m in methods}
    modes = sorted({mode for mode, _, _ in corpus})
    if len(modes) > 1:
        split = evaluation.mode_split_report(corpus, detectors, tolerances, args.threads)
        keys = [(m, mode) for mode in modes for m in methods]
        reports = [split[k] for k in keys]
        mode_col = [mode for _, mode in keys]
    else:
        pairs = [(s, t) for _, s, t in corpus]
        reports = [evaluation.evaluate(detectors[m], pairs, m, tolerances, args.threads)
                   for m in methods]
        mode_col = None
    render = {"table": evaluation.format_table, "csv": evaluation.format_csv,
              "json": evaluation.format_json}[args.format]
    _write(render(reports, mode_col), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    fractions = _parse_list(args.fractions)
    corpus = [(s, t) for _, s, t in _load_corpus(args.manifest, cfg, _vowels(args))]
    rows = evaluation.threshold_sweep(corpus, cfg.wavelet, fractions,
                                      max(cfg.tolerances), args.threads)
    lines = ["threshold_pct,miss_pct,spurious_pct"]
    lines += [f"{100 * f:.0f},{m:.1f},{s:.1f}" for f, m, s in rows]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_export_contours(args) -> int:
    cfg = load_config(args.config)
    signal = load_waveform(args.audio, cfg.sample_rate)
    wav = cwt.analyse(signal, cfg.wavelet)
    spec = stm.analyse(signal, cfg.stm)
    candidates = cwt.select_vops(wav.smoothed, cfg.wavelet.threshold_fraction,
                                 cfg.wavelet.min_peak_gap)
    boundaries = stm.select_boundaries(spec.smoothed, cfg.stm.threshold_fraction,
                                       cfg.stm.min_peak_value)
    corrected = snap_vops(candidates, boundaries, cfg.fusion)
    os.makedirs(args.out, exist_ok=True)
    t = np.arange(len(signal)) / signal.sample_rate
    files = {
        "mean_signal.csv": export.series_csv(t, wav.mean_signal),
        "aam.csv": export.contour_csv(wav.aam),
        "aam_smoothed.csv": export.contour_csv(wav.smoothed),
        "stm.csv": export.contour_csv(spec.stm),
        "stm_smoothed.csv": export.contour_csv(spec.smoothed),
        "events.csv": export.events_csv([candidates, boundaries, corrected]),
    }
    for name, text in files.items():
        _write(text, os.path.join(args.out, name))
    return 0


def cmd_synth(args) -> int:
    from .synth import write_corpus

    modes = _parse_list(args.modes, str)
    path = write_corpus(args.out, args.count, args.seed, modes=modes)
    print(path)
    return 0


def cmd_config(args) -> int:
    _write(dump_config(load_config(args.config)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vopdetect", description="Vowel onset point detection")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_choices=("csv", "json"), default="csv"):
        sp.add_argument("--config", help="YAML run config (default: $VOPDETECT_CONFIG)")
        sp.add_argument("--out", default="-", help="output path ('-' for stdout)")
        sp.add_argument("--format", choices=fmt_choices, default=default)

    sp = sub.add_parser("detect", help="detect VOPs in one file")
    sp.add_argument("audio")
    sp.add_argument("--method", choices=METHODS, default="proposed")
    common(sp)
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("boundaries", help="STM phone boundaries of one file")
    sp.add_argument("audio")
    common(sp)
    sp.set_defaults(func=cmd_boundaries)

    sp = sub.add_parser("eval", help="score methods on an annotated manifest")
    sp.add_argument("manifest")
    sp.add_argument("--method", action="append", choices=METHODS + ("all",),
                    help="repeatable; 'all' for every method (default: proposed)")
    sp.add_argument("--tolerances", help="comma-separated ms (default 10,20,30,40)")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--vowels", help="comma-separated vowel labels (default: TIMIT set)")
    common(sp, ("table", "csv", "json"), "table")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sweep", help="CWT threshold sweep on an annotated manifest")
    sp.add_argument("manifest")
    sp.add_argument("--fractions", default="0.11,0.13,0.15,0.17,0.19")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--vowels")
    sp.add_argument("--config")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("export-contours", help="write intermediate contours as CSV")
    sp.add_argument("audio")
    sp.add_argument("--config")
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_export_contours)

    sp = sub.add_parser("synth", help="write a synthetic labelled corpus")
    sp.add_argument("out")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--modes", default="read")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("config", help="print the fully resolved config")
    sp.add_argument("--config")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_config)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "method", None) is None and args.command == "eval":
        args.method = ["proposed"]
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"vopdetect: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CorpusError) as exc:
        print(f"vopdetect: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"vopdetect: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
