"""End-to-end workflow through the command line.

Writes a small labelled synthetic corpus (WAV + .PHN + manifest), then
drives the ``vopdetect`` CLI: detection on one file, a four-method
evaluation with a per-mode split, and contour export for plotting.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from vopdetect.synth import write_corpus


def vopdetect(*args):
    cmd = [sys.executable, "-m", "vopdetect.cli", *map(str, args)]
    print("$ vopdetect", " ".join(map(str, args)))
    out = subprocess.run(cmd, check=True, capture_output=True, text=True).stdout
    print(out)
    return out


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    manifest = write_corpus(tmp / "corpus", 6, seed=3, modes=("read", "conversation"))
    print((tmp / "corpus" / "manifest.csv").read_text())

    first = sorted((tmp / "corpus").glob("*.wav"))[0]
    vopdetect("detect", first, "--format", "json")
    vopdetect("eval", manifest, "--method", "all", "--threads", "2")
    vopdetect("export-contours", first, "--out", tmp / "contours")
    for f in sorted((tmp / "contours").iterdir()):
        print(f"{f.name:18s} {len(f.read_text().splitlines()) - 1:6d} rows")
