"""CSV and JSON serialisation of events and contours.

Column schemas (version 1):

* contours: ``time_s,value``
* events:   ``time_s,kind,source_time_s`` (``source_time_s`` empty when unknown)

Floats are written with 9 significant digits so repeated runs are
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable

import numpy as np

from .dsp import Contour
from .events import EventList

SCHEMA_VERSION = 1
CONTOUR_COLUMNS = ("time_s", "value")
EVENT_COLUMNS = ("time_s", "kind", "source_time_s")


def _num(x: float) -> str:
    return f"{x:.9g}"


def contour_csv(contour: Contour) -> str:
    return series_csv(contour.times, contour.values)


def series_csv(times: np.ndarray, values: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write(",".join(CONTOUR_COLUMNS) + "\n")
    for t, v in zip(times, values):
        buf.write(f"{_num(t)},{_num(v)}\n")
    return buf.getvalue()


def events_csv(lists: Iterable[EventList] | EventList) -> str:
    if isinstance(lists, EventList):
        lists = [lists]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVENT_COLUMNS)
    for ev in lists:
        src = ev.source_times if ev.source_times is not None else [None] * len(ev)
        for t, s in zip(ev.times, src):
            writer.writerow([_num(t), ev.kind, "" if s is None else _num(s)])
    return buf.getvalue()


def events_json(lists: Iterable[EventList] | EventList) -> str:
    if isinstance(lists, EventList):
        lists = [lists]
    out = []
    for ev in lists:
        src = ev.source_times if ev.source_times is not None else [None] * len(ev)
        out.extend(
            {"time_s": float(_num(t)), "kind": ev.kind,
             "source_time_s": None if s is None else float(_num(s))}
            for t, s in zip(ev.times, src)
        )
    return json.dumps({"schema": SCHEMA_VERSION, "events": out}, indent=2) + "\n"


def read_events_csv(text: str) -> EventList:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        return EventList.empty()
    times = [float(r["time_s"]) for r in rows]
    src = [float(r["source_time_s"]) if r.get("source_time_s") else np.nan for r in rows]
    kind = rows[0]["kind"]
    return EventList(times, kind, None if np.all(np.isnan(src)) else src)
