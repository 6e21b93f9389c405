import numpy as np
import pytest

from vopdetect.events import PHONE_BOUNDARY, VOP_CANDIDATE, EventList


def test_construct_and_iterate():
    ev = EventList([0.1, 0.2], VOP_CANDIDATE)
    assert len(ev) == 2
    assert list(ev) == [0.1, 0.2]


def test_rejects_unsorted():
    with pytest.raises(ValueError):
        EventList([0.2, 0.1])


def test_rejects_negative_and_nan():
    with pytest.raises(ValueError):
        EventList([-0.1])
    with pytest.raises(ValueError):
        EventList([np.nan])


def test_source_times_aligned():
    with pytest.raises(ValueError):
        EventList([0.1, 0.2], source_times=[0.1])


def test_empty_and_with_kind():
    ev = EventList.empty(PHONE_BOUNDARY)
    assert len(ev) == 0 and ev.kind == PHONE_BOUNDARY
    assert EventList([0.5]).with_kind(PHONE_BOUNDARY).kind == PHONE_BOUNDARY


def test_equality():
    assert EventList([0.1, 0.3]) == EventList(np.array([0.1, 0.3]))
    assert EventList([0.1]) != EventList([0.2])
