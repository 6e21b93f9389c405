import numpy as np
import pytest
from hypothesis import settings

from vopdetect.synth import random_corpus

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def synth_corpus():
    """Ten synthetic utterances shared by the slower detector tests."""
    return random_corpus(10, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
