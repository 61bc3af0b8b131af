import os
import zlib

import numpy as np
import pytest

SEED = int(os.environ.get("SELFCOMM_SEED", "20240917"))


@pytest.fixture
def rng(request):
    # per-test stream so tests stay independent of execution order
    return np.random.default_rng([SEED, zlib.crc32(request.node.name.encode())])


@pytest.fixture(scope="session")
def seed():
    return SEED


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
