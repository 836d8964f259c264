import os
import random

import pytest

from mmpkit.diagram import parse_mmp
from mmpkit.known import CABELLO_18_9, KS_7_5, KS_10_5


ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE_LINES]


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MMPKIT_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch reproduction; set MMPKIT_STRETCH=1 to run")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def ks7():
    return parse_mmp(KS_7_5)


@pytest.fixture
def cabello():
    return parse_mmp(CABELLO_18_9)


@pytest.fixture
def ks10():
    return parse_mmp(KS_10_5)


@pytest.fixture
def rng():
    return random.Random(20261016)
