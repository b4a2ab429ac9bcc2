from __future__ import annotations

import warnings

import pytest

from drlab.model import preset

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=["real-hyp", "heis", "quat"])
def any_group(request):
    return preset(request.param)


@pytest.fixture(params=["real-hyp", "heis"])
def group(request):
    return preset(request.param)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
