from pathlib import Path

import pytest

from packbounds.model import normalize, parse_instance

DATA = Path(__file__).parent / "data"


def load(name):
    return parse_instance((DATA / name).read_text())


@pytest.fixture
def nine_cubes():
    return normalize(load("nine_cubes.txt"))


@pytest.fixture
def three_boxes():
    return normalize(load("obpp2_three.txt"))


@pytest.fixture
def five_boxes():
    return normalize(load("obpp3_five.txt"))


@pytest.fixture
def stretch_example():
    return normalize(load("stretch_example.txt"))


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
