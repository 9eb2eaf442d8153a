from pathlib import Path

import pytest

from vasslyze.gen import corpus
from vasslyze.model import make_vass, parse_vass

MODELS = Path(__file__).resolve().parent.parent / "models"


def load(name: str):
    return parse_vass((MODELS / f"{name}.vass").read_text())


@pytest.fixture
def fig1():
    return load("fig1")


@pytest.fixture
def fig2():
    return load("fig2")


@pytest.fixture
def loop_plus1():
    return load("loop_plus1")


@pytest.fixture
def doubling():
    return load("doubling")


def single_loop(*update):
    return make_vass(len(update), ["q"], [("q", list(update), "q")])


@pytest.fixture(scope="session")
def random_corpus():
    return corpus(200)


@pytest.fixture(scope="session")
def classified_corpus(random_corpus):
    from vasslyze.decompose import classify

    return [(v, classify(v)) for v in random_corpus]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
