import json
from importlib import resources

import pytest

from knotq.cli import load_corpus
from knotq.diagram import decorate, parse_diagram

TREFOIL_NAMES = ["s", "r", "q", "p"]


def load_trefoil_spec():
    return json.loads(resources.files("knotq").joinpath("data/trefoil.diagram").read_text())


@pytest.fixture
def trefoil_spec():
    return load_trefoil_spec()


@pytest.fixture
def trefoil(trefoil_spec):
    return parse_diagram(trefoil_spec)


@pytest.fixture
def trefoil_decorated(trefoil):
    return decorate(trefoil)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


# acceptance criteria record one line each; they are echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(number, title, ok, detail="", gating=True):
        status = "PASS" if ok else "FAIL"
        tag = "" if gating else " (conjecture, non-gating)"
        line = "criterion %d %s%s: %s" % (number, status, tag, title)
        if detail:
            line += " | " + detail
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
