import pytest

from hopfgraph.fixtures import insertion_corpus


def _named(graphs, prefix):
    return [g.with_name(f"{prefix}{i:03d}") for i, g in enumerate(graphs)]


@pytest.fixture(scope="session")
def ribbon_corpus():
    """Ribbon classes of the insertion closure with at most six internal edges."""
    return _named(insertion_corpus(6), "r")


@pytest.fixture(scope="session")
def plain_corpus8():
    return _named(insertion_corpus(8, ribbon=False), "p")


# one line per acceptance criterion, shown after the run even without -s
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
