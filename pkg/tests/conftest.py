import pytest

from graph_iwasawa import bouquet, complete_graph, two_bond_path

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def x23():
    return two_bond_path(2, 3)


@pytest.fixture
def b2():
    return bouquet(2)


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""
    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
