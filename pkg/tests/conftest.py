import pytest
from hypothesis import settings

from ty3.twisted import build_tables

settings.register_profile("ty3", deadline=None, max_examples=40)
settings.load_profile("ty3")

_TABLES = {}
CRITERION_LINES = []


def tables_to(N):
    """Shared coefficient tables, built once per session."""
    if N not in _TABLES:
        bigger = [n for n in _TABLES if n > N]
        _TABLES[N] = _TABLES[min(bigger)].truncate(N) if bigger else build_tables(N)
    return _TABLES[N]


@pytest.fixture(scope="session")
def t4():
    return tables_to(4)


@pytest.fixture(scope="session")
def t6():
    return tables_to(6)


@pytest.fixture(scope="session")
def t8():
    return tables_to(8)


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERION_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
