import pytest

from knothost import KnowledgeBase, parse_knot, saturate, seed_table
from knothost.runner import SEED_UNIVERSE, parse_universe


@pytest.fixture(scope="session")
def table():
    return seed_table()


@pytest.fixture
def k(table):
    def parse(text):
        return parse_knot(text, table)

    return parse


@pytest.fixture(scope="session")
def seed_kb(table):
    return saturate(KnowledgeBase(parse_universe(SEED_UNIVERSE, table), table))


# one PASS/FAIL line per acceptance criterion in the terminal summary

_criteria = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, text = marker
    prev = _criteria.get(number, (text, True))
    ok = prev[1] and not report.failed
    _criteria[number] = (text, ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        text, ok = _criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {text}")
