import numpy as np
import pytest

from steerclone.cloning import LambdaTable


def random_tables(d, n, seed):
    rng = np.random.default_rng([seed, d])
    return [LambdaTable(rng.dirichlet(np.ones(d * d)).reshape(d, d)) for _ in range(n)]


@pytest.fixture
def tables():
    return random_tables


# -- acceptance summary: one pass/fail line per criterion -------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    n, title = crit
    ok = _CRITERIA.get(n, (title, True))[1]
    _CRITERIA[n] = (title, ok and report.passed)


@pytest.fixture(autouse=True)
def _record_criterion(request):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        request.node.user_properties.append(("criterion", tuple(mark.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
