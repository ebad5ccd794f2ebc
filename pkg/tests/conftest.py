import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


# --- acceptance report ------------------------------------------------------

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        n, title = marker
        prev = _acceptance.get(n, (title, True))
        _acceptance[n] = (title, prev[1] and report.outcome == "passed")


@pytest.fixture(autouse=True)
def _record_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m is not None:
        request.node.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, ok = _acceptance[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}")
