import pytest

from hydrogran.dataset import split_train_test
from hydrogran.hydrosim import CycloneSimConfig, generate

_acceptance = {}


@pytest.fixture(scope="session")
def synthetic():
    return generate(CycloneSimConfig())


@pytest.fixture(scope="session")
def reference_split(synthetic):
    return split_train_test(synthetic, 150, 19, seed=0)


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        ident, title = marker
        prev = _acceptance.get(ident, (title, "PASS"))
        status = "PASS" if report.outcome == "passed" and prev[1] == "PASS" else "FAIL"
        _acceptance[ident] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep.acceptance = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for ident in sorted(_acceptance, key=lambda k: int(k.lstrip("AC"))):
        title, status = _acceptance[ident]
        terminalreporter.write_line(f"{ident:<5} {status}  {title}")
