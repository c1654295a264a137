import pytest

from ncabel import kernel

_acceptance: list[tuple[str, str]] = []


@pytest.fixture(params=kernel.available_backends())
def backend(request):
    with kernel.use_backend(request.param):
        yield request.param


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    criterion = getattr(report, "criterion", None)
    if criterion:
        _acceptance.append((criterion, "PASS" if report.passed else "FAIL"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and marker.args:
        suffix = f" [{item.callspec.id}]" if hasattr(item, "callspec") else ""
        report.criterion = marker.args[0] + suffix


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status in _acceptance:
        terminalreporter.write_line(f"{status}  {criterion}")
