import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.skipped):
        status = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        detail = ""
        if report.failed:
            detail = str(report.longrepr.reprcrash.message).splitlines()[0] if report.longrepr else ""
        _results[number] = (title, status, report.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, status, duration, detail = _results[number]
        line = f"criterion {number}: {status:4}  {title}  ({duration:.1f} s)"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)
