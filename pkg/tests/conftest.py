import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")

_titles: dict[str, str] = {}
_outcomes: dict[str, tuple[str, float]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = CRITERION.search(item.nodeid)
        if m:
            doc = (item.function.__doc__ or "").strip().splitlines()
            _titles[m.group(1)] = doc[0] if doc else item.name


def pytest_runtest_logreport(report):
    m = CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        prev = _outcomes.get(m.group(1))
        if prev is None or prev[0] == "PASS":
            _outcomes[m.group(1)] = ("PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_titles):
        status, secs = _outcomes.get(num, ("NOT RUN", 0.0))
        terminalreporter.write_line(f"criterion {num}: {status:7s} {_titles[num]} ({secs:.2f}s)")
